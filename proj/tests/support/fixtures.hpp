// Shared network fixtures and the random-network sampler used by unit and
// acceptance tests.

#ifndef TESTS_SUPPORT_FIXTURES_HPP
#define TESTS_SUPPORT_FIXTURES_HPP

#include <random>

#include "caia/network.hpp"

namespace fixtures {

// Three receivers each demanding an opposite pair out of six transmitters.
inline caia::DemandNetwork net_6x3() {
    return caia::make_network(6, {{1, 4}, {2, 5}, {3, 6}});
}

// Unequal demands: optimum (2/5, 2/5, 1/5, 1/5, 1/5).
inline caia::DemandNetwork net_5x3() {
    return caia::make_network(5, {{1, 5}, {1, 2}, {3, 4, 5}});
}

// Transmitter 1 demanded everywhere and priced out of the optimum.
inline caia::DemandNetwork net_4x3() {
    return caia::make_network(4, {{1, 2}, {1, 3}, {1, 4}});
}

// Single receiver wanting both messages: multiple-access, total DoF 1.
inline caia::DemandNetwork net_mac2() { return caia::make_network(2, {{1, 2}}); }

// Classic K-user interference channel: receiver i wants message i.
inline caia::DemandNetwork net_kuser(int K) {
    std::vector<std::vector<int>> demands;
    for (int i = 1; i <= K; ++i) demands.push_back({i});
    return caia::make_network(K, demands);
}

/// Random validated network. Demand set sizes are uniform in [1, max_set].
/// Optionally insists that every transmitter is demanded somewhere and that
/// at least min_primes prime receivers survive deduplication.
inline caia::DemandNetwork random_network(std::mt19937_64& rng, int K, int N, int max_set,
                                          bool all_active, int min_primes) {
    for (int tries = 0; tries < 100000; ++tries) {
        std::vector<std::vector<int>> demands(N);
        std::uniform_int_distribution<int> size_of(1, max_set);
        for (auto& s : demands) {
            std::vector<int> pool(K);
            for (int i = 0; i < K; ++i) pool[i] = i + 1;
            std::shuffle(pool.begin(), pool.end(), rng);
            s.assign(pool.begin(), pool.begin() + size_of(rng));
        }
        caia::DemandNetwork net;
        try {
            net = caia::make_network(K, demands);
        } catch (const caia::NetworkError&) {
            continue;
        }
        if (all_active && net.active_count() != K) continue;
        if (caia::prime_receivers(net).G < min_primes) continue;
        return net;
    }
    throw std::runtime_error("random_network: constraints unsatisfiable");
}

}  // namespace fixtures

#endif
