// Demand topology of a single-antenna interference network: K transmitters,
// N receivers, each receiver requesting a subset of the transmitted messages.

#ifndef CAIA_NETWORK_HPP
#define CAIA_NETWORK_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace caia {

struct NetworkError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// K transmitters, N receivers, demands[j] = S_{j+1} (1-based transmitter
/// indices, stored sorted and deduplicated after validate()).
struct DemandNetwork {
    int K = 0;
    int N = 0;
    std::vector<std::vector<int>> demands;

    // Filled by validate().
    std::vector<bool> active;   // size K; transmitter requested by someone
    bool validated = false;

    int active_count() const;
    std::vector<int> active_transmitters() const;  // ascending 1-based
    bool is_active(int tx) const { return active.at(tx - 1); }
};

/// Receivers whose demand sets are maximal under inclusion; one representative
/// is kept among receivers with identical demands (the lowest index).
struct PrimeReceiverSet {
    std::vector<int> indices;  // ascending 1-based receiver indices
    int G = 0;
};

/// Checks indices and shapes, canonicalizes demand sets (sorted, unique),
/// flags transmitters nobody requests as inactive. Idempotent.
DemandNetwork validate(DemandNetwork network);

PrimeReceiverSet prime_receivers(const DemandNetwork& network);

/// Interference set of a receiver: active transmitters it did not request.
std::vector<int> interference_set(const DemandNetwork& network, int receiver);

/// Convenience constructor for literals in tests and fixtures.
DemandNetwork make_network(int K, const std::vector<std::vector<int>>& demands);

}  // namespace caia

#endif
