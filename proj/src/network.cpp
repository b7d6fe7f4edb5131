#include "caia/network.hpp"

#include <algorithm>

namespace caia {

int DemandNetwork::active_count() const {
    return static_cast<int>(std::count(active.begin(), active.end(), true));
}

std::vector<int> DemandNetwork::active_transmitters() const {
    std::vector<int> out;
    for (int k = 1; k <= K; ++k)
        if (active[k - 1]) out.push_back(k);
    return out;
}

DemandNetwork validate(DemandNetwork network) {
    if (network.K <= 0) throw NetworkError("K must be positive");
    if (network.N <= 0) throw NetworkError("N must be positive");
    if (static_cast<int>(network.demands.size()) != network.N)
        throw NetworkError("expected " + std::to_string(network.N) + " demand sets, got " +
                           std::to_string(network.demands.size()));

    network.active.assign(network.K, false);
    for (int j = 0; j < network.N; ++j) {
        auto& set = network.demands[j];
        if (set.empty())
            throw NetworkError("demand set S" + std::to_string(j + 1) + " is empty");
        for (int idx : set) {
            if (idx < 1 || idx > network.K)
                throw NetworkError("index " + std::to_string(idx) + " in S" +
                                   std::to_string(j + 1) + " out of range 1.." +
                                   std::to_string(network.K));
            network.active[idx - 1] = true;
        }
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    network.validated = true;
    return network;
}

namespace {
bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}
}  // namespace

PrimeReceiverSet prime_receivers(const DemandNetwork& network) {
    if (!network.validated) throw NetworkError("network not validated");
    PrimeReceiverSet out;
    for (int j = 0; j < network.N; ++j) {
        bool dominated = false;
        for (int i = 0; i < network.N && !dominated; ++i) {
            if (i == j) continue;
            if (!subset_of(network.demands[j], network.demands[i])) continue;
            // Strict subset dominates; among equals keep the lowest index.
            if (network.demands[j] != network.demands[i] || i < j) dominated = true;
        }
        if (!dominated) out.indices.push_back(j + 1);
    }
    out.G = static_cast<int>(out.indices.size());
    return out;
}

std::vector<int> interference_set(const DemandNetwork& network, int receiver) {
    if (!network.validated) throw NetworkError("network not validated");
    if (receiver < 1 || receiver > network.N)
        throw NetworkError("receiver " + std::to_string(receiver) + " out of range");
    const auto& wanted = network.demands[receiver - 1];
    std::vector<int> out;
    for (int k = 1; k <= network.K; ++k) {
        if (!network.active[k - 1]) continue;
        if (!std::binary_search(wanted.begin(), wanted.end(), k)) out.push_back(k);
    }
    return out;
}

DemandNetwork make_network(int K, const std::vector<std::vector<int>>& demands) {
    DemandNetwork net;
    net.K = K;
    net.N = static_cast<int>(demands.size());
    net.demands = demands;
    return validate(std::move(net));
}

}  // namespace caia
