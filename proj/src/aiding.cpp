#include "caia/aiding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

namespace caia {

namespace {

/// Union-find over tau positions.
struct PositionSets {
    std::vector<int> parent;
    explicit PositionSets(int tau) : parent(tau) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::vector<int>> blocks() {
        std::map<int, std::vector<int>> by_root;
        for (int p = 0; p < static_cast<int>(parent.size()); ++p) by_root[find(p)].push_back(p);
        std::vector<std::vector<int>> out;
        for (auto& [root, members] : by_root) out.push_back(std::move(members));
        return out;  // map order = lowest position order
    }
};

}  // namespace

void AidingStructure::validate() const {
    if (n < 1) throw AidingError("structure needs n >= 1");
    if (n1 < 1 || n1 > n) throw AidingError("structure needs 1 <= distinct values <= n");
    if (2 * n1 > tau)
        throw AidingError("structure infeasible: tau=" + std::to_string(tau) +
                          " cannot hold two copies of " + std::to_string(n1) + " values");
    if (static_cast<int>(value_index.size()) != tau - 2 * n1)
        throw AidingError("structure tail map has wrong length");
    for (int v : value_index)
        if (v < 0 || v >= n1) throw AidingError("structure tail map references a missing value");
    if (!values.empty() && static_cast<int>(values.size()) != n1)
        throw AidingError("structure has wrong number of explicit values");
    if (!permutation.empty()) {
        if (static_cast<int>(permutation.size()) != tau)
            throw AidingError("structure permutation has wrong length");
        std::vector<bool> seen(tau, false);
        for (int p : permutation) {
            if (p < 0 || p >= tau || seen[p]) throw AidingError("structure permutation invalid");
            seen[p] = true;
        }
    }
}

std::vector<std::vector<int>> AidingStructure::position_blocks() const {
    validate();
    auto stacked_value = [&](int p) {
        if (p < n1) return p;
        if (p < 2 * n1) return p - n1;
        return value_index[p - 2 * n1];
    };
    std::vector<std::vector<int>> blocks(n1);
    for (int q = 0; q < tau; ++q) {
        const int p = permutation.empty() ? q : permutation[q];
        blocks[stacked_value(p)].push_back(q);
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return blocks;
}

std::vector<Complex> AidingStructure::assemble() const {
    validate();
    if (static_cast<int>(values.size()) != n1)
        throw AidingError("cannot assemble a structure without explicit values");
    auto stacked_value = [&](int p) {
        if (p < n1) return values[p];
        if (p < 2 * n1) return values[p - n1];
        return values[value_index[p - 2 * n1]];
    };
    std::vector<Complex> out(tau);
    for (int q = 0; q < tau; ++q) out[q] = stacked_value(permutation.empty() ? q : permutation[q]);
    return out;
}

AidingStructure AidingStructure::uniform(int n, int tau, int distinct) {
    AidingStructure s;
    s.n = n;
    s.tau = tau;
    s.n1 = distinct;
    if (distinct >= 1 && 2 * distinct <= tau) {
        s.value_index.resize(tau - 2 * distinct);
        for (size_t i = 0; i < s.value_index.size(); ++i)
            s.value_index[i] = static_cast<int>(i) % distinct;
    }
    s.validate();
    return s;
}

int JointPartition::min_block() const {
    int m = 0;
    for (const auto& b : blocks) {
        const int s = static_cast<int>(b.size());
        if (m == 0 || s < m) m = s;
    }
    return m;
}

VerifyResult verify_conditions(const std::vector<AidingCondition>& conditions, int n, double eps) {
    if (n < 1) throw AidingError("verification needs n >= 1");
    VerifyResult result;
    if (conditions.empty()) {
        result.feasible = true;
        result.reason = "no conditions";
        return result;
    }
    const int tau = conditions[0].T.size();
    for (const auto& c : conditions)
        if (c.T.size() != tau) throw AidingError("condition diagonals differ in size");

    PositionSets sets(tau);
    for (int p = 0; p < tau; ++p)
        for (int q = p + 1; q < tau; ++q) {
            bool equal = true;
            for (const auto& c : conditions)
                if (!rel_close(c.T(p), c.T(q), eps)) {
                    equal = false;
                    break;
                }
            if (equal) sets.unite(p, q);
        }
    result.partition.tau = tau;
    result.partition.blocks = sets.blocks();

    for (const auto& b : result.partition.blocks)
        if (b.size() < 2) {
            result.reason = "position " + std::to_string(b.front()) +
                            " carries a unique diagonal value (no repetition)";
            return result;
        }
    if (result.partition.block_count() > n) {
        result.reason = "partition has " + std::to_string(result.partition.block_count()) +
                        " blocks but only n=" + std::to_string(n) + " beam columns";
        return result;
    }
    result.feasible = true;
    return result;
}

namespace {

struct CyclePlan {
    const AlignmentGraph* graph;
    int cycle;                     // index within graph
    const AidingStructure* shape;
    std::vector<HFactor> factors;  // full cycle factor list
    int designated_receiver;
    int designated_tx;
    size_t designated_factor;      // position inside factors
};

double geometric_mean(const std::vector<double>& xs) {
    double acc = 0;
    for (double x : xs) acc += std::log(x);
    return std::exp(acc / static_cast<double>(xs.size()));
}

}  // namespace

ExtendedChannel synthesize_aided_channel(
    int tau, int receivers, int transmitters,
    const std::vector<std::pair<AlignmentGraph, std::vector<AidingStructure>>>& rounds,
    const SynthesisOptions& options) {
    if (tau <= 0) throw AidingError("synthesis needs tau >= 1");

    // Validate shapes, check the shared-partition precondition per round, and
    // pick designated gains, one per cycle, unique across everything.
    std::vector<CyclePlan> plans;
    std::set<std::pair<int, int>> designated;
    for (const auto& [graph, structures] : rounds) {
        if (structures.size() != graph.cycles.size())
            throw AidingError("need exactly one structure per fundamental cycle");
        if (structures.empty()) continue;
        const auto reference_blocks = structures[0].position_blocks();
        const int n = structures[0].n;
        for (const auto& s : structures) {
            s.validate();
            if (s.tau != tau) throw AidingError("structure tau differs from channel extension");
            if (s.n != n || s.position_blocks() != reference_blocks)
                throw AidingError("structures of one condition set must share one partition");
        }
        if (static_cast<int>(reference_blocks.size()) > n)
            throw AidingError("prescribed structure infeasible: more blocks than beam columns");
        for (const auto& b : reference_blocks)
            if (b.size() < 2)
                throw AidingError("prescribed structure infeasible: unrepeated value");

        auto factor_lists = cycle_factor_lists(graph);
        for (size_t c = 0; c < graph.cycles.size(); ++c) {
            CyclePlan plan;
            plan.graph = &graph;
            plan.cycle = static_cast<int>(c);
            plan.shape = &structures[c];
            plan.factors = std::move(factor_lists[c]);
            // The non-tree edge is traversed first and forward, so its
            // `from` gain is factor 1 and appears nowhere else in the graph.
            const GraphEdge& loose = graph.edges[graph.cycles[c].nontree_edge];
            plan.designated_receiver = loose.receiver;
            plan.designated_tx = loose.from;
            plan.designated_factor = 1;
            const auto& f = plan.factors[1];
            if (f.receiver != loose.receiver || f.tx != loose.from || f.inverted)
                throw AidingError("internal: unexpected cycle factor layout");
            if (!designated.insert({loose.receiver, loose.from}).second)
                throw AidingError("two cycles designate the same solved gain H[" +
                                  std::to_string(loose.receiver) + "," +
                                  std::to_string(loose.from) + "]; cannot satisfy both exactly");
            plans.push_back(std::move(plan));
        }
    }

    std::mt19937_64 rng(options.seed);
    const double mid = std::sqrt(options.bounds.gmin * options.bounds.gmax);
    // Free gains stay well inside the band so the solved gains, products of
    // several free ones, still land inside it most of the time.
    const double halfwidth = std::pow(options.bounds.gmax / options.bounds.gmin, 1.0 / 8.0);
    std::uniform_real_distribution<double> logmag(std::log(mid / halfwidth),
                                                  std::log(mid * halfwidth));
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    auto draw = [&] {
        const double m = std::exp(logmag(rng));
        const double p = phase(rng);
        return Complex(m * std::cos(p), m * std::sin(p));
    };

    for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
        ExtendedChannel channel(tau, receivers, transmitters);
        for (int j = 1; j <= receivers; ++j)
            for (int k = 1; k <= transmitters; ++k) {
                std::vector<Complex> entries(tau);
                for (auto& e : entries) e = draw();
                channel.set_gain(j, k, DiagonalMatrix(std::move(entries)));
            }

        bool in_bounds = true;
        for (const auto& plan : plans) {
            // Cycle product = rest * designated, entrywise; solve designated.
            std::vector<Complex> rest(tau, Complex(1, 0));
            for (size_t i = 0; i < plan.factors.size(); ++i) {
                if (i == plan.designated_factor) continue;
                const auto& f = plan.factors[i];
                for (int s = 0; s < tau; ++s) {
                    const Complex g = channel.slot_gain(s, f.receiver, f.tx);
                    if (f.inverted)
                        rest[s] /= g;
                    else
                        rest[s] *= g;
                }
            }
            std::vector<Complex> target(tau);
            const auto blocks = plan.shape->position_blocks();
            if (!plan.shape->values.empty()) {
                target = plan.shape->assemble();
            } else {
                // Per block, center the solved gain's magnitude at mid.
                for (const auto& block : blocks) {
                    std::vector<double> mags;
                    for (int p : block) mags.push_back(std::abs(rest[p]));
                    const double mag = mid * geometric_mean(mags);
                    const double ph = phase(rng);
                    const Complex value(mag * std::cos(ph), mag * std::sin(ph));
                    for (int p : block) target[p] = value;
                }
            }
            std::vector<Complex> solved(tau);
            for (int s = 0; s < tau; ++s) {
                if (target[s] == Complex(0, 0))
                    throw AidingError("prescribed structure has a zero diagonal value");
                solved[s] = target[s] / rest[s];
                const double m = std::abs(solved[s]);
                if (m < options.bounds.gmin || m > options.bounds.gmax) in_bounds = false;
            }
            if (!in_bounds) break;
            channel.set_gain(plan.designated_receiver, plan.designated_tx,
                             DiagonalMatrix(std::move(solved)));
        }
        if (!in_bounds) continue;

        // Closing check: recompute every condition set from the finished
        // channel. A mismatch means two condition sets stepped on each other
        // (a later solved gain feeding an earlier cycle), which no retry
        // fixes.
        for (const auto& plan : plans) {
            const auto target = plan.shape->values.empty()
                                    ? std::vector<Complex>{}
                                    : plan.shape->assemble();
            std::vector<Complex> got(tau);
            for (int s = 0; s < tau; ++s) got[s] = evaluate_factors(plan.factors, channel, s);
            if (!target.empty())
                for (int s = 0; s < tau; ++s)
                    if (!rel_close(got[s], target[s], options.eps))
                        throw AidingError("condition sets conflict: a solved gain feeds an "
                                          "earlier cycle");
            for (const auto& block : plan.shape->position_blocks())
                for (size_t i = 1; i < block.size(); ++i)
                    if (!rel_close(got[block[0]], got[block[i]], options.eps))
                        throw AidingError("condition sets conflict: a solved gain feeds an "
                                          "earlier cycle");
        }
        return channel;
    }
    throw AidingError("solved gains left the magnitude bounds on every attempt (" +
                      std::to_string(options.max_attempts) + ")");
}

ExtendedChannel synthesize_aided_channel(const DemandNetwork& network,
                                         const std::vector<AidingStructure>& structures,
                                         const SynthesisOptions& options) {
    if (structures.empty()) throw AidingError("need at least one structure");
    AlignmentGraph graph = build_topology(network);
    return synthesize_aided_channel(structures[0].tau, network.N, network.K,
                                    {{std::move(graph), structures}}, options);
}

ExtendedChannel synthesize_aided_channel(const DemandNetwork& network, int n, int tau,
                                         int distinct, const SynthesisOptions& options) {
    AlignmentGraph graph = build_topology(network);
    std::vector<AidingStructure> structures(graph.cycles.size(),
                                            AidingStructure::uniform(n, tau, distinct));
    return synthesize_aided_channel(tau, network.N, network.K, {{std::move(graph), structures}},
                                    options);
}

namespace {

struct Cluster {
    std::vector<int> members;               // slot ids, oldest first
    std::vector<Complex> representative;    // t-vector of the first member
};

double joint_residual(const std::vector<std::vector<Complex>>& t_by_slot,
                      const std::vector<int>& slots) {
    double worst = 0;
    for (size_t a = 0; a < slots.size(); ++a)
        for (size_t b = a + 1; b < slots.size(); ++b) {
            const auto& ta = t_by_slot[slots[a]];
            const auto& tb = t_by_slot[slots[b]];
            for (size_t c = 0; c < ta.size(); ++c) {
                const double scale = std::max(std::abs(ta[c]), std::abs(tb[c]));
                if (scale > 0) worst = std::max(worst, std::abs(ta[c] - tb[c]) / scale);
            }
        }
    return worst;
}

}  // namespace

MatchReport match_slots(const ExtendedChannel& stream, const DemandNetwork& network,
                        const AidingStructure& structure, double eps, int budget) {
    if (eps < 0) throw AidingError("matching tolerance must be >= 0");
    structure.validate();
    const auto blocks = structure.position_blocks();
    if (static_cast<int>(blocks.size()) > structure.n)
        throw AidingError("matching structure infeasible: more blocks than beam columns");
    AlignmentGraph topology = build_topology(network);
    const auto factor_lists = cycle_factor_lists(topology);
    if (factor_lists.empty())
        throw AidingError("network has no alignment conditions; nothing to match");

    // Block quotas, largest first; greedy first-fit onto the largest cluster.
    std::vector<std::pair<int, int>> quotas;  // (size, block index)
    for (size_t b = 0; b < blocks.size(); ++b)
        quotas.push_back({static_cast<int>(blocks[b].size()), static_cast<int>(b)});
    std::sort(quotas.begin(), quotas.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });

    MatchReport report;
    const int limit = std::min<int>(budget, stream.tau());
    std::vector<std::vector<Complex>> t_by_slot;
    std::vector<Cluster> clusters;
    // Half tolerance against the representative keeps any pair inside a
    // cluster within eps of each other.
    const double join_eps = eps / 2;

    for (int slot = 0; slot < limit; ++slot) {
        std::vector<Complex> t(factor_lists.size());
        for (size_t c = 0; c < factor_lists.size(); ++c)
            t[c] = evaluate_factors(factor_lists[c], stream, slot);
        t_by_slot.push_back(t);

        bool placed = false;
        for (auto& cluster : clusters) {
            bool close = true;
            for (size_t c = 0; c < t.size(); ++c)
                if (!rel_close(t[c], cluster.representative[c], join_eps)) {
                    close = false;
                    break;
                }
            if (close) {
                cluster.members.push_back(slot);
                placed = true;
                break;
            }
        }
        if (!placed) clusters.push_back({{slot}, t});

        // Try to emit a group: assign each quota to a cluster with room.
        std::vector<int> remaining(clusters.size());
        for (size_t i = 0; i < clusters.size(); ++i)
            remaining[i] = static_cast<int>(clusters[i].members.size());
        std::vector<int> cluster_of_block(blocks.size(), -1);
        bool all_placed = true;
        for (const auto& [size, block] : quotas) {
            int best = -1;
            for (size_t i = 0; i < clusters.size(); ++i)
                if (remaining[i] >= size && (best < 0 || remaining[i] > remaining[best]))
                    best = static_cast<int>(i);
            if (best < 0) {
                all_placed = false;
                break;
            }
            remaining[best] -= size;
            cluster_of_block[block] = best;
        }
        if (!all_placed) continue;

        SlotGroup group;
        group.slots.assign(structure.tau, -1);
        std::vector<int> used_slots;
        for (size_t b = 0; b < blocks.size(); ++b) {
            auto& members = clusters[cluster_of_block[b]].members;
            for (int p : blocks[b]) {
                group.slots[p] = members.front();
                used_slots.push_back(members.front());
                members.erase(members.begin());
            }
        }
        group.residual = joint_residual(t_by_slot, used_slots);
        report.groups.push_back(std::move(group));
        // Drop emptied clusters so representatives stay meaningful.
        std::erase_if(clusters, [](const Cluster& c) { return c.members.empty(); });
    }

    report.slots_consumed = limit;
    const int matched = static_cast<int>(report.groups.size()) * structure.tau;
    report.match_rate = limit > 0 ? static_cast<double>(matched) / limit : 0.0;
    for (const auto& g : report.groups)
        report.worst_residual = std::max(report.worst_residual, g.residual);
    return report;
}

}  // namespace caia
