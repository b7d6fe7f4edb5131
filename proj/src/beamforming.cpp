#include "caia/beamforming.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <queue>
#include <random>

#include "caia/rational.hpp"

namespace caia {

int BeamformingSet::columns(int k) const {
    auto it = V.find(k);
    return it == V.end() ? 0 : static_cast<int>(it->second.cols());
}

void BeamformingSet::append(const BeamformingSet& more) {
    if (tau == 0) tau = more.tau;
    if (more.tau != tau) throw DesignError("beamformer extensions differ");
    for (const auto& [k, m] : more.V) {
        auto it = V.find(k);
        if (it == V.end()) {
            V[k] = m;
        } else {
            Eigen::MatrixXcd joined(tau, it->second.cols() + m.cols());
            joined << it->second, m;
            it->second = std::move(joined);
        }
    }
    int maxk = dof.empty() ? 0 : static_cast<int>(dof.size());
    for (const auto& [k, m] : V) maxk = std::max(maxk, k);
    dof.assign(maxk, 0);
    for (const auto& [k, m] : V) dof[k - 1] = static_cast<int>(m.cols());
}

int numeric_rank(const Eigen::MatrixXcd& m, int tau, double eps) {
    if (m.size() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double threshold = sv(0) * tau * eps;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > threshold) ++rank;
    return rank;
}

namespace {

Eigen::MatrixXcd generic_columns(int tau, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd m(tau, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < tau; ++r) m(r, c) = Complex(gauss(rng), gauss(rng));
    return m;
}

/// Root columns: one generic column per chosen block, blocks chosen
/// round-robin by descending size, at most |B|-1 per block (|B| when forced).
Eigen::MatrixXcd root_columns(int tau, int cols, const std::vector<std::vector<int>>& blocks,
                              bool force, std::mt19937_64& rng) {
    if (cols > tau) throw DesignError("more columns than extension dimensions");
    std::vector<std::vector<int>> ordered = blocks;
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() > b.size() : a.front() < b.front();
    });
    if (!force) {
        int capacity = 0;
        for (const auto& b : ordered) capacity += static_cast<int>(b.size()) - 1;
        if (cols < static_cast<int>(ordered.size()))
            throw DesignError("cannot cover " + std::to_string(ordered.size()) +
                              " partition blocks with " + std::to_string(cols) + " columns");
        if (cols > capacity)
            throw DesignError("requested columns exceed partition capacity " +
                              std::to_string(capacity));
    }
    std::vector<int> count(ordered.size(), 0);
    int placed = 0, cursor = 0, stuck = 0;
    while (placed < cols) {
        const auto& b = ordered[cursor];
        const int cap = force ? static_cast<int>(b.size())
                              : static_cast<int>(b.size()) - 1;
        if (count[cursor] < cap) {
            ++count[cursor];
            ++placed;
            stuck = 0;
        } else if (++stuck > static_cast<int>(ordered.size())) {
            throw DesignError("partition cannot host the requested columns");
        }
        cursor = (cursor + 1) % static_cast<int>(ordered.size());
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(tau, cols);
    int col = 0;
    for (size_t i = 0; i < ordered.size(); ++i)
        for (int q = 0; q < count[i]; ++q, ++col)
            for (int p : ordered[i]) m(p, col) = Complex(gauss(rng), gauss(rng));
    return m;
}

}  // namespace

BeamformingSet design_round(const ExtendedChannel& channel, const AlignmentGraph& graph,
                            const JointPartition& partition, const std::vector<int>& transmitters,
                            int columns, const std::vector<int>& preferred_roots,
                            const DesignOptions& opts) {
    if (columns < 1) throw DesignError("need at least one column per transmitter");
    if (!graph.edges.empty() && !graph.labeled)
        throw DesignError("propagation needs a labeled graph");
    const int tau = channel.tau();
    std::mt19937_64 rng(opts.seed);

    std::vector<std::vector<int>> blocks = partition.blocks;
    if (blocks.empty()) {
        // No conditions constrain this round; one full-width block.
        blocks.emplace_back(tau);
        std::iota(blocks.back().begin(), blocks.back().end(), 0);
    }

    BeamformingSet out;
    out.tau = tau;

    // Adjacency over tree edges for propagation.
    std::vector<std::vector<std::pair<int, int>>> tree_adj(graph.nodes.size());
    for (int e : graph.tree_edges) {
        const int a = graph.node_pos(graph.edges[e].from);
        const int b = graph.node_pos(graph.edges[e].to);
        tree_adj[a].push_back({e, b});
        tree_adj[b].push_back({e, a});
    }

    std::vector<bool> done(graph.nodes.size(), false);
    for (int comp = 0; comp < graph.components; ++comp) {
        int root_pos = -1;
        for (size_t p = 0; p < graph.nodes.size(); ++p) {
            if (graph.component_of[p] != comp) continue;
            const bool preferred = std::binary_search(preferred_roots.begin(),
                                                      preferred_roots.end(), graph.nodes[p]);
            if (root_pos < 0) root_pos = static_cast<int>(p);
            if (preferred && !std::binary_search(preferred_roots.begin(), preferred_roots.end(),
                                                 graph.nodes[root_pos])) {
                root_pos = static_cast<int>(p);
            }
        }
        if (root_pos < 0) continue;

        Eigen::MatrixXcd root_v = root_columns(tau, columns, blocks, opts.force, rng);
        out.V[graph.nodes[root_pos]] = root_v;
        done[root_pos] = true;
        std::queue<int> q;
        q.push(root_pos);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (const auto& [e, v] : tree_adj[u]) {
                if (done[v]) continue;
                const DiagonalMatrix& label = graph.labels[e];
                const bool u_is_from = graph.node_pos(graph.edges[e].from) == u;
                // label maps V[from] to V[to].
                const Eigen::MatrixXcd& parent = out.V[graph.nodes[u]];
                out.V[graph.nodes[v]] =
                    u_is_from ? label.apply(parent) : label.inverse().apply(parent);
                done[v] = true;
                q.push(v);
            }
        }
    }

    // Transmitters outside the alignment graph carry unconstrained columns.
    for (int k : transmitters)
        if (!graph.has_node(k)) out.V[k] = generic_columns(tau, columns, rng);

    BeamformingSet tmp;
    tmp.tau = tau;
    out.append(tmp);  // refresh dof vector
    return out;
}

PeelingPlan plan_irregular(const DemandNetwork& network, const DoFAssignment& d, int multiplier) {
    if (!network.validated) throw NetworkError("network must be validated first");
    if (multiplier < 1) throw DesignError("extension multiplier must be >= 1");
    if (static_cast<int>(d.d.size()) != network.K)
        throw DesignError("DoF assignment size does not match network");
    std::vector<Rational> positive;
    for (const Rational& x : d.d) {
        if (x < 0) throw DesignError("negative DoF component");
        if (x > 0) positive.push_back(x);
    }
    if (positive.empty()) throw DesignError("no transmitter carries positive DoF");

    PeelingPlan plan;
    plan.Ne = static_cast<int>(lcm_denominators(positive));
    plan.multiplier = multiplier;
    plan.tau = plan.Ne * multiplier;
    plan.total_columns.assign(network.K, 0);
    for (int k = 0; k < network.K; ++k) {
        const Rational scaled = d.d[k] * plan.tau;
        plan.total_columns[k] = static_cast<int>(numerator(scaled));
        if (denominator(scaled) != 1)
            throw DesignError("extension does not clear DoF denominators");
    }

    std::vector<int> remaining = plan.total_columns;
    while (true) {
        std::vector<int> active;
        int cs = 0;
        for (int k = 1; k <= network.K; ++k)
            if (remaining[k - 1] > 0) {
                active.push_back(k);
                cs = cs == 0 ? remaining[k - 1] : std::min(cs, remaining[k - 1]);
            }
        if (active.empty()) break;
        PeelingRound round;
        round.active = active;
        round.columns = cs;
        for (int j = 1; j <= network.N; ++j) {
            std::vector<int> sbar;
            for (int i : interference_set(network, j))
                if (std::binary_search(active.begin(), active.end(), i)) sbar.push_back(i);
            round.restricted.push_back({j, std::move(sbar)});
        }
        round.topology = build_topology(round.restricted);
        round.within_half = 2 * cs <= plan.tau;
        plan.rounds.push_back(std::move(round));
        for (int k : active) remaining[k - 1] -= cs;
    }
    return plan;
}

int PeelingPlan::condition_count() const {
    int total = 0;
    for (const auto& r : rounds) total += r.topology.cycle_count();
    return total;
}

std::vector<std::pair<AlignmentGraph, std::vector<AidingStructure>>> plan_structures(
    const PeelingPlan& plan, int distinct) {
    std::vector<std::pair<AlignmentGraph, std::vector<AidingStructure>>> out;
    for (const auto& round : plan.rounds) {
        const int m = std::max(1, std::min(distinct, round.columns));
        std::vector<AidingStructure> structures;
        if (round.topology.cycle_count() > 0)
            structures.assign(round.topology.cycle_count(),
                              AidingStructure::uniform(round.columns, plan.tau, m));
        out.push_back({round.topology, std::move(structures)});
    }
    return out;
}

ExtendedChannel synthesize_for_plan(const DemandNetwork& network, const PeelingPlan& plan,
                                    int distinct, const SynthesisOptions& options) {
    return synthesize_aided_channel(plan.tau, network.N, network.K,
                                    plan_structures(plan, distinct), options);
}

BeamformingSet design_beamformers(const ExtendedChannel& channel, const DemandNetwork& network,
                                  const PeelingPlan& plan, const DesignOptions& opts) {
    if (channel.tau() != plan.tau) throw DesignError("channel extension does not match plan");
    if (channel.transmitters() < network.K || channel.receivers() < network.N)
        throw DesignError("channel smaller than network");

    BeamformingSet total;
    total.tau = plan.tau;
    for (size_t r = 0; r < plan.rounds.size(); ++r) {
        const PeelingRound& round = plan.rounds[r];
        AlignmentGraph graph = label_topology(round.topology, channel);
        const auto conditions = cycle_conditions(graph);
        const VerifyResult vr = verify_conditions(conditions, round.columns, opts.eps_eq);
        if (!vr.feasible && !conditions.empty() && !opts.force)
            throw DesignError("round " + std::to_string(r + 1) +
                              " conditions infeasible: " + vr.reason);

        std::vector<int> preferred;
        for (int k : network.demands[0])
            if (std::binary_search(round.active.begin(), round.active.end(), k))
                preferred.push_back(k);

        DesignOptions round_opts = opts;
        round_opts.seed = opts.seed + 0x9e3779b9u * static_cast<std::uint64_t>(r + 1);
        total.append(design_round(channel, graph, vr.partition, round.active, round.columns,
                                  preferred, round_opts));
    }

    for (int k = 1; k <= network.K; ++k)
        if (total.columns(k) != plan.total_columns[k - 1])
            throw DesignError("transmitter " + std::to_string(k) +
                              " column count does not match plan");

    if (!opts.force) {
        for (const auto& [k, m] : total.V) {
            if (m.cols() == 0) continue;
            if (numeric_rank(m, plan.tau, opts.eps_rank) != m.cols())
                throw DesignError("beamformer of transmitter " + std::to_string(k) +
                                  " lost column rank");
        }
    }
    return total;
}

AlignmentReport verify_alignment(const ExtendedChannel& channel, const DemandNetwork& network,
                                 const BeamformingSet& V, double eps_rank) {
    if (!network.validated) throw NetworkError("network must be validated first");
    const int tau = channel.tau();
    AlignmentReport report;
    report.all_decodable = true;
    for (int j = 1; j <= network.N; ++j) {
        ReceiverReport r;
        r.receiver = j;
        std::vector<Eigen::MatrixXcd> desired, interference;
        for (int k : network.demands[j - 1])
            if (V.columns(k) > 0) {
                desired.push_back(channel.gain(j, k).apply(V.V.at(k)));
                r.desired_expected += V.columns(k);
            }
        for (int i : interference_set(network, j))
            if (V.columns(i) > 0)
                interference.push_back(channel.gain(j, i).apply(V.V.at(i)));

        auto stack = [&](const std::vector<Eigen::MatrixXcd>& parts) {
            int cols = 0;
            for (const auto& p : parts) cols += static_cast<int>(p.cols());
            Eigen::MatrixXcd m(tau, cols);
            int at = 0;
            for (const auto& p : parts) {
                m.middleCols(at, p.cols()) = p;
                at += static_cast<int>(p.cols());
            }
            return m;
        };
        std::vector<Eigen::MatrixXcd> both = desired;
        both.insert(both.end(), interference.begin(), interference.end());
        const Eigen::MatrixXcd d = stack(desired);
        const Eigen::MatrixXcd i = stack(interference);
        const Eigen::MatrixXcd joint = stack(both);
        r.desired_dim = numeric_rank(d, tau, eps_rank);
        r.interference_dim = numeric_rank(i, tau, eps_rank);
        r.joint_dim = numeric_rank(joint, tau, eps_rank);
        r.decodable = r.desired_dim == r.desired_expected &&
                      r.joint_dim == r.desired_dim + r.interference_dim &&
                      r.interference_dim <= tau - r.desired_expected;
        report.all_decodable = report.all_decodable && r.decodable;
        report.per_receiver.push_back(r);
    }
    return report;
}

void write_beamformers(std::ostream& out, const BeamformingSet& V) {
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "tau " << V.tau << "\n";
    for (const auto& [k, m] : V.V)
        for (int c = 0; c < m.cols(); ++c) {
            out << "V " << k << " " << c;
            for (int rr = 0; rr < m.rows(); ++rr)
                out << " " << m(rr, c).real() << " " << m(rr, c).imag();
            out << "\n";
        }
}

void write_beamformers_file(const std::string& path, const BeamformingSet& V) {
    std::ofstream out(path);
    if (!out) throw DesignError("cannot open " + path + " for writing");
    write_beamformers(out, V);
    if (!out) throw DesignError("write to " + path + " failed");
}

}  // namespace caia
