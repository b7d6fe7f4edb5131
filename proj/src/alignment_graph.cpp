#include "caia/alignment_graph.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace caia {

int AlignmentGraph::node_pos(int tx) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), tx);
    if (it == nodes.end() || *it != tx) return -1;
    return static_cast<int>(it - nodes.begin());
}

AlignmentGraph build_topology(const std::vector<std::pair<int, std::vector<int>>>& interferers) {
    AlignmentGraph g;

    std::set<int> node_set;
    for (const auto& [receiver, sbar] : interferers)
        node_set.insert(sbar.begin(), sbar.end());
    g.nodes.assign(node_set.begin(), node_set.end());

    for (const auto& [receiver, raw] : interferers) {
        std::vector<int> sbar = raw;
        std::sort(sbar.begin(), sbar.end());
        sbar.erase(std::unique(sbar.begin(), sbar.end()), sbar.end());
        if (sbar.size() < 2) continue;
        // Star anchored at the lowest-index interferer of this receiver.
        for (size_t i = 1; i < sbar.size(); ++i)
            g.edges.push_back({receiver, sbar[i], sbar[0]});
    }

    const int n = static_cast<int>(g.nodes.size());
    std::vector<std::vector<std::pair<int, int>>> adj(n);  // (edge index, other node pos)
    for (size_t e = 0; e < g.edges.size(); ++e) {
        const int a = g.node_pos(g.edges[e].from);
        const int b = g.node_pos(g.edges[e].to);
        adj[a].push_back({static_cast<int>(e), b});
        adj[b].push_back({static_cast<int>(e), a});
    }

    // Breadth-first spanning forest; components rooted at their lowest node.
    g.component_of.assign(n, -1);
    std::vector<int> parent_edge(n, -1), parent_pos(n, -1), depth(n, 0);
    std::vector<bool> edge_in_tree(g.edges.size(), false);
    for (int start = 0; start < n; ++start) {
        if (g.component_of[start] >= 0) continue;
        const int comp = g.components++;
        std::queue<int> q;
        q.push(start);
        g.component_of[start] = comp;
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (const auto& [e, v] : adj[u]) {
                if (g.component_of[v] >= 0) continue;
                g.component_of[v] = comp;
                parent_edge[v] = e;
                parent_pos[v] = u;
                depth[v] = depth[u] + 1;
                edge_in_tree[e] = true;
                g.tree_edges.push_back(e);
                q.push(v);
            }
        }
    }

    // One fundamental cycle per non-tree edge: the edge plus the tree path
    // closing it. Arc direction is "true" when the edge is traversed from
    // `from` to `to`.
    auto step_up = [&](int pos) -> std::pair<int, bool> {
        const int e = parent_edge[pos];
        const bool forward = g.node_pos(g.edges[e].from) == pos;
        return {e, forward};
    };
    for (size_t e = 0; e < g.edges.size(); ++e) {
        if (edge_in_tree[e]) continue;
        CycleSpec cyc;
        cyc.nontree_edge = static_cast<int>(e);
        int a = g.node_pos(g.edges[e].from);
        int b = g.node_pos(g.edges[e].to);
        cyc.arcs.push_back({static_cast<int>(e), true});
        int lowest = std::min(g.nodes[a], g.nodes[b]);

        std::vector<std::pair<int, bool>> up_b, up_a;
        int pa = a, pb = b;
        while (depth[pb] > depth[pa]) {
            up_b.push_back(step_up(pb));
            pb = parent_pos[pb];
            lowest = std::min(lowest, g.nodes[pb]);
        }
        while (depth[pa] > depth[pb]) {
            up_a.push_back(step_up(pa));
            pa = parent_pos[pa];
            lowest = std::min(lowest, g.nodes[pa]);
        }
        while (pa != pb) {
            up_b.push_back(step_up(pb));
            pb = parent_pos[pb];
            up_a.push_back(step_up(pa));
            pa = parent_pos[pa];
            lowest = std::min(lowest, std::min(g.nodes[pa], g.nodes[pb]));
        }
        // a --(e)--> b --(up_b)--> meet --(reverse of up_a)--> a
        for (const auto& arc : up_b) cyc.arcs.push_back(arc);
        for (auto it = up_a.rbegin(); it != up_a.rend(); ++it)
            cyc.arcs.push_back({it->first, !it->second});
        cyc.base_node = lowest;
        g.cycles.push_back(std::move(cyc));
    }
    return g;
}

AlignmentGraph build_topology(const DemandNetwork& network) {
    if (!network.validated) throw NetworkError("network must be validated first");
    std::vector<std::pair<int, std::vector<int>>> interferers;
    for (int j = 1; j <= network.N; ++j)
        interferers.push_back({j, interference_set(network, j)});
    return build_topology(interferers);
}

AlignmentGraph label_topology(AlignmentGraph graph, const ExtendedChannel& channel) {
    graph.labels.clear();
    graph.labels.reserve(graph.edges.size());
    for (const auto& e : graph.edges) {
        const DiagonalMatrix& anchor = channel.gain(e.receiver, e.to);
        if (!anchor.invertible())
            throw ChannelError("singular anchor gain at receiver " + std::to_string(e.receiver));
        graph.labels.push_back(anchor.inverse() * channel.gain(e.receiver, e.from));
    }
    graph.labeled = true;
    return graph;
}

AlignmentGraph build_alignment_graph(const DemandNetwork& network, const ExtendedChannel& channel) {
    return label_topology(build_topology(network), channel);
}

std::string describe_factors(const std::vector<HFactor>& factors) {
    std::string out;
    for (const auto& f : factors) {
        if (!out.empty()) out += " ";
        out += "H[" + std::to_string(f.receiver) + "," + std::to_string(f.tx) + "]";
        if (f.inverted) out += "^-1";
    }
    return out;
}

std::string AidingCondition::describe() const { return describe_factors(factors); }

std::vector<std::vector<HFactor>> cycle_factor_lists(const AlignmentGraph& graph) {
    std::vector<std::vector<HFactor>> out;
    for (const CycleSpec& cyc : graph.cycles) {
        std::vector<HFactor> factors;
        for (const auto& [e, forward] : cyc.arcs) {
            const GraphEdge& edge = graph.edges[e];
            // Label is inverse(H[r,to]) * H[r,from]; expand per direction.
            if (forward) {
                factors.push_back({edge.receiver, edge.to, true});
                factors.push_back({edge.receiver, edge.from, false});
            } else {
                factors.push_back({edge.receiver, edge.from, true});
                factors.push_back({edge.receiver, edge.to, false});
            }
        }
        out.push_back(std::move(factors));
    }
    return out;
}

std::vector<AidingCondition> cycle_conditions(const AlignmentGraph& graph) {
    if (!graph.labeled) throw ChannelError("cycle conditions need a labeled graph");
    std::vector<AidingCondition> out;
    auto factor_lists = cycle_factor_lists(graph);
    for (size_t c = 0; c < graph.cycles.size(); ++c) {
        const CycleSpec& cyc = graph.cycles[c];
        AidingCondition cond;
        cond.cycle_index = static_cast<int>(c);
        cond.root = cyc.base_node;
        cond.factors = std::move(factor_lists[c]);
        bool first = true;
        for (const auto& [e, forward] : cyc.arcs) {
            DiagonalMatrix m = forward ? graph.labels[e] : graph.labels[e].inverse();
            cond.T = first ? m : cond.T * m;
            first = false;
        }
        out.push_back(std::move(cond));
    }
    return out;
}

Complex evaluate_factors(const std::vector<HFactor>& factors, const ExtendedChannel& channel,
                         int slot) {
    Complex value(1, 0);
    for (const auto& f : factors) {
        const Complex g = channel.slot_gain(slot, f.receiver, f.tx);
        if (f.inverted) {
            if (g == Complex(0, 0)) throw ChannelError("singular gain in factor evaluation");
            value /= g;
        } else {
            value *= g;
        }
    }
    return value;
}

}  // namespace caia
