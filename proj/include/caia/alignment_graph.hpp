// Alignment graph over interfering transmitters. Each receiver seeing two or
// more interferers contributes a star of edges anchored at its lowest-index
// interferer; fundamental cycles of a spanning forest give one subspace
// condition per independent cycle.

#ifndef CAIA_ALIGNMENT_GRAPH_HPP
#define CAIA_ALIGNMENT_GRAPH_HPP

#include <string>
#include <utility>
#include <vector>

#include "caia/channel.hpp"
#include "caia/network.hpp"

namespace caia {

struct GraphEdge {
    int receiver;  // receiver whose interference ties the pair
    int from;      // transmitter the edge leaves (the non-anchor)
    int to;        // the anchor transmitter at this receiver
};

/// One channel factor H^[receiver, tx], possibly inverted.
struct HFactor {
    int receiver;
    int tx;
    bool inverted;
};

/// Fundamental cycle of the spanning forest: the non-tree edge followed by
/// the tree path closing it. `arcs` lists (edge index, traversed forward?).
struct CycleSpec {
    int nontree_edge;
    std::vector<std::pair<int, bool>> arcs;
    int base_node;  // lowest transmitter on the cycle
};

struct AlignmentGraph {
    std::vector<int> nodes;  // ascending transmitter indices
    std::vector<GraphEdge> edges;
    std::vector<int> tree_edges;        // indices into edges
    std::vector<int> component_of;      // per node position
    int components = 0;
    std::vector<CycleSpec> cycles;      // one per non-tree edge

    // Filled only when built against a channel: per-edge label
    // M = inverse(H[receiver, to]) * H[receiver, from].
    std::vector<DiagonalMatrix> labels;
    bool labeled = false;

    int node_pos(int tx) const;       // -1 when tx is not a node
    bool has_node(int tx) const { return node_pos(tx) >= 0; }
    int cycle_count() const { return static_cast<int>(cycles.size()); }
};

/// Topology from explicit per-receiver interferer sets (receiver index,
/// ascending transmitter list). Channel-independent.
AlignmentGraph build_topology(const std::vector<std::pair<int, std::vector<int>>>& interferers);

/// Topology over all receivers of a validated network.
AlignmentGraph build_topology(const DemandNetwork& network);

/// Same topology plus per-edge diagonal labels taken from the channel.
/// Throws ChannelError if an anchor gain is singular.
AlignmentGraph build_alignment_graph(const DemandNetwork& network, const ExtendedChannel& channel);
AlignmentGraph label_topology(AlignmentGraph graph, const ExtendedChannel& channel);

/// One subspace condition per fundamental cycle: the diagonal T must map
/// span(V^root) to itself, where T is the ordered product of channel factors
/// around the cycle.
struct AidingCondition {
    int cycle_index;
    int root;                      // transmitter whose beam space T must fix
    DiagonalMatrix T;
    std::vector<HFactor> factors;  // T as an ordered product of channel gains
    std::string describe() const;  // e.g. "H[2,6]^-1 H[2,4] H[1,4]^-1 H[1,6]"
};

/// Requires a labeled graph.
std::vector<AidingCondition> cycle_conditions(const AlignmentGraph& graph);

/// Factor lists only, one per cycle; topology suffices (no labels needed).
std::vector<std::vector<HFactor>> cycle_factor_lists(const AlignmentGraph& graph);

/// Factor lists evaluated on a single slot of a channel (or slot stream).
Complex evaluate_factors(const std::vector<HFactor>& factors, const ExtendedChannel& channel,
                         int slot);

std::string describe_factors(const std::vector<HFactor>& factors);

}  // namespace caia

#endif
