// Beamformer construction from the joint partition of the aiding conditions,
// propagation along the alignment graph's spanning forest, the peeling
// schedule for unequal DoF, and rank-based alignment verification.

#ifndef CAIA_BEAMFORMING_HPP
#define CAIA_BEAMFORMING_HPP

#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "caia/aiding.hpp"
#include "caia/alignment_graph.hpp"
#include "caia/channel.hpp"
#include "caia/lp.hpp"
#include "caia/network.hpp"

namespace caia {

struct DesignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BeamformingSet {
    int tau = 0;
    std::map<int, Eigen::MatrixXcd> V;  // transmitter -> tau x d_k columns
    std::vector<int> dof;               // per transmitter (1-based => index k-1)

    int columns(int k) const;
    /// Horizontal concatenation of another set's columns (same tau).
    void append(const BeamformingSet& more);
};

struct DesignOptions {
    std::uint64_t seed = 1;
    bool force = false;       // skip feasibility guards (negative controls)
    double eps_rank = 1e-9;   // relative singular-value threshold
    double eps_eq = 1e-9;     // diagonal equality tolerance
};

/// Beamformers for one condition set: a root per graph component gets
/// block-supported generic columns (all partition blocks covered, at most
/// |B|-1 columns per block), children get V = label^{+-1} * V_parent along
/// tree edges; transmitters outside the graph get dense generic columns.
/// `columns` is the per-transmitter count (equal inside each component),
/// `preferred_roots` breaks root ties (lowest member wins, else lowest node).
BeamformingSet design_round(const ExtendedChannel& channel, const AlignmentGraph& graph,
                            const JointPartition& partition, const std::vector<int>& transmitters,
                            int columns, const std::vector<int>& preferred_roots,
                            const DesignOptions& opts);

struct PeelingRound {
    std::vector<int> active;                                  // transmitters sending
    int columns = 0;                                          // per transmitter this round
    std::vector<std::pair<int, std::vector<int>>> restricted; // per receiver: interferers among active
    AlignmentGraph topology;                                  // unlabeled restricted graph
    bool within_half = true;                                  // 2 * columns <= tau
};

struct PeelingPlan {
    int Ne = 1;                    // base extension: lcm of active DoF denominators
    int multiplier = 1;
    int tau = 1;                   // Ne * multiplier
    std::vector<int> total_columns;  // per transmitter over the whole extension
    std::vector<PeelingRound> rounds;
    int condition_count() const;
};

/// Rounds peel the minimum active per-transmitter column count; each round's
/// alignment graph is restricted to still-active transmitters.
PeelingPlan plan_irregular(const DemandNetwork& network, const DoFAssignment& d,
                           int multiplier = 1);

/// Uniform structures for every cycle of every round (distinct values capped
/// at the round's column count).
std::vector<std::pair<AlignmentGraph, std::vector<AidingStructure>>> plan_structures(
    const PeelingPlan& plan, int distinct);

/// Aided channel satisfying every round's conditions.
ExtendedChannel synthesize_for_plan(const DemandNetwork& network, const PeelingPlan& plan,
                                    int distinct, const SynthesisOptions& options);

/// Full design across all rounds of the plan. Verifies each round's
/// conditions first and throws DesignError when infeasible, unless forced.
BeamformingSet design_beamformers(const ExtendedChannel& channel, const DemandNetwork& network,
                                  const PeelingPlan& plan, const DesignOptions& opts);

struct ReceiverReport {
    int receiver = 0;
    int desired_expected = 0;   // sum of demanded column counts
    int desired_dim = 0;
    int interference_dim = 0;
    int joint_dim = 0;
    bool decodable = false;
};

struct AlignmentReport {
    std::vector<ReceiverReport> per_receiver;
    bool all_decodable = false;
};

/// Numeric rank accounting at every receiver. Decodable iff the desired
/// signal keeps full dimension and stays independent of the interference.
AlignmentReport verify_alignment(const ExtendedChannel& channel, const DemandNetwork& network,
                                 const BeamformingSet& V, double eps_rank = 1e-9);

/// Rank of a complex matrix by singular values >= sigma_max * tau * eps.
int numeric_rank(const Eigen::MatrixXcd& m, int tau, double eps);

void write_beamformers(std::ostream& out, const BeamformingSet& V);
void write_beamformers_file(const std::string& path, const BeamformingSet& V);

}  // namespace caia

#endif
