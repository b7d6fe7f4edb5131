// Aided channels: verify whether the cycle conditions of a channel carry a
// usable repetition structure, synthesize channels that do, and harvest such
// structure from a stream of independent slots.

#ifndef CAIA_AIDING_HPP
#define CAIA_AIDING_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "caia/alignment_graph.hpp"
#include "caia/channel.hpp"
#include "caia/network.hpp"

namespace caia {

struct AidingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Prescribed shape of one condition's diagonal: a permutation P applied to
/// diag(T~, T~, f(T~)) where T~ holds block_count() distinct values, each
/// value therefore appearing at least twice. Values may be left empty when
/// the consumer picks them (synthesis does).
struct AidingStructure {
    int n = 1;                       // beam columns the structure must support
    int tau = 0;                     // extension length
    std::vector<int> permutation;    // assembled[p] = stacked[permutation[p]]
    std::vector<Complex> values;     // T~ entries; empty = chosen downstream
    std::vector<int> value_index;    // per stacked position in [2*n1, tau): f map
    int n1 = 0;                      // distinct values, n1 <= n

    void validate() const;           // throws AidingError on malformed shape
    int block_count() const { return n1; }

    /// Positions of the assembled diagonal grouped by value identity,
    /// blocks ordered by their lowest position.
    std::vector<std::vector<int>> position_blocks() const;

    /// Assembled diagonal; requires values.size() == n1.
    std::vector<Complex> assemble() const;

    /// Identity permutation, values spread round-robin over the tail.
    static AidingStructure uniform(int n, int tau, int distinct);
};

/// Positions of [0, tau) grouped by joint approximate equality across all
/// condition diagonals. Blocks ordered by lowest position.
struct JointPartition {
    int tau = 0;
    std::vector<std::vector<int>> blocks;
    int block_count() const { return static_cast<int>(blocks.size()); }
    int min_block() const;
};

struct VerifyResult {
    bool feasible = false;
    JointPartition partition;
    std::string reason;  // which requirement failed, empty when feasible
};

/// Decides whether n beam columns per transmitter can ride on the given
/// conditions: every joint block must repeat (size >= 2) and the block
/// count must not exceed n. Column capacity is checked at design time.
VerifyResult verify_conditions(const std::vector<AidingCondition>& conditions, int n,
                               double eps = 1e-9);

struct SynthesisOptions {
    std::uint64_t seed = 1;
    GainBounds bounds;
    int max_attempts = 32;
    double eps = 1e-9;  // tolerance for the closing verification
};

/// Channel whose cycle conditions realize the prescribed structures, one per
/// fundamental cycle of the network's alignment graph, sharing a single
/// position partition. Free gains are drawn randomly within bounds; one gain
/// per cycle is solved. Throws AidingError when the structure itself is
/// infeasible or no draw within the attempt budget keeps the solved gains in
/// bounds.
ExtendedChannel synthesize_aided_channel(const DemandNetwork& network,
                                         const std::vector<AidingStructure>& structures,
                                         const SynthesisOptions& options = {});

/// Convenience: every cycle gets uniform(n, tau, distinct) with values drawn
/// by the synthesizer.
ExtendedChannel synthesize_aided_channel(const DemandNetwork& network, int n, int tau,
                                         int distinct, const SynthesisOptions& options = {});

/// General form: several condition sets (e.g. one alignment graph per peeling
/// round) imposed on one channel of the given dimensions. Structures are per
/// cycle of the paired graph. Throws AidingError when two cycles designate
/// the same solved gain or a later round would disturb an earlier one.
ExtendedChannel synthesize_aided_channel(
    int tau, int receivers, int transmitters,
    const std::vector<std::pair<AlignmentGraph, std::vector<AidingStructure>>>& rounds,
    const SynthesisOptions& options = {});

struct SlotGroup {
    std::vector<int> slots;  // stream slots (0-based) in assembled position order
    double residual;         // worst relative spread inside any block
};

struct MatchReport {
    std::vector<SlotGroup> groups;
    int slots_consumed = 0;
    double match_rate = 0.0;     // matched slots / consumed slots
    double worst_residual = 0.0;
};

/// Scans a slot stream (a channel whose tau is the slot count) for groups of
/// slots whose condition values tile the structure's blocks within eps.
/// eps = 0 admits exact collisions only. Stops after `budget` slots.
MatchReport match_slots(const ExtendedChannel& stream, const DemandNetwork& network,
                        const AidingStructure& structure, double eps, int budget);

}  // namespace caia

#endif
