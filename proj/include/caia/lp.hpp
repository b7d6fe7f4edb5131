// Exact optimal-DoF computation. The region constraint
//   sum_{k in S_j} d_k + max_{i in Sbar_j} d_i <= 1   (per prime receiver j)
// is linearized one row per (receiver, interferer) pair, giving an all-{0,1}
// constraint matrix that is solved by a dense rational simplex (Bland's rule,
// arbitrary-precision arithmetic, so pivoting never rounds or overflows).

#ifndef CAIA_LP_HPP
#define CAIA_LP_HPP

#include <string>
#include <utility>
#include <vector>

#include "caia/network.hpp"
#include "caia/rational.hpp"

namespace caia {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One constraint row: coefficient 1 on `vars`, right-hand side 1.
/// `interferer` is the complement member the row linearizes (0 when the
/// receiver hears no interference and the row is plain sum <= 1).
struct LpRow {
    int receiver = 0;
    int interferer = 0;
    std::vector<int> vars;  // ascending 0-based LP variable indices
};

struct LinearProgram {
    int K = 0;                       // transmitter count of the source network
    std::vector<int> variables;      // LP variable -> 1-based transmitter index
    std::vector<LpRow> rows;
    std::vector<Rational> objective; // per variable; all ones by default
    std::vector<int> prime;          // 1-based prime receiver indices

    int var_of(int tx) const;        // -1 when tx carries no LP variable
};

/// Per-transmitter DoF vector; entries of transmitters that carry no LP
/// variable (inactive) are zero.
struct DoFAssignment {
    std::vector<Rational> d;  // size K
    Rational total = 0;
};

struct DualCertificate {
    std::vector<Rational> row_lambda;       // per LP row, >= 0
    std::vector<Rational> receiver_lambda;  // aggregated per prime receiver
    std::vector<Rational> gamma;            // per LP variable, >= 0
    Rational dual_value = 0;                // equals the primal optimum
};

LinearProgram build_lp(const DemandNetwork& network);

/// Simplex to optimality; returns the vertex optimum and the exact dual
/// certificate read off the final tableau (strong duality holds by
/// construction and is re-checked).
std::pair<DoFAssignment, DualCertificate> solve_optimal_dof(const LinearProgram& lp);

struct RegionCheck {
    bool ok = true;
    std::vector<std::string> violations;
};

/// Evaluates the max-form region inequalities at all prime receivers.
RegionCheck check_region(const DemandNetwork& network, const DoFAssignment& d);

struct FaceProbe {
    bool top_two_equal = false;
    bool unique = false;
    Rational max_component = 0;
    std::vector<Rational> face_min;  // size K, per transmitter
    std::vector<Rational> face_max;
};

/// Re-solves, then maximizes and minimizes every coordinate over the optimal
/// face (entering columns restricted to zero reduced cost, which keeps the
/// objective pinned). top_two_equal reports whether some optimal point has
/// its two largest coordinates equal; certified by an explicit face point.
FaceProbe optimal_face_probe(const LinearProgram& lp);

struct KktReport {
    bool primal_feasible = false;
    bool dual_feasible = false;
    bool complementary_slackness = false;
    bool stationarity = false;
    std::vector<std::string> notes;

    bool all() const {
        return primal_feasible && dual_feasible && complementary_slackness && stationarity;
    }
};

/// Exact check of the four KKT conditions on the linearized program:
/// primal feasibility, dual feasibility, lambda_r (1 - z_r) = 0 and
/// d_i gamma_i = 0, and stationarity A^T lambda - gamma = w.
KktReport verify_kkt(const LinearProgram& lp, const DoFAssignment& primal,
                     const DualCertificate& dual);

enum class NetworkClass { Regular, Irregular, MultipleAccess };

std::string to_string(NetworkClass c);

/// MultipleAccess when some demand set covers all or all-but-one active
/// transmitter (total DoF 1); Regular when the optimal face is a single point
/// whose positive coordinates are all equal; Irregular otherwise.
NetworkClass classify(const DemandNetwork& network);

}  // namespace caia

#endif
