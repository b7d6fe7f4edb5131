#include "caia/lp.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace caia {

int LinearProgram::var_of(int tx) const {
    auto it = std::find(variables.begin(), variables.end(), tx);
    return it == variables.end() ? -1 : static_cast<int>(it - variables.begin());
}

LinearProgram build_lp(const DemandNetwork& network) {
    if (!network.validated) throw NetworkError("network not validated");
    LinearProgram lp;
    lp.K = network.K;
    lp.variables = network.active_transmitters();
    lp.objective.assign(lp.variables.size(), Rational(1));
    const auto primes = prime_receivers(network);
    lp.prime = primes.indices;
    for (int j : primes.indices) {
        std::vector<int> base;
        base.reserve(network.demands[j - 1].size());
        for (int k : network.demands[j - 1]) base.push_back(lp.var_of(k));
        std::sort(base.begin(), base.end());
        const auto sbar = interference_set(network, j);
        if (sbar.empty()) {
            lp.rows.push_back({j, 0, base});
            continue;
        }
        for (int i : sbar) {
            LpRow row{j, i, base};
            row.vars.push_back(lp.var_of(i));
            std::sort(row.vars.begin(), row.vars.end());
            lp.rows.push_back(std::move(row));
        }
    }
    return lp;
}

namespace {

// Dense rational tableau, columns [0,n) structural, [n,n+m) slack, last rhs.
// All pivots exact; Bland's rule (lowest eligible index) prevents cycling.
class Tableau {
  public:
    explicit Tableau(const LinearProgram& lp)
        : m_(static_cast<int>(lp.rows.size())),
          n_(static_cast<int>(lp.variables.size())) {
        rows_.assign(m_, std::vector<Rational>(n_ + m_ + 1, Rational(0)));
        basis_.resize(m_);
        for (int r = 0; r < m_; ++r) {
            for (int v : lp.rows[r].vars) rows_[r][v] = 1;
            rows_[r][n_ + r] = 1;
            rows_[r].back() = 1;
            basis_[r] = n_ + r;
        }
        obj_.assign(n_ + m_ + 1, Rational(0));
        for (int j = 0; j < n_; ++j) obj_[j] = -lp.objective[j];
    }

    void solve() {
        for (;;) {
            int e = -1;
            for (int j = 0; j < n_ + m_; ++j)
                if (obj_[j] < 0) {
                    e = j;
                    break;
                }
            if (e < 0) return;
            const int r = ratio_row(e);
            if (r < 0) throw SolverError("LP unbounded; every variable needs a row");
            pivot(r, e, nullptr);
        }
    }

    // Maximizes (sign ? +x_var : -x_var) over the optimal face of the primary
    // objective. Entering columns are restricted to zero primary reduced
    // cost, which leaves the primary objective row untouched by every pivot.
    Rational face_optimize(int var, bool maximize) {
        std::vector<Rational> red(n_ + m_, Rational(0));
        const Rational cvar = maximize ? Rational(1) : Rational(-1);
        for (int j = 0; j < n_ + m_; ++j) {
            Rational z = 0;
            for (int r = 0; r < m_; ++r)
                if (basis_[r] == var) z += cvar * rows_[r][j];
            red[j] = z - (j == var ? cvar : Rational(0));
        }
        for (;;) {
            int e = -1;
            for (int j = 0; j < n_ + m_; ++j)
                if (obj_[j] == 0 && red[j] < 0) {
                    e = j;
                    break;
                }
            if (e < 0) break;
            const int r = ratio_row(e);
            if (r < 0) throw SolverError("optimal face unbounded");
            pivot(r, e, &red);
        }
        Rational value = 0;  // x_var at the face optimum just reached
        for (int r = 0; r < m_; ++r)
            if (basis_[r] == var) value = rows_[r].back();
        return value;
    }

    Rational objective_value() const { return obj_.back(); }

    std::vector<Rational> primal() const {
        std::vector<Rational> x(n_, Rational(0));
        for (int r = 0; r < m_; ++r)
            if (basis_[r] < n_) x[basis_[r]] = rows_[r].back();
        return x;
    }

    std::vector<Rational> row_duals() const {
        std::vector<Rational> y(m_);
        for (int r = 0; r < m_; ++r) y[r] = obj_[n_ + r];
        return y;
    }

    std::vector<Rational> var_reduced() const {
        std::vector<Rational> g(n_);
        for (int j = 0; j < n_; ++j) g[j] = obj_[j];
        return g;
    }

  private:
    int ratio_row(int e) const {
        int best = -1;
        Rational best_ratio = 0;
        for (int r = 0; r < m_; ++r) {
            if (rows_[r][e] <= 0) continue;
            const Rational ratio = rows_[r].back() / rows_[r][e];
            if (best < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis_[r] < basis_[best])) {
                best = r;
                best_ratio = ratio;
            }
        }
        return best;
    }

    void pivot(int r, int e, std::vector<Rational>* extra) {
        const Rational p = rows_[r][e];
        for (auto& cell : rows_[r]) cell /= p;
        for (int i = 0; i < m_; ++i) {
            if (i == r || rows_[i][e] == 0) continue;
            const Rational f = rows_[i][e];
            for (int j = 0; j <= n_ + m_; ++j) rows_[i][j] -= f * rows_[r][j];
        }
        if (obj_[e] != 0) {
            const Rational f = obj_[e];
            for (int j = 0; j <= n_ + m_; ++j) obj_[j] -= f * rows_[r][j];
        }
        if (extra && (*extra)[e] != 0) {
            const Rational f = (*extra)[e];
            for (int j = 0; j < n_ + m_; ++j) (*extra)[j] -= f * rows_[r][j];
        }
        basis_[r] = e;
    }

    int m_;
    int n_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> obj_;  // z_j - c_j; rhs cell carries the value
    std::vector<int> basis_;
};

DoFAssignment expand_assignment(const LinearProgram& lp, const std::vector<Rational>& x) {
    DoFAssignment a;
    a.d.assign(lp.K, Rational(0));
    for (size_t j = 0; j < lp.variables.size(); ++j) a.d[lp.variables[j] - 1] = x[j];
    a.total = std::accumulate(x.begin(), x.end(), Rational(0));
    return a;
}

}  // namespace

std::pair<DoFAssignment, DualCertificate> solve_optimal_dof(const LinearProgram& lp) {
    if (lp.rows.empty()) throw SolverError("LP has no rows");
    Tableau t(lp);
    t.solve();

    DoFAssignment primal = expand_assignment(lp, t.primal());

    DualCertificate dual;
    dual.row_lambda = t.row_duals();
    dual.gamma = t.var_reduced();
    dual.dual_value = std::accumulate(dual.row_lambda.begin(), dual.row_lambda.end(), Rational(0));
    dual.receiver_lambda.assign(lp.prime.size(), Rational(0));
    for (size_t r = 0; r < lp.rows.size(); ++r) {
        const auto it = std::find(lp.prime.begin(), lp.prime.end(), lp.rows[r].receiver);
        dual.receiver_lambda[it - lp.prime.begin()] += dual.row_lambda[r];
    }
    if (dual.dual_value != primal.total)
        throw SolverError("strong duality violated; tableau corrupt");
    return {std::move(primal), std::move(dual)};
}

RegionCheck check_region(const DemandNetwork& network, const DoFAssignment& d) {
    if (!network.validated) throw NetworkError("network not validated");
    if (static_cast<int>(d.d.size()) != network.K)
        throw NetworkError("assignment length != K");
    RegionCheck out;
    for (int k = 0; k < network.K; ++k) {
        if (d.d[k] < 0) {
            out.ok = false;
            out.violations.push_back("d" + std::to_string(k + 1) + " negative");
        }
    }
    for (int j : prime_receivers(network).indices) {
        Rational lhs = 0;
        for (int k : network.demands[j - 1]) lhs += d.d[k - 1];
        const auto sbar = interference_set(network, j);
        Rational worst = 0;
        int worst_i = 0;
        for (int i : sbar) {
            if (worst_i == 0 || d.d[i - 1] > worst) {
                worst = d.d[i - 1];
                worst_i = i;
            }
        }
        if (lhs + worst > 1) {
            out.ok = false;
            out.violations.push_back("receiver " + std::to_string(j) + ": " +
                                     to_string(lhs) + " + " + to_string(worst) +
                                     " > 1 (interferer " + std::to_string(worst_i) + ")");
        }
    }
    return out;
}

FaceProbe optimal_face_probe(const LinearProgram& lp) {
    Tableau t(lp);
    t.solve();

    const int n = static_cast<int>(lp.variables.size());
    std::vector<std::vector<Rational>> points;
    points.push_back(t.primal());

    std::vector<Rational> vmax(n), vmin(n);
    for (int v = 0; v < n; ++v) {
        vmax[v] = t.face_optimize(v, true);
        points.push_back(t.primal());
        vmin[v] = t.face_optimize(v, false);
        points.push_back(t.primal());
    }

    // Centroid of the probed vertices; often exposes a tied maximum that no
    // single vertex shows (e.g. the two endpoints of a degenerate face).
    std::vector<Rational> centroid(n, Rational(0));
    for (const auto& p : points)
        for (int v = 0; v < n; ++v) centroid[v] += p[v];
    for (auto& c : centroid) c /= Rational(points.size());
    points.push_back(centroid);

    FaceProbe probe;
    probe.unique = true;
    for (int v = 0; v < n; ++v)
        if (vmax[v] != vmin[v]) probe.unique = false;
    probe.max_component = *std::max_element(vmax.begin(), vmax.end());

    for (const auto& p : points) {
        if (p.size() < 2) break;
        auto sorted = p;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        if (sorted[0] == sorted[1]) {
            probe.top_two_equal = true;
            break;
        }
    }

    probe.face_min.assign(lp.K, Rational(0));
    probe.face_max.assign(lp.K, Rational(0));
    for (int v = 0; v < n; ++v) {
        probe.face_min[lp.variables[v] - 1] = vmin[v];
        probe.face_max[lp.variables[v] - 1] = vmax[v];
    }
    return probe;
}

KktReport verify_kkt(const LinearProgram& lp, const DoFAssignment& primal,
                     const DualCertificate& dual) {
    KktReport rep;
    const int n = static_cast<int>(lp.variables.size());
    std::vector<Rational> x(n);
    for (int v = 0; v < n; ++v) x[v] = primal.d[lp.variables[v] - 1];

    rep.primal_feasible = true;
    for (const auto& xv : x)
        if (xv < 0) rep.primal_feasible = false;
    std::vector<Rational> z(lp.rows.size(), Rational(0));
    for (size_t r = 0; r < lp.rows.size(); ++r) {
        for (int v : lp.rows[r].vars) z[r] += x[v];
        if (z[r] > 1) rep.primal_feasible = false;
    }
    if (!rep.primal_feasible) rep.notes.push_back("primal infeasible");

    rep.dual_feasible = true;
    for (const auto& l : dual.row_lambda)
        if (l < 0) rep.dual_feasible = false;
    for (const auto& g : dual.gamma)
        if (g < 0) rep.dual_feasible = false;
    if (!rep.dual_feasible) rep.notes.push_back("dual multipliers not nonnegative");

    rep.complementary_slackness = true;
    for (size_t r = 0; r < lp.rows.size(); ++r)
        if (dual.row_lambda[r] * (Rational(1) - z[r]) != 0) rep.complementary_slackness = false;
    for (int v = 0; v < n; ++v)
        if (x[v] * dual.gamma[v] != 0) rep.complementary_slackness = false;
    if (!rep.complementary_slackness) rep.notes.push_back("complementary slackness violated");

    rep.stationarity = true;
    for (int v = 0; v < n; ++v) {
        Rational at_lambda = 0;
        for (size_t r = 0; r < lp.rows.size(); ++r)
            if (std::binary_search(lp.rows[r].vars.begin(), lp.rows[r].vars.end(), v))
                at_lambda += dual.row_lambda[r];
        if (at_lambda - dual.gamma[v] != lp.objective[v]) rep.stationarity = false;
    }
    if (!rep.stationarity) rep.notes.push_back("stationarity A^T lambda - gamma = w violated");
    return rep;
}

std::string to_string(NetworkClass c) {
    switch (c) {
        case NetworkClass::Regular: return "Regular";
        case NetworkClass::Irregular: return "Irregular";
        case NetworkClass::MultipleAccess: return "MultipleAccess";
    }
    return "?";
}

NetworkClass classify(const DemandNetwork& network) {
    if (!network.validated) throw NetworkError("network not validated");
    const int act = network.active_count();
    for (const auto& set : network.demands)
        if (static_cast<int>(set.size()) >= act - 1) return NetworkClass::MultipleAccess;

    const auto probe = optimal_face_probe(build_lp(network));
    if (!probe.unique) return NetworkClass::Irregular;
    Rational common = -1;
    for (const auto& v : probe.face_max) {
        if (v == 0) continue;
        if (common < 0) common = v;
        else if (v != common) return NetworkClass::Irregular;
    }
    return NetworkClass::Regular;
}

}  // namespace caia
