#include "caia/simulate.hpp"

#include <algorithm>
#include <cmath>

namespace caia {

namespace {

Eigen::MatrixXcd unit_columns(const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd out = m;
    for (int c = 0; c < out.cols(); ++c) {
        const double norm = out.col(c).norm();
        if (norm > 0) out.col(c) /= norm;
    }
    return out;
}

/// Orthonormal basis of the orthogonal complement of span(m) in C^tau.
Eigen::MatrixXcd complement_basis(const Eigen::MatrixXcd& m, int tau, double eps_rank) {
    if (m.cols() == 0) return Eigen::MatrixXcd::Identity(tau, tau);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double threshold = sv.size() > 0 ? sv(0) * tau * eps_rank : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > threshold) ++rank;
    return svd.matrixU().rightCols(tau - rank);
}

double logdet_rate(const Eigen::MatrixXcd& effective, double per_stream_power, int tau) {
    if (effective.cols() == 0) return 0;
    const Eigen::MatrixXcd gram =
        Eigen::MatrixXcd::Identity(effective.cols(), effective.cols()) +
        per_stream_power * (effective.adjoint() * effective);
    const double logdet = std::log2(std::abs(gram.determinant()));
    return std::max(0.0, logdet / tau);
}

RatePoint rates_impl(const ExtendedChannel& channel, const DemandNetwork& network,
                     const BeamformingSet& V, double power, double eps_rank,
                     bool project_interference) {
    if (!network.validated) throw NetworkError("network must be validated first");
    if (power < 0) throw SimulationError("power must be nonnegative");
    const int tau = channel.tau();

    RatePoint point;
    point.power = power;
    point.per_message.assign(network.K, 0.0);
    std::vector<bool> seen(network.K, false);

    for (int j = 1; j <= network.N; ++j) {
        // Interference images at this receiver.
        std::vector<Eigen::MatrixXcd> interference;
        for (int i : interference_set(network, j))
            if (V.columns(i) > 0) interference.push_back(channel.gain(j, i).apply(V.V.at(i)));

        for (int k : network.demands[j - 1]) {
            const int dk = V.columns(k);
            if (dk == 0) continue;
            // Nuisance for stream k: other desired streams, plus the
            // interference when zero-forcing it (otherwise it stays as
            // noise, which caps the rate).
            std::vector<Eigen::MatrixXcd> nuisance;
            for (int other : network.demands[j - 1])
                if (other != k && V.columns(other) > 0)
                    nuisance.push_back(channel.gain(j, other).apply(V.V.at(other)));
            if (project_interference)
                for (const auto& m : interference) nuisance.push_back(m);

            int cols = 0;
            for (const auto& m : nuisance) cols += static_cast<int>(m.cols());
            Eigen::MatrixXcd stacked(tau, cols);
            int at = 0;
            for (const auto& m : nuisance) {
                stacked.middleCols(at, m.cols()) = m;
                at += static_cast<int>(m.cols());
            }
            const Eigen::MatrixXcd c = complement_basis(stacked, tau, eps_rank);
            const Eigen::MatrixXcd image =
                channel.gain(j, k).apply(unit_columns(V.V.at(k)));
            double rate;
            if (project_interference) {
                rate = logdet_rate(c.adjoint() * image, power / dk, tau);
            } else {
                // Interference acts as colored noise inside the projected
                // space: whiten with its covariance there.
                Eigen::MatrixXcd cov =
                    Eigen::MatrixXcd::Identity(c.cols(), c.cols());
                for (int i : interference_set(network, j)) {
                    if (V.columns(i) == 0) continue;
                    const Eigen::MatrixXcd g =
                        c.adjoint() * channel.gain(j, i).apply(unit_columns(V.V.at(i)));
                    cov += (power / V.columns(i)) * (g * g.adjoint());
                }
                const Eigen::MatrixXcd white = cov.llt().matrixL().solve(
                    Eigen::MatrixXcd(c.adjoint() * image));
                rate = logdet_rate(white, power / dk, tau);
            }
            point.per_message[k - 1] =
                seen[k - 1] ? std::min(point.per_message[k - 1], rate) : rate;
            seen[k - 1] = true;
        }
    }
    for (double r : point.per_message) point.sum += r;
    return point;
}

}  // namespace

RatePoint zf_rates(const ExtendedChannel& channel, const DemandNetwork& network,
                   const BeamformingSet& V, double power, double eps_rank) {
    const AlignmentReport report = verify_alignment(channel, network, V, eps_rank);
    if (!report.all_decodable) {
        std::string detail;
        for (const auto& r : report.per_receiver)
            if (!r.decodable)
                detail += (detail.empty() ? "" : ", ") + std::string("receiver ") +
                          std::to_string(r.receiver);
        throw SimulationError("configuration not decodable at " + detail +
                              "; see alignment report");
    }
    return rates_impl(channel, network, V, power, eps_rank, true);
}

RatePoint tin_rates(const ExtendedChannel& channel, const DemandNetwork& network,
                    const BeamformingSet& V, double power, double eps_rank) {
    return rates_impl(channel, network, V, power, eps_rank, false);
}

SlopeEstimate fit_slope(std::vector<RatePoint> points) {
    if (points.size() < 2) throw SimulationError("slope needs at least two SNR points");
    std::sort(points.begin(), points.end(),
              [](const RatePoint& a, const RatePoint& b) { return a.power < b.power; });

    SlopeEstimate est;
    const double top_db = 10.0 * std::log10(points.back().power);
    std::vector<const RatePoint*> window;
    for (const auto& p : points)
        if (10.0 * std::log10(p.power) >= top_db - 20.0 - 1e-9) window.push_back(&p);
    if (window.size() < 2) {
        window = {&points[points.size() - 2], &points.back()};
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(window.size());
    for (const auto* p : window) {
        const double x = std::log2(p->power);
        sx += x;
        sy += p->sum;
        sxx += x * x;
        sxy += x * p->sum;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0) throw SimulationError("degenerate SNR spacing");
    est.dof = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - est.dof * sx) / n;
    double ss = 0;
    for (const auto* p : window) {
        const double err = p->sum - (est.dof * std::log2(p->power) + intercept);
        ss += err * err;
    }
    est.residual = std::sqrt(ss / n);
    est.snr_low_db = 10.0 * std::log10(window.front()->power);
    est.snr_high_db = 10.0 * std::log10(window.back()->power);
    est.points = std::move(points);
    return est;
}

SlopeEstimate dof_slope(const ExtendedChannel& channel, const DemandNetwork& network,
                        const BeamformingSet& V, const std::vector<double>& snr_db,
                        double eps_rank) {
    if (snr_db.size() < 2) throw SimulationError("slope needs at least two SNR points");
    std::vector<RatePoint> points;
    for (double db : snr_db)
        points.push_back(zf_rates(channel, network, V, std::pow(10.0, db / 10.0), eps_rank));
    return fit_slope(std::move(points));
}

}  // namespace caia
