// Deterministic rate evaluation: zero-forcing receivers on the extended
// channel, log-det rates per message, and the high-SNR slope that estimates
// the achieved degrees of freedom.

#ifndef CAIA_SIMULATE_HPP
#define CAIA_SIMULATE_HPP

#include <vector>

#include "caia/beamforming.hpp"
#include "caia/channel.hpp"
#include "caia/network.hpp"

namespace caia {

struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RatePoint {
    double power = 0;                 // linear transmit power, unit noise
    std::vector<double> per_message;  // bits per original channel use, size K
    double sum = 0;
};

/// Each receiver projects onto the orthogonal complement of everything it
/// does not want (interference plus the other desired streams), leaving each
/// desired stream a clean effective channel; power splits evenly over a
/// transmitter's columns. A message demanded at several receivers gets the
/// worst receiver's rate. Refuses non-decodable configurations.
RatePoint zf_rates(const ExtendedChannel& channel, const DemandNetwork& network,
                   const BeamformingSet& V, double power, double eps_rank = 1e-9);

/// Baseline that never removes interference: it only zero-forces the other
/// desired streams and leaves interference as noise, so rates saturate.
RatePoint tin_rates(const ExtendedChannel& channel, const DemandNetwork& network,
                    const BeamformingSet& V, double power, double eps_rank = 1e-9);

struct SlopeEstimate {
    double dof = 0;          // least-squares slope of sum rate vs log2(P)
    double snr_low_db = 0;   // window actually used
    double snr_high_db = 0;
    double residual = 0;     // RMS deviation from the fitted line
    std::vector<RatePoint> points;  // one per requested SNR, ascending
};

/// Sweep of zf_rates over the SNR list (dB); the slope is fitted over the
/// top two decades of power.
SlopeEstimate dof_slope(const ExtendedChannel& channel, const DemandNetwork& network,
                        const BeamformingSet& V, const std::vector<double>& snr_db,
                        double eps_rank = 1e-9);

/// Same fit on precomputed points (used for the saturation baseline).
SlopeEstimate fit_slope(std::vector<RatePoint> points);

}  // namespace caia

#endif
