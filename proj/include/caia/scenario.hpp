// Key-value scenario files driving the CLI: network, extension, seed,
// bounds, structure shape, SNR sweep, matching knobs, output directory.

#ifndef CAIA_SCENARIO_HPP
#define CAIA_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "caia/channel.hpp"
#include "caia/network.hpp"

namespace caia {

struct ScenarioError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Scenario {
    DemandNetwork network;
    int n = 1;  // extension multiplier on the base extension N_e
    std::uint64_t seed = 1;
    GainBounds bounds;
    int distinct_values = 1;
    std::vector<double> t_target;       // optional explicit block values
    std::vector<double> snr_db = {30, 40, 50, 60};
    std::string stream_path;            // slot stream file for matching
    std::vector<double> match_eps = {1e-1, 1e-2, 1e-3, 0};
    int match_budget = 10000;
    std::string out_dir = ".";
};

/// Lines of `key=value`; `#` starts a comment; keys: K, N, S<j> (comma
/// separated transmitters), n, seed, gmin, gmax, distinct_values, T_target,
/// snr_db, stream, match_eps, match_budget, out. Unknown keys are errors.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

}  // namespace caia

#endif
