// Scenario-driven front end: exact DoF optimum, alignment-condition listing,
// aided-channel synthesis, beamformer design, alignment verification, rate
// simulation, and slot-stream matching.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "caia/aiding.hpp"
#include "caia/alignment_graph.hpp"
#include "caia/beamforming.hpp"
#include "caia/channel.hpp"
#include "caia/lp.hpp"
#include "caia/network.hpp"
#include "caia/rational.hpp"
#include "caia/scenario.hpp"
#include "caia/simulate.hpp"

namespace {

using namespace caia;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitSolver = 3;
constexpr int kExitInfeasible = 4;

struct Options {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool generic = false;
};

struct Context {
    Scenario scenario;
    LinearProgram lp;
    DoFAssignment d;
    DualCertificate dual;
    NetworkClass cls;
    PeelingPlan plan;
};

Context make_context(const Options& opt) {
    Context ctx;
    ctx.scenario = load_scenario(opt.scenario_path);
    if (opt.seed) ctx.scenario.seed = *opt.seed;
    if (opt.out) ctx.scenario.out_dir = *opt.out;
    ctx.lp = build_lp(ctx.scenario.network);
    auto solved = solve_optimal_dof(ctx.lp);
    ctx.d = std::move(solved.first);
    ctx.dual = std::move(solved.second);
    ctx.cls = classify(ctx.scenario.network);
    ctx.plan = plan_irregular(ctx.scenario.network, ctx.d, ctx.scenario.n);
    return ctx;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw ScenarioError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw ScenarioError("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

std::filesystem::path out_path(const Context& ctx, const std::string& name) {
    return std::filesystem::path(ctx.scenario.out_dir) / name;
}

std::string dof_line(const Context& ctx) {
    std::string line = "d =";
    for (const auto& x : ctx.d.d) line += " " + to_string(x);
    line += ", total = " + to_string(ctx.d.total);
    line += ", class = " + to_string(ctx.cls);
    return line;
}

std::vector<std::pair<AlignmentGraph, std::vector<AidingStructure>>> scenario_structures(
    const Context& ctx) {
    auto rounds = plan_structures(ctx.plan, ctx.scenario.distinct_values);
    if (!ctx.scenario.t_target.empty()) {
        for (auto& [graph, structures] : rounds)
            for (auto& s : structures) {
                if (static_cast<int>(ctx.scenario.t_target.size()) < s.n1)
                    throw ScenarioError("T_target provides fewer than " + std::to_string(s.n1) +
                                        " values");
                s.values.clear();
                for (int i = 0; i < s.n1; ++i)
                    s.values.push_back(Complex(ctx.scenario.t_target[i], 0));
            }
    }
    return rounds;
}

ExtendedChannel make_channel(const Context& ctx, bool generic) {
    if (generic)
        return random_channel(ctx.plan.tau, ctx.scenario.network.N, ctx.scenario.network.K,
                              ctx.scenario.seed, ctx.scenario.bounds);
    SynthesisOptions so;
    so.seed = ctx.scenario.seed;
    so.bounds = ctx.scenario.bounds;
    return synthesize_aided_channel(ctx.plan.tau, ctx.scenario.network.N,
                                    ctx.scenario.network.K, scenario_structures(ctx), so);
}

struct RoundStatus {
    int conditions = 0;
    bool feasible = true;
    std::string reason;
    JointPartition partition;
};

std::vector<RoundStatus> check_rounds(const Context& ctx, const ExtendedChannel& channel) {
    std::vector<RoundStatus> out;
    for (const auto& round : ctx.plan.rounds) {
        RoundStatus status;
        AlignmentGraph graph = label_topology(round.topology, channel);
        const auto conditions = cycle_conditions(graph);
        status.conditions = static_cast<int>(conditions.size());
        const VerifyResult vr = verify_conditions(conditions, round.columns);
        status.feasible = vr.feasible;
        status.reason = vr.reason;
        status.partition = vr.partition;
        out.push_back(std::move(status));
    }
    return out;
}

std::string round_summary(const Context& ctx, const std::vector<RoundStatus>& statuses) {
    std::ostringstream os;
    for (size_t r = 0; r < ctx.plan.rounds.size(); ++r) {
        const auto& round = ctx.plan.rounds[r];
        os << "round " << (r + 1) << ": active";
        for (int k : round.active) os << " " << k;
        os << ", columns " << round.columns << ", conditions " << statuses[r].conditions
           << ", feasible " << (statuses[r].feasible ? "yes" : "no");
        if (!statuses[r].feasible) os << " (" << statuses[r].reason << ")";
        if (!round.within_half) os << ", warning: round DoF exceeds half the extension";
        os << "\n";
    }
    return os.str();
}

std::string alignment_summary(const AlignmentReport& report) {
    std::ostringstream os;
    for (const auto& r : report.per_receiver)
        os << "receiver " << r.receiver << ": desired " << r.desired_dim << "/"
           << r.desired_expected << ", interference " << r.interference_dim << ", joint "
           << r.joint_dim << ", decodable " << (r.decodable ? "yes" : "no") << "\n";
    return os.str();
}

std::string rates_csv(const SlopeEstimate& est, int K) {
    std::ostringstream os;
    os.precision(std::numeric_limits<double>::max_digits10);
    os << "snr_db,sum_rate_bits";
    for (int k = 1; k <= K; ++k) os << ",msg_" << k;
    os << "\n";
    for (const auto& p : est.points) {
        os << 10.0 * std::log10(p.power) << "," << p.sum;
        for (double r : p.per_message) os << "," << r;
        os << "\n";
    }
    return os.str();
}

int cmd_dof(const Options& opt) {
    const Context ctx = make_context(opt);
    std::cout << dof_line(ctx) << "\n";
    std::cout << "dual = " << to_string(ctx.dual.dual_value);
    for (size_t i = 0; i < ctx.lp.prime.size(); ++i)
        std::cout << (i == 0 ? " (receiver " : ", receiver ") << ctx.lp.prime[i] << ": "
                  << to_string(ctx.dual.receiver_lambda[i]);
    std::cout << ")\n";
    const KktReport kkt = verify_kkt(ctx.lp, ctx.d, ctx.dual);
    std::cout << "kkt = " << (kkt.all() ? "pass" : "FAIL") << "\n";
    return kExitOk;
}

int cmd_classify(const Options& opt) {
    const Context ctx = make_context(opt);
    const FaceProbe probe = optimal_face_probe(ctx.lp);
    std::cout << "class = " << to_string(ctx.cls) << "\n";
    std::cout << "top_two_equal = " << (probe.top_two_equal ? "true" : "false")
              << ", max_component = " << to_string(probe.max_component)
              << ", unique_vertex = " << (probe.unique ? "true" : "false") << "\n";
    return kExitOk;
}

int cmd_conditions(const Options& opt) {
    const Context ctx = make_context(opt);
    std::cout << "plan: Ne=" << ctx.plan.Ne << " tau=" << ctx.plan.tau
              << " rounds=" << ctx.plan.rounds.size() << "\n";
    for (size_t r = 0; r < ctx.plan.rounds.size(); ++r) {
        const auto& round = ctx.plan.rounds[r];
        const auto& g = round.topology;
        std::cout << "round " << (r + 1) << ": active";
        for (int k : round.active) std::cout << " " << k;
        std::cout << ", columns " << round.columns << ", nodes " << g.nodes.size() << ", edges "
                  << g.edges.size() << ", components " << g.components << ", conditions "
                  << g.cycle_count() << "\n";
        const auto factor_lists = cycle_factor_lists(g);
        for (size_t c = 0; c < factor_lists.size(); ++c)
            std::cout << "  T[" << (c + 1) << "] root " << g.cycles[c].base_node << ": "
                      << describe_factors(factor_lists[c]) << "\n";
        if (!round.within_half)
            std::cout << "  warning: round DoF exceeds half the extension\n";
    }
    return kExitOk;
}

int cmd_synth(const Options& opt) {
    const Context ctx = make_context(opt);
    const ExtendedChannel channel = make_channel(ctx, false);
    std::ostringstream os;
    write_channel(os, channel);
    atomic_write(out_path(ctx, "channel.txt"), os.str());
    const auto statuses = check_rounds(ctx, channel);
    std::cout << round_summary(ctx, statuses);
    std::cout << "wrote " << out_path(ctx, "channel.txt").string() << "\n";
    for (const auto& s : statuses)
        if (!s.feasible) return kExitInfeasible;
    return kExitOk;
}

int run_design(const Options& opt, bool simulate_too, bool design_files, bool verify_only) {
    const Context ctx = make_context(opt);
    const ExtendedChannel channel = make_channel(ctx, opt.generic);
    const auto statuses = check_rounds(ctx, channel);
    bool feasible = true;
    for (const auto& s : statuses) feasible = feasible && s.feasible;

    DesignOptions dopts;
    dopts.seed = ctx.scenario.seed;
    dopts.force = opt.generic || !feasible;
    const BeamformingSet V = design_beamformers(channel, ctx.scenario.network, ctx.plan, dopts);
    const AlignmentReport report = verify_alignment(channel, ctx.scenario.network, V);

    std::ostringstream rep;
    rep << "scenario: K=" << ctx.scenario.network.K << " N=" << ctx.scenario.network.N
        << " n=" << ctx.scenario.n << " seed=" << ctx.scenario.seed
        << (opt.generic ? " generic" : " aided") << "\n";
    rep << "lp: " << dof_line(ctx) << "\n";
    rep << "plan: Ne=" << ctx.plan.Ne << " tau=" << ctx.plan.tau
        << " rounds=" << ctx.plan.rounds.size() << "\n";
    rep << round_summary(ctx, statuses);
    rep << alignment_summary(report);

    if (design_files) {
        std::ostringstream ch;
        write_channel(ch, channel);
        atomic_write(out_path(ctx, "channel.txt"), ch.str());
        std::ostringstream bf;
        write_beamformers(bf, V);
        atomic_write(out_path(ctx, "beamformers.txt"), bf.str());
    }

    bool simulated = false;
    if (simulate_too && report.all_decodable) {
        const SlopeEstimate est =
            dof_slope(channel, ctx.scenario.network, V, ctx.scenario.snr_db);
        atomic_write(out_path(ctx, "rates.csv"), rates_csv(est, ctx.scenario.network.K));
        rep.precision(10);
        rep << "dof_estimate=" << est.dof << "\n";
        simulated = true;
    } else if (simulate_too) {
        rep << "simulation skipped: not decodable\n";
    }

    std::cout << rep.str();
    if (!verify_only || design_files || simulate_too) {
        atomic_write(out_path(ctx, "report.txt"), rep.str());
        std::cout << "wrote " << out_path(ctx, "report.txt").string() << "\n";
    }
    (void)simulated;
    return feasible && report.all_decodable ? kExitOk : kExitInfeasible;
}

int cmd_match(const Options& opt) {
    const Context ctx = make_context(opt);
    if (ctx.scenario.stream_path.empty())
        throw ScenarioError("match needs a stream=<path> entry in the scenario");
    const ExtendedChannel stream = read_channel_file(ctx.scenario.stream_path);
    const int n = ctx.plan.rounds.front().columns;
    const AidingStructure structure = AidingStructure::uniform(
        n, ctx.plan.tau, std::min(ctx.scenario.distinct_values, n));

    std::ostringstream csv;
    csv.precision(std::numeric_limits<double>::max_digits10);
    csv << "eps,match_rate,worst_residual\n";
    for (double eps : ctx.scenario.match_eps) {
        const MatchReport report = match_slots(stream, ctx.scenario.network, structure, eps,
                                               ctx.scenario.match_budget);
        csv << eps << "," << report.match_rate << "," << report.worst_residual << "\n";
        std::cout << "eps " << eps << ": groups " << report.groups.size() << ", rate "
                  << report.match_rate << ", worst residual " << report.worst_residual << "\n";
    }
    atomic_write(out_path(ctx, "match.csv"), csv.str());
    std::cout << "wrote " << out_path(ctx, "match.csv").string() << "\n";
    return kExitOk;
}

int dispatch(const std::string& cmd, const Options& opt) {
    if (cmd == "dof") return cmd_dof(opt);
    if (cmd == "classify") return cmd_classify(opt);
    if (cmd == "conditions") return cmd_conditions(opt);
    if (cmd == "synth") return cmd_synth(opt);
    if (cmd == "design") return run_design(opt, false, true, false);
    if (cmd == "verify") return run_design(opt, false, false, true);
    if (cmd == "simulate") return run_design(opt, true, false, false);
    if (cmd == "pipeline") return run_design(opt, true, true, false);
    if (cmd == "match") return cmd_match(opt);
    throw ScenarioError("unknown command " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"channel-aided interference alignment toolkit"};
    app.require_subcommand(1);

    Options opt;
    const std::vector<std::string> names = {"dof",    "classify", "conditions",
                                            "synth",  "design",   "verify",
                                            "simulate", "pipeline", "match"};
    std::vector<CLI::App*> subs;
    for (const auto& name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--scenario", opt.scenario_path, "scenario file")->required();
        sub->add_option("--seed", [&opt](const CLI::results_t& res) {
            // stoull throws on non-numeric input and silently accepts
            // trailing garbage or a sign; reject all of those here so the
            // parser reports a normal option error instead of aborting.
            if (res[0].empty() || res[0][0] == '-' || res[0][0] == '+') return false;
            try {
                size_t used = 0;
                opt.seed = std::stoull(res[0], &used);
                if (used != res[0].size()) return false;
            } catch (const std::exception&) {
                return false;
            }
            return true;
        }, "override scenario seed");
        sub->add_option("--out", [&opt](const CLI::results_t& res) {
            opt.out = res[0];
            return true;
        }, "override output directory");
        sub->add_flag("--generic", opt.generic, "random channel instead of synthesis");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    std::string chosen;
    for (size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) chosen = names[i];

    try {
        return dispatch(chosen, opt);
    } catch (const ScenarioError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const NetworkError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ChannelError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const SimulationError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const AidingError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const DesignError& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}
