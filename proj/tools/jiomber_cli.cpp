// jiomber: run JIO-MBER / baseline BER experiments and export operation counts.
//
//   jiomber run        --config exp.cfg --out trace.csv
//   jiomber sweep      --axis snr --config exp.cfg --out sweep.csv
//   jiomber complexity --M 33 --D 2,4,6,8 --J 1 --Lp 3 --Dmax 20
//
// Exit codes: 0 success, 2 configuration error, 3 runtime error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jiomber/complexity.hpp"
#include "jiomber/config.hpp"
#include "jiomber/errors.hpp"
#include "jiomber/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> threads;
    std::string out;
    std::vector<std::string> detectors;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "Experiment config file (key = value)");
    cmd->add_option("--seed", o.seed, "Base seed (overrides base_seed)");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials (overrides num_trials)");
    cmd->add_option("--threads", o.threads, "Worker threads, 0 = all cores");
    cmd->add_option("--out", o.out, "CSV output path (stdout when omitted); metadata goes to PATH.json");
    cmd->add_option("--detectors", o.detectors,
                    "Comma list of JIO_MBER_fixed, JIO_MBER_auto, FullRankLMS, FullRankMBER")
        ->delimiter(',');
}

jiomber::ExperimentConfig load(const CommonOptions& o) {
    jiomber::ExperimentConfig cfg =
        o.config_path.empty() ? jiomber::ExperimentConfig{} : jiomber::parse_config(std::filesystem::path(o.config_path));
    if (o.seed) cfg.base_seed = *o.seed;
    if (o.trials) cfg.num_trials = *o.trials;
    if (o.threads) cfg.threads = *o.threads;
    if (!o.detectors.empty()) {
        cfg.detectors.clear();
        for (const auto& d : o.detectors) cfg.detectors.push_back(jiomber::detector_from_string(d));
    }
    jiomber::validate(cfg);
    return cfg;
}

template <typename Result>
void publish(const Result& result, const std::string& out) {
    if (out.empty()) {
        if constexpr (std::is_same_v<Result, jiomber::SweepResult>)
            jiomber::write_sweep_csv(std::cout, result);
        else
            jiomber::write_trace_csv(std::cout, result);
        return;
    }
    jiomber::emit_csv(result, out);
    jiomber::write_metadata(jiomber::metadata_json(result), out + ".json");
}

std::vector<std::int64_t> as_i64(const std::vector<long long>& v) { return {v.begin(), v.end()}; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"JIO-MBER reduced-rank multiuser detection simulator"};
    app.require_subcommand(1);

    CommonOptions run_opts, sweep_opts;
    auto* run = app.add_subcommand("run", "Single experiment, writes the per-symbol BER trace");
    add_common(run, run_opts);

    auto* sw = app.add_subcommand("sweep", "BER versus SNR, number of users or rank");
    add_common(sw, sweep_opts);
    std::string axis = "snr";
    sw->add_option("--axis", axis, "snr | users | rank")->check(CLI::IsMember({"snr", "users", "rank"}));

    auto* cx = app.add_subcommand("complexity", "Per-symbol operation counts");
    std::vector<long long> M{33}, D{2, 4, 6, 8, 10, 12, 14, 16, 18, 20}, J{1}, Lp{3}, Dmax{20};
    std::vector<std::string> algorithms;
    std::string cx_out;
    cx->add_option("--M", M, "Observation length(s)")->delimiter(',');
    cx->add_option("--D", D, "Rank(s)")->delimiter(',');
    cx->add_option("--J", J, "Inner cycles")->delimiter(',');
    cx->add_option("--Lp", Lp, "Number of paths")->delimiter(',');
    cx->add_option("--Dmax", Dmax, "Maximum rank for auto-rank counts")->delimiter(',');
    cx->add_option("--algorithms", algorithms, "Subset of algorithms (default: all)")->delimiter(',');
    cx->add_option("--out", cx_out, "CSV output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run) {
            publish(jiomber::run_monte_carlo(load(run_opts)), run_opts.out);
        } else if (*sw) {
            publish(jiomber::sweep(load(sweep_opts), jiomber::sweep_axis_from_string(axis)), sweep_opts.out);
        } else if (*cx) {
            std::vector<jiomber::Algorithm> algs;
            for (const auto& a : algorithms) algs.push_back(jiomber::algorithm_from_string(a));
            if (algs.empty()) algs = jiomber::all_algorithms();
            const auto rows = jiomber::complexity_sweep(
                algs, {as_i64(M), as_i64(D), as_i64(J), as_i64(Lp), as_i64(Dmax)});
            if (cx_out.empty()) {
                jiomber::write_complexity_csv(std::cout, rows);
            } else {
                std::ofstream f(cx_out, std::ios::binary);
                if (!f) throw std::runtime_error("cannot open '" + cx_out + "' for writing");
                jiomber::write_complexity_csv(f, rows);
            }
        }
    } catch (const jiomber::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
