#pragma once

#include <cstdint>
#include <iosfwd>
#include <filesystem>
#include <string>
#include <vector>

#include "jiomber/config.hpp"
#include "jiomber/linalg.hpp"
#include "jiomber/signal_model.hpp"

namespace jiomber {

/// Raw outcome of one trial for the desired user (user index 0).
struct TrialResult {
    std::uint64_t seed = 0;
    std::vector<DetectorKind> detectors;
    std::vector<std::vector<Bit>> decisions;          // [detector][symbol]
    std::vector<std::vector<std::uint8_t>> errors;    // [detector][symbol], 1 = bit error
    std::vector<Bit> true_bits;                       // [symbol]
    std::vector<int> selected_ranks;                  // [symbol], JIO_MBER_auto only
};

/// The users of one trial: Gold codes in family order, amplitudes from the
/// config, independent fading per user seeded from `trial_seed`.
std::vector<UserConfig> make_users(const ExperimentConfig& cfg, std::uint64_t trial_seed);

/// Runs every configured detector on one shared received stream: training on
/// symbols [0, tr_symbols), decision-directed afterwards.
TrialResult run_trial(const ExperimentConfig& cfg, std::uint64_t trial_seed);

struct DetectorSummary {
    DetectorKind kind;
    std::vector<double> ber_trace;       // mean error indicator per symbol
    std::vector<double> trial_final_ber; // per trial, over the last final_window symbols
    double final_ber = 0.0;
    double final_stderr = 0.0;
    int min_rank = 0;  // over all trials and symbols; JIO_MBER_auto only
    int max_rank = 0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<DetectorSummary> detectors;
    std::vector<std::uint64_t> trial_seeds;
    double wall_seconds = 0.0;

    const DetectorSummary& summary(DetectorKind kind) const;
};

/// Trials use seeds base_seed + t and run on up to `cfg.threads` workers;
/// aggregation is in trial order so the result does not depend on scheduling.
ExperimentResult run_monte_carlo(const ExperimentConfig& cfg);

enum class SweepAxis { Snr, Users, Rank };

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view name);

struct SweepRow {
    double axis_value;
    DetectorKind detector;
    double ber;
    double stderr_;
};

struct SweepResult {
    SweepAxis axis;
    ExperimentConfig config;
    std::vector<SweepRow> rows;
    double wall_seconds = 0.0;
};

/// One Monte Carlo run per sweep point, all with the same base_seed, so points
/// share their random streams. The rank axis changes D of JIO_MBER_fixed.
SweepResult sweep(const ExperimentConfig& cfg, SweepAxis axis);

/// Trailing moving average; window <= 1 returns the input.
std::vector<double> smooth_trace(const std::vector<double>& trace, int window);

// CSV output, CRLF line endings, numbers with 6 significant digits.
void write_trace_csv(std::ostream& out, const ExperimentResult& result);
void write_sweep_csv(std::ostream& out, const SweepResult& result);
void emit_csv(const ExperimentResult& result, const std::filesystem::path& path);
void emit_csv(const SweepResult& result, const std::filesystem::path& path);

/// JSON sidecar: version, config echo, seeds and wall time.
std::string metadata_json(const ExperimentResult& result);
std::string metadata_json(const SweepResult& result);
void write_metadata(const std::string& json, const std::filesystem::path& path);

/// Library version string (git describe when available).
std::string version_string();

}  // namespace jiomber
