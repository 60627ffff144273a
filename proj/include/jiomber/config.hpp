#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "jiomber/jio_mber.hpp"

namespace jiomber {

enum class DetectorKind { JIO_MBER_fixed, JIO_MBER_auto, FullRankLMS, FullRankMBER };

std::string_view to_string(DetectorKind d);
DetectorKind detector_from_string(std::string_view name);  // throws ConfigError

/// Experiment parameters. Defaults reproduce the reference DS-CDMA setup:
/// N = 31 Gold codes, K = 5 users, three paths at 0/-7/-10 dB, fd*Ts = 5e-5,
/// 250 training + 1500 decision-directed symbols, rho = 2 sigma.
struct ExperimentConfig {
    int N = 31;
    int K = 5;
    int Lp = 3;
    std::vector<double> power_profile_db{0.0, -7.0, -10.0};
    double doppler = 5e-5;
    double snr_db = 15.0;  // 10 log10(A_1^2 / sigma^2); "inf" means noiseless
    std::vector<double> amplitudes;  // user k uses amplitudes[k] if present, else 1

    std::vector<double> snr_sweep{0.0, 2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0};
    std::vector<int> users_sweep{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
    std::vector<int> rank_sweep{2, 4, 6, 8, 10, 12, 16, 20};

    int D = 8;
    int D_min = 3;
    int D_max = 20;
    int J = 5;
    double mu_w = 0.005;
    double mu_S = 0.005;
    double mu_lms = 0.105;
    double mu_mber = 0.05;
    double rho_multiplier = 2.0;
    double rho_floor = 1e-3;       // used when rho_multiplier * sigma is smaller (e.g. sigma = 0)
    double rank_forgetting = 0.0;  // 0: instantaneous rank selection
    RankReference rank_reference = RankReference::FullRankDecision;  // "full" | "candidate"

    int tr_symbols = 250;
    int dd_symbols = 1500;
    int final_window = 500;
    int smoothing_window = 0;  // trailing moving average applied to exported traces

    int num_trials = 200;
    std::uint64_t base_seed = 1;
    int threads = 0;  // 0: hardware concurrency

    std::vector<DetectorKind> detectors{DetectorKind::JIO_MBER_fixed, DetectorKind::JIO_MBER_auto,
                                        DetectorKind::FullRankLMS, DetectorKind::FullRankMBER};

    int window_length() const { return N + Lp - 1; }
    int total_symbols() const { return tr_symbols + dd_symbols; }
    double sigma() const;  // A_1 / 10^(snr_db / 20)
    double rho() const;    // max(rho_multiplier * sigma, rho_floor)

    bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ConfigError naming the offending key.
void validate(const ExperimentConfig& cfg);

/// Flat `key = value` text, `#` starts a comment, lists are comma separated.
/// Unknown or repeated keys, malformed lines and invalid values raise
/// ParseError with the 1-based line number.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_string(const std::string& text);

/// Every key in canonical order; re-parsing gives an equal config.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);
std::string emit_config(const ExperimentConfig& cfg);

/// Applies one `key = value` assignment (used by the parser and the CLI).
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

}  // namespace jiomber
