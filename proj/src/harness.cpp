#include "jiomber/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <thread>
#include <variant>

#include "jiomber/baselines.hpp"
#include "jiomber/errors.hpp"
#include "jiomber/jio_mber.hpp"

namespace jiomber {

namespace {

constexpr std::uint64_t kChannelStream = 3;
constexpr std::uint64_t kSignalStream = 4;

int gold_degree(int n) {
    switch (n) {
        case 7: return 3;
        case 31: return 5;
        case 127: return 7;
        default: throw ConfigError("N must be 7, 31 or 127");
    }
}

struct FixedJio {
    JioState state;
    Bit step(const CVec& r, std::optional<Bit> b, int&) { return jio_step(state, r, b); }
    void set_mode(Mode m) { state.mode = m; }
};

struct AutoJio {
    AutoRankJio jio;
    Bit step(const CVec& r, std::optional<Bit> b, int& rank) {
        const auto out = jio.step(r, b);
        rank = out.rank;
        return out.decision;
    }
    void set_mode(Mode m) { jio.state().mode = m; }
};

struct Lms {
    FullRankState state;
    Bit step(const CVec& r, std::optional<Bit> b, int&) { return lms_step(state, r, b); }
    void set_mode(Mode m) { state.mode = m; }
};

struct Mber {
    FullRankState state;
    Bit step(const CVec& r, std::optional<Bit> b, int&) { return mber_full_rank_step(state, r, b); }
    void set_mode(Mode m) { state.mode = m; }
};

using Detector = std::variant<FixedJio, AutoJio, Lms, Mber>;

Detector make_detector(DetectorKind kind, const ExperimentConfig& cfg) {
    const int M = cfg.window_length();
    const double rho = cfg.rho();
    switch (kind) {
        case DetectorKind::JIO_MBER_fixed:
            return FixedJio{init_state(M, cfg.D, cfg.mu_w, cfg.mu_S, cfg.J, rho)};
        case DetectorKind::JIO_MBER_auto:
            return AutoJio{AutoRankJio(init_state(M, cfg.D_max, cfg.mu_w, cfg.mu_S, cfg.J, rho),
                                       {cfg.D_min, cfg.D_max, true, cfg.rank_forgetting, cfg.rank_reference})};
        case DetectorKind::FullRankLMS:
            return Lms{init_full_rank(M, cfg.mu_lms)};
        case DetectorKind::FullRankMBER:
            return Mber{init_full_rank(M, cfg.mu_mber, rho)};
    }
    throw ConfigError("unknown detector");
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

std::vector<UserConfig> make_users(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
    const auto family = generate_gold_family(gold_degree(cfg.N));
    if (cfg.K > static_cast<int>(family.size())) throw ConfigError("K exceeds the Gold family size");
    std::vector<UserConfig> users;
    for (int k = 0; k < cfg.K; ++k) {
        UserConfig u;
        u.amplitude = k < static_cast<int>(cfg.amplitudes.size()) ? cfg.amplitudes[static_cast<std::size_t>(k)] : 1.0;
        u.code = family[static_cast<std::size_t>(k)];
        u.channel = ChannelState(cfg.power_profile_db, cfg.doppler,
                                 derive_seed(trial_seed, kChannelStream, static_cast<std::uint64_t>(k)));
        users.push_back(std::move(u));
    }
    return users;
}

TrialResult run_trial(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
    validate(cfg);
    const int total = cfg.total_symbols();
    const std::size_t n_det = cfg.detectors.size();

    std::vector<Detector> detectors;
    for (auto kind : cfg.detectors) detectors.push_back(make_detector(kind, cfg));

    StreamSynthesizer stream(make_users(cfg, trial_seed), cfg.sigma(),
                             derive_seed(trial_seed, kSignalStream));

    TrialResult res;
    res.seed = trial_seed;
    res.detectors = cfg.detectors;
    res.decisions.assign(n_det, std::vector<Bit>(static_cast<std::size_t>(total)));
    res.errors.assign(n_det, std::vector<std::uint8_t>(static_cast<std::size_t>(total)));
    res.true_bits.resize(static_cast<std::size_t>(total));
    const bool has_auto = std::find(cfg.detectors.begin(), cfg.detectors.end(),
                                    DetectorKind::JIO_MBER_auto) != cfg.detectors.end();
    if (has_auto) res.selected_ranks.resize(static_cast<std::size_t>(total));

    for (int i = 0; i < total; ++i) {
        if (i == cfg.tr_symbols)
            for (auto& d : detectors) std::visit([](auto& x) { x.set_mode(Mode::DecisionDirected); }, d);

        const ReceivedSample sample = stream.next();
        const Bit truth = sample.true_bits.front();
        const auto idx = static_cast<std::size_t>(i);
        res.true_bits[idx] = truth;
        const std::optional<Bit> known = i < cfg.tr_symbols ? std::optional<Bit>(truth) : std::nullopt;

        for (std::size_t k = 0; k < n_det; ++k) {
            int rank = 0;
            const Bit decided = std::visit([&](auto& x) { return x.step(sample.r, known, rank); }, detectors[k]);
            res.decisions[k][idx] = decided;
            res.errors[k][idx] = decided != truth;
            if (cfg.detectors[k] == DetectorKind::JIO_MBER_auto) res.selected_ranks[idx] = rank;
        }
    }
    return res;
}

const DetectorSummary& ExperimentResult::summary(DetectorKind kind) const {
    for (const auto& d : detectors)
        if (d.kind == kind) return d;
    throw ConfigError("detector '" + std::string(to_string(kind)) + "' not in result");
}

ExperimentResult run_monte_carlo(const ExperimentConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const auto trials = static_cast<std::size_t>(cfg.num_trials);

    std::vector<std::optional<TrialResult>> results(trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t t = next++; t < trials && !failed; t = next++) {
            try {
                results[t] = run_trial(cfg, cfg.base_seed + t);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(trials));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    ExperimentResult out;
    out.config = cfg;
    const auto total = static_cast<std::size_t>(cfg.total_symbols());
    const auto window_start = total - static_cast<std::size_t>(cfg.final_window);
    for (std::size_t k = 0; k < cfg.detectors.size(); ++k) {
        DetectorSummary s;
        s.kind = cfg.detectors[k];
        s.ber_trace.assign(total, 0.0);
        s.min_rank = std::numeric_limits<int>::max();
        s.max_rank = 0;
        for (const auto& r : results) {
            const auto& e = r->errors[k];
            std::size_t final_errors = 0;
            for (std::size_t i = 0; i < total; ++i) {
                s.ber_trace[i] += e[i];
                if (i >= window_start) final_errors += e[i];
            }
            s.trial_final_ber.push_back(static_cast<double>(final_errors) / static_cast<double>(cfg.final_window));
            if (s.kind == DetectorKind::JIO_MBER_auto) {
                const auto [lo, hi] = std::minmax_element(r->selected_ranks.begin(), r->selected_ranks.end());
                s.min_rank = std::min(s.min_rank, *lo);
                s.max_rank = std::max(s.max_rank, *hi);
            }
        }
        for (auto& x : s.ber_trace) x /= static_cast<double>(trials);
        if (s.kind != DetectorKind::JIO_MBER_auto) s.min_rank = s.max_rank = 0;
        s.final_ber = mean(s.trial_final_ber);
        s.final_stderr = standard_error(s.trial_final_ber);
        out.detectors.push_back(std::move(s));
    }
    for (std::size_t t = 0; t < trials; ++t) out.trial_seeds.push_back(cfg.base_seed + t);
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Snr: return "snr";
        case SweepAxis::Users: return "users";
        case SweepAxis::Rank: return "rank";
    }
    return "unknown";
}

SweepAxis sweep_axis_from_string(std::string_view name) {
    if (name == "snr") return SweepAxis::Snr;
    if (name == "users") return SweepAxis::Users;
    if (name == "rank") return SweepAxis::Rank;
    throw ConfigError("unknown sweep axis '" + std::string(name) + "' (snr, users, rank)");
}

SweepResult sweep(const ExperimentConfig& cfg, SweepAxis axis) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> points;
    switch (axis) {
        case SweepAxis::Snr: points = cfg.snr_sweep; break;
        case SweepAxis::Users: points.assign(cfg.users_sweep.begin(), cfg.users_sweep.end()); break;
        case SweepAxis::Rank: points.assign(cfg.rank_sweep.begin(), cfg.rank_sweep.end()); break;
    }
    if (points.empty()) throw ConfigError("sweep list for axis '" + std::string(to_string(axis)) + "' is empty");

    SweepResult out{axis, cfg, {}, 0.0};
    for (double v : points) {
        ExperimentConfig point = cfg;
        switch (axis) {
            case SweepAxis::Snr: point.snr_db = v; break;
            case SweepAxis::Users: point.K = static_cast<int>(v); break;
            case SweepAxis::Rank: point.D = static_cast<int>(v); break;
        }
        const auto res = run_monte_carlo(point);
        for (const auto& d : res.detectors) out.rows.push_back({v, d.kind, d.final_ber, d.final_stderr});
    }
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

std::vector<double> smooth_trace(const std::vector<double>& trace, int window) {
    if (window <= 1) return trace;
    std::vector<double> out(trace.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        acc += trace[i];
        if (i >= static_cast<std::size_t>(window)) acc -= trace[i - static_cast<std::size_t>(window)];
        out[i] = acc / static_cast<double>(std::min<std::size_t>(i + 1, static_cast<std::size_t>(window)));
    }
    return out;
}

}  // namespace jiomber
