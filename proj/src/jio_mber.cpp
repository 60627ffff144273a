#include "jiomber/jio_mber.hpp"

#include <cmath>
#include <numbers>

#include "jiomber/detector_core.hpp"
#include "jiomber/errors.hpp"

namespace jiomber {

using detail::require;

namespace {

// exp(-Re[x]^2 / (2 rho^2)) * b / (2 sqrt(2 pi) rho): the negated gradient
// weight at unit effective norm.
double unit_norm_weight(double re_x, double rho, Bit b) {
    return -mber_gradient_weight(re_x, 1.0, rho, b);
}

void check_sample(const JioState& s, const CVec& r, Bit b) {
    require(r.size() == s.S.rows(), "received vector length must equal M");
    require(b == 1 || b == -1, "bit must be +1 or -1");
}

// S.leftCols(D) * w.head(D) accumulated column by column so that every prefix
// is exact for the next one.
template <typename Visit>
void for_each_prefix(const JioState& s, int d_last, Visit&& visit) {
    CVec v = CVec::Zero(s.S.rows());
    for (int d = 0; d < d_last; ++d) {
        v += s.S.col(d) * s.w[d];
        visit(d + 1, v);
    }
}

// b == 0: score against the candidate's own decision.
double prefix_error(const CVec& v, const CVec& r, Bit b, double rho) {
    const double n = v.squaredNorm();
    if (n < kScaleEpsilon) return 0.5;
    const double re_x = v.dot(r).real();
    const double signed_re = b == 0 ? std::abs(re_x) : b * re_x;
    return q_function(signed_re / std::sqrt(n) / rho);
}

}  // namespace

JioState init_state(int M, int D, double mu_w, double mu_S, int J, double rho) {
    if (M < 1) throw ConfigError("init_state: M must be >= 1");
    if (D < 1 || D > M) throw ConfigError("init_state: rank D must satisfy 1 <= D <= M");
    if (J < 1) throw ConfigError("init_state: J must be >= 1");
    if (!(mu_w >= 0.0) || !(mu_S >= 0.0)) throw ConfigError("init_state: step sizes must be >= 0");
    if (!(rho > 0.0)) throw ConfigError("init_state: rho must be > 0");

    JioState s;
    s.S = CMat::Identity(M, D);
    s.w = CVec::Zero(D);
    s.mu_w = mu_w;
    s.mu_S = mu_S;
    s.J = J;
    s.rho = rho;
    s.mode = Mode::Training;
    s.active_rank = D;
    s.normalized = false;
    return s;
}

double effective_norm_sq(const JioState& state) { return (state.S * state.w).squaredNorm(); }

CVec update_filter(const JioState& state, const CVec& r, Bit b) {
    check_sample(state, r, b);
    const CVec rbar = state.S.adjoint() * r;
    const CVec ssw = state.S.adjoint() * (state.S * state.w);
    const double re_x = state.w.dot(rbar).real();
    const double g = unit_norm_weight(re_x, state.rho, b);
    return state.w + state.mu_w * (g * (rbar - re_x * ssw));
}

CMat update_projection(const JioState& state, const CVec& r, Bit b) {
    check_sample(state, r, b);
    const CVec sw = state.S * state.w;
    const double re_x = sw.dot(r).real();
    const double g = unit_norm_weight(re_x, state.rho, b);
    return state.S + state.mu_S * (g * (r * state.w.adjoint() - re_x * (sw * state.w.adjoint())));
}

bool scale_filter(JioState& state) {
    const double n = effective_norm_sq(state);
    if (!(n > kScaleEpsilon)) {
        state.normalized = false;
        return false;
    }
    state.w /= std::sqrt(n);
    state.normalized = true;
    return true;
}

void jio_cycle(JioState& state, const CVec& r, Bit b) {
    CVec w_next = update_filter(state, r, b);
    CMat s_next = update_projection(state, r, b);
    state.w = std::move(w_next);
    state.S = std::move(s_next);
    scale_filter(state);
}

Bit jio_decide(const JioState& state, const CVec& r) {
    require(r.size() == state.S.rows(), "received vector length must equal M");
    return filter_and_decide(state.w, state.S.adjoint() * r).bit;
}

Bit jio_step(JioState& state, const CVec& r, std::optional<Bit> known_bit) {
    const Bit decided = jio_decide(state, r);
    Bit drive = decided;
    if (state.mode == Mode::Training) {
        require(known_bit.has_value(), "jio_step: training mode needs the known bit");
        drive = *known_bit;
    }
    for (int j = 0; j < state.J; ++j) jio_cycle(state, r, drive);
    state.active_rank = state.rank();
    return decided;
}

double candidate_error(const JioState& state, int D, const CVec& r, Bit b, double rho) {
    check_sample(state, r, b);
    require(D >= 1 && D <= state.rank(), "candidate_error: D out of range");
    require(rho > 0.0, "candidate_error: rho must be > 0");
    double p = 0.5;
    for_each_prefix(state, D, [&](int d, const CVec& v) {
        if (d == D) p = prefix_error(v, r, b, rho);
    });
    return p;
}

std::vector<double> candidate_errors(const JioState& state, const RankSelectionConfig& cfg,
                                     const CVec& r, Bit b) {
    check_sample(state, r, b == 0 ? 1 : b);
    require(cfg.d_min >= 1 && cfg.d_min <= cfg.d_max && cfg.d_max <= state.rank(),
            "rank selection range must satisfy 1 <= d_min <= d_max <= rank");
    std::vector<double> p;
    p.reserve(static_cast<std::size_t>(cfg.d_max - cfg.d_min + 1));
    for_each_prefix(state, cfg.d_max, [&](int d, const CVec& v) {
        if (d >= cfg.d_min) p.push_back(prefix_error(v, r, b, state.rho));
    });
    return p;
}

namespace {
int argmin_rank(const std::vector<double>& p, int d_min) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] < p[best]) best = i;
    return d_min + static_cast<int>(best);
}
}  // namespace

int select_rank(const JioState& state, const RankSelectionConfig& cfg, const CVec& r, Bit b) {
    return argmin_rank(candidate_errors(state, cfg, r, b), cfg.d_min);
}

Bit truncated_decide(const JioState& state, int D, const CVec& r) {
    require(D >= 1 && D <= state.rank(), "truncated_decide: D out of range");
    require(r.size() == state.S.rows(), "received vector length must equal M");
    cd x{};
    for_each_prefix(state, D, [&](int d, const CVec& v) {
        if (d == D) x = v.dot(r);
    });
    return hard_decision(x.real());
}

AutoRankJio::AutoRankJio(JioState state, RankSelectionConfig cfg)
    : state_(std::move(state)), cfg_(cfg) {
    if (cfg_.d_min < 1 || cfg_.d_min > cfg_.d_max || cfg_.d_max != state_.rank())
        throw ConfigError("auto rank: need 1 <= d_min <= d_max == adapted rank");
    if (!(cfg_.forgetting >= 0.0 && cfg_.forgetting < 1.0))
        throw ConfigError("auto rank: forgetting factor must be in [0, 1)");
}

AutoRankJio::Output AutoRankJio::step(const CVec& r, std::optional<Bit> known_bit) {
    Bit reference = 0;
    if (state_.mode == Mode::Training) {
        require(known_bit.has_value(), "AutoRankJio::step: training mode needs the known bit");
        reference = *known_bit;
    } else if (cfg_.dd_reference == RankReference::FullRankDecision) {
        reference = jio_decide(state_, r);
    }

    int rank = cfg_.d_max;
    if (cfg_.enabled) {
        auto p = candidate_errors(state_, cfg_, r, reference);
        if (cfg_.forgetting > 0.0) {
            if (!have_average_) {
                averaged_ = p;
                have_average_ = true;
            } else {
                for (std::size_t i = 0; i < p.size(); ++i)
                    averaged_[i] = cfg_.forgetting * averaged_[i] + (1.0 - cfg_.forgetting) * p[i];
            }
            rank = argmin_rank(averaged_, cfg_.d_min);
        } else {
            rank = argmin_rank(p, cfg_.d_min);
        }
    }

    const Bit decided = truncated_decide(state_, rank, r);
    const Bit drive = state_.mode == Mode::Training ? reference : decided;
    for (int j = 0; j < state_.J; ++j) jio_cycle(state_, r, drive);
    state_.active_rank = rank;
    return {decided, rank};
}

}  // namespace jiomber
