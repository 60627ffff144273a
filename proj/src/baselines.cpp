#include "jiomber/baselines.hpp"

#include <cmath>
#include <numbers>

#include "jiomber/errors.hpp"

namespace jiomber {

using detail::require;

namespace {
constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
}

FullRankState init_full_rank(int M, double mu, double rho) {
    if (M < 1) throw ConfigError("full-rank receiver: M must be >= 1");
    if (!(mu > 0.0)) throw ConfigError("full-rank receiver: step size must be > 0");
    if (!(rho > 0.0)) throw ConfigError("full-rank receiver: rho must be > 0");
    return {CVec::Zero(M), mu, rho, Mode::Training};
}

Bit full_rank_decide(const FullRankState& state, const CVec& r) {
    require(state.w.size() == r.size(), "full-rank receiver: dimension mismatch");
    return hard_decision(state.w.dot(r).real());
}

void lms_update(FullRankState& state, const CVec& r, Bit b) {
    require(state.w.size() == r.size(), "lms_update: dimension mismatch");
    const cd e = static_cast<double>(b) - state.w.dot(r);
    state.w += state.mu * std::conj(e) * r;
}

CVec mber_full_rank_direction(const FullRankState& state, const CVec& r, Bit b) {
    require(state.w.size() == r.size(), "mber_full_rank_update: dimension mismatch");
    require(b == 1 || b == -1, "bit must be +1 or -1");
    const double re_x = state.w.dot(r).real();
    const double g =
        std::exp(-re_x * re_x / (2.0 * state.rho * state.rho)) * b * kInvSqrt2Pi / (2.0 * state.rho);
    return state.w + state.mu * (g * (r - re_x * state.w));
}

void mber_full_rank_update(FullRankState& state, const CVec& r, Bit b) {
    state.w = mber_full_rank_direction(state, r, b);
    const double n = state.w.squaredNorm();
    if (n > kScaleEpsilon) state.w /= std::sqrt(n);
}

namespace {
template <typename Update>
Bit decide_then_adapt(FullRankState& state, const CVec& r, std::optional<Bit> known_bit,
                      Update&& update) {
    const Bit decided = full_rank_decide(state, r);
    Bit drive = decided;
    if (state.mode == Mode::Training) {
        require(known_bit.has_value(), "training mode needs the known bit");
        drive = *known_bit;
    }
    update(state, r, drive);
    return decided;
}
}  // namespace

Bit lms_step(FullRankState& state, const CVec& r, std::optional<Bit> known_bit) {
    return decide_then_adapt(state, r, known_bit, lms_update);
}

Bit mber_full_rank_step(FullRankState& state, const CVec& r, std::optional<Bit> known_bit) {
    return decide_then_adapt(state, r, known_bit, mber_full_rank_update);
}

}  // namespace jiomber
