#include <cmath>
#include <numbers>
#include <random>

#include "jiomber/errors.hpp"
#include "jiomber/signal_model.hpp"

namespace jiomber {

ChannelState::ChannelState(std::vector<double> power_profile_db, double normalized_doppler,
                           std::uint64_t seed)
    : profile_db_(std::move(power_profile_db)), doppler_(normalized_doppler), seed_(seed) {
    if (profile_db_.empty()) throw ConfigError("ChannelState: power profile needs at least one tap");
    if (!(normalized_doppler >= 0.0) || !std::isfinite(normalized_doppler))
        throw ConfigError("ChannelState: normalized Doppler must be finite and >= 0");

    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);

    const std::size_t lp = profile_db_.size();
    taps_.assign(lp, cd{});
    amplitude_.resize(lp);
    omega_.resize(lp * kOscillators);
    phase_.resize(lp * kOscillators);
    for (std::size_t f = 0; f < lp; ++f) {
        amplitude_[f] = std::sqrt(std::pow(10.0, (profile_db_[f] - profile_db_[0]) / 10.0) /
                                  kOscillators);
        const double theta = two_pi * uniform(rng) - std::numbers::pi;
        for (int n = 0; n < kOscillators; ++n) {
            const double arrival = (two_pi * n + theta) / kOscillators;
            omega_[f * kOscillators + n] = two_pi * doppler_ * std::cos(arrival);
            phase_[f * kOscillators + n] = two_pi * uniform(rng);
        }
    }
    evaluate();
}

ChannelState ChannelState::fixed(std::vector<cd> taps) {
    if (taps.empty()) throw ConfigError("ChannelState::fixed: needs at least one tap");
    ChannelState s;
    s.fixed_ = true;
    s.taps_ = std::move(taps);
    const double p0 = std::norm(s.taps_[0]);
    for (const auto& t : s.taps_)
        s.profile_db_.push_back(p0 > 0.0 ? 10.0 * std::log10(std::norm(t) / p0) : 0.0);
    return s;
}

std::vector<double> ChannelState::tap_powers() const {
    std::vector<double> p;
    for (double db : profile_db_) p.push_back(std::pow(10.0, (db - profile_db_[0]) / 10.0));
    return p;
}

void ChannelState::evaluate() {
    if (fixed_) return;
    const auto t = static_cast<double>(index_);
    for (std::size_t f = 0; f < taps_.size(); ++f) {
        double re = 0.0, im = 0.0;
        for (int n = 0; n < kOscillators; ++n) {
            const double angle = omega_[f * kOscillators + n] * t + phase_[f * kOscillators + n];
            re += std::cos(angle);
            im += std::sin(angle);
        }
        taps_[f] = amplitude_[f] * cd(re, im);
    }
}

const std::vector<cd>& ChannelState::step() {
    evaluate();
    ++index_;
    return taps_;
}

}  // namespace jiomber
