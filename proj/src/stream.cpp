#include <cmath>

#include "jiomber/errors.hpp"
#include "jiomber/signal_model.hpp"

namespace jiomber {

namespace {
constexpr std::uint64_t kBitStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
}  // namespace

StreamSynthesizer::StreamSynthesizer(std::vector<UserConfig> users, double sigma,
                                     std::uint64_t seed, int spreading_gain, int num_paths)
    : users_(std::move(users)),
      noise_rng_(derive_seed(seed, kNoiseStream)),
      sigma_(sigma),
      n_(spreading_gain),
      lp_(num_paths) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("noise sigma must be finite and >= 0");

    for (const auto& u : users_) {
        if (!(u.amplitude > 0.0)) throw ConfigError("user amplitude must be > 0");
        if (n_ == 0) n_ = u.code.length();
        if (lp_ == 0) lp_ = u.channel.num_paths();
        if (u.code.length() != n_ || u.channel.num_paths() != lp_)
            throw ConfigError("all users must share spreading gain and number of paths");
    }
    if (n_ < 1 || lp_ < 1) throw ConfigError("stream dimensions unknown or invalid");
    if (lp_ > n_) throw ConfigError("number of paths must not exceed the spreading gain");

    for (const auto& u : users_) {
        conv_.push_back(build_convolution_matrix(u.code, lp_).cast<cd>());
        bit_rng_.emplace_back(derive_seed(seed, kBitStream, static_cast<std::uint64_t>(u.code.user_id)));
    }
    prev_chips_ = CVec::Zero(window_length());
}

StreamSynthesizer::Symbol StreamSynthesizer::make_symbol() {
    Symbol s;
    s.chips = CVec::Zero(window_length());
    s.bits.reserve(users_.size());
    for (std::size_t k = 0; k < users_.size(); ++k) {
        const Bit b = (bit_rng_[k]() >> 63) ? -1 : +1;
        s.bits.push_back(b);
        const auto& taps = users_[k].channel.step();
        const CVec h = Eigen::Map<const CVec>(taps.data(), lp_);
        s.chips += (users_[k].amplitude * b) * (conv_[k] * h);
    }
    return s;
}

ReceivedSample StreamSynthesizer::next() {
    if (!primed_) {
        cur_ = make_symbol();
        next_ = make_symbol();
        primed_ = true;
    }
    const int m = window_length();
    const int isi = m - n_;

    ReceivedSample out;
    out.symbol_index = index_;
    out.true_bits = cur_.bits;
    out.r = cur_.chips;
    if (isi > 0) {
        out.r.head(isi) += prev_chips_.segment(n_, isi);
        out.r.tail(isi) += next_.chips.head(isi);
    }
    if (sigma_ > 0.0) {
        const double s = sigma_ / std::sqrt(2.0);
        for (int i = 0; i < m; ++i) {
            const double re = normal_(noise_rng_);
            const double im = normal_(noise_rng_);
            out.r[i] += cd(s * re, s * im);
        }
    }

    prev_chips_ = std::move(cur_.chips);
    cur_ = std::move(next_);
    next_ = make_symbol();
    ++index_;
    return out;
}

std::vector<ReceivedSample> synthesize_stream(std::vector<UserConfig> users,
                                              std::int64_t num_symbols, double sigma,
                                              std::uint64_t seed, int spreading_gain,
                                              int num_paths) {
    if (num_symbols < 0) throw ConfigError("num_symbols must be >= 0");
    StreamSynthesizer gen(std::move(users), sigma, seed, spreading_gain, num_paths);
    std::vector<ReceivedSample> out;
    out.reserve(static_cast<std::size_t>(num_symbols));
    for (std::int64_t i = 0; i < num_symbols; ++i) out.push_back(gen.next());
    return out;
}

}  // namespace jiomber
