#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "jiomber/linalg.hpp"

namespace jiomber {

/// One user's spreading sequence, chips are +-1/sqrt(N).
struct SpreadingCode {
    RVec chips;
    int user_id = 0;

    int length() const { return static_cast<int>(chips.size()); }
};

/// Builds the Gold family of the given LFSR degree (3, 5 or 7).
///
/// Order is fixed: the two preferred m-sequences u and v, then
/// u xor (v cyclically shifted by k) for k = 0 .. N-1. Bits map 0 -> +1,
/// 1 -> -1 and are scaled by 1/sqrt(N). The `user_id` of each code is its
/// index in the returned list.
std::vector<SpreadingCode> generate_gold_family(int degree);

/// Raw {0,1} m-sequence of length 2^degree - 1 from an all-ones fill.
/// `taps` lists the recurrence offsets: s[n+degree] = xor of s[n+t].
std::vector<std::uint8_t> m_sequence(int degree, const std::vector<int>& taps);

/// Unnormalized periodic cross-correlation of two +-1 sequences at one shift.
int periodic_correlation(const std::vector<int>& a, const std::vector<int>& b, int shift);

/// M x Lp matrix whose column l is the code delayed by l chips, M = N + Lp - 1.
RMat build_convolution_matrix(const SpreadingCode& code, int num_paths);

/// Per-tap sum-of-sinusoids Rayleigh fading process.
///
/// Each tap is (sqrt(p)/sqrt(16)) * sum_n exp(j(2*pi*fd*cos(a_n)*i + phi_n)),
/// with a_n = (2*pi*n + theta)/16. theta and phi_n are drawn per tap from the
/// seed, so the ensemble autocorrelation of every tap is p * J0(2*pi*fd*k).
/// A channel can also be built with fixed taps (no fading).
class ChannelState {
public:
    static constexpr int kOscillators = 16;

    ChannelState() = default;
    ChannelState(std::vector<double> power_profile_db, double normalized_doppler,
                 std::uint64_t seed);

    /// Static channel: `jakes_step` always returns `taps`.
    static ChannelState fixed(std::vector<cd> taps);

    int num_paths() const { return static_cast<int>(taps_.size()); }
    const std::vector<cd>& taps() const { return taps_; }
    const std::vector<double>& power_profile_db() const { return profile_db_; }
    double normalized_doppler() const { return doppler_; }
    std::uint64_t seed() const { return seed_; }
    std::int64_t symbol_index() const { return index_; }

    /// Linear mean power of each tap, tap 0 normalized to 1.
    std::vector<double> tap_powers() const;

    /// Taps for the current symbol; advances the process by one symbol.
    const std::vector<cd>& step();

private:
    void evaluate();

    std::vector<cd> taps_;
    std::vector<double> profile_db_;
    std::vector<double> amplitude_;
    // per tap: kOscillators Doppler rates (rad/symbol) and phases
    std::vector<double> omega_;
    std::vector<double> phase_;
    double doppler_ = 0.0;
    std::uint64_t seed_ = 0;
    std::int64_t index_ = 0;
    bool fixed_ = false;
};

/// Free-function form of `ChannelState::step`.
inline std::vector<cd> jakes_step(ChannelState& state) { return state.step(); }

struct UserConfig {
    double amplitude = 1.0;
    SpreadingCode code;
    ChannelState channel;
};

struct ReceivedSample {
    CVec r;
    std::vector<Bit> true_bits;
    std::int64_t symbol_index = 0;
};

/// Streaming generator of received vectors.
///
/// Synthesizes the chip-rate superposition of every user's symbol stream
/// convolved with its channel and returns the M-chip window starting at chip
/// i*N, so the tail of symbol i-1 and the head of symbol i+1 leak into r(i).
/// No symbol exists before i = 0. Bits of user `code.user_id` are drawn from a
/// stream derived from (seed, user_id), noise from a separate derived stream.
/// `spreading_gain` / `num_paths` fix the dimensions when `users` is empty and
/// are checked against the users otherwise (0 = take from users).
class StreamSynthesizer {
public:
    StreamSynthesizer(std::vector<UserConfig> users, double sigma, std::uint64_t seed,
                      int spreading_gain = 0, int num_paths = 0);

    int spreading_gain() const { return n_; }
    int num_paths() const { return lp_; }
    int window_length() const { return n_ + lp_ - 1; }
    int num_users() const { return static_cast<int>(users_.size()); }

    ReceivedSample next();

private:
    struct Symbol {
        CVec chips;  // length M, summed over users
        std::vector<Bit> bits;
    };
    Symbol make_symbol();

    std::vector<UserConfig> users_;
    std::vector<CMat> conv_;
    std::vector<std::mt19937_64> bit_rng_;
    std::mt19937_64 noise_rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    double sigma_;
    int n_ = 0;
    int lp_ = 0;
    std::int64_t index_ = 0;
    bool primed_ = false;
    Symbol cur_, next_;
    CVec prev_chips_;
};

std::vector<ReceivedSample> synthesize_stream(std::vector<UserConfig> users,
                                              std::int64_t num_symbols, double sigma,
                                              std::uint64_t seed, int spreading_gain = 0,
                                              int num_paths = 0);

/// Deterministic 64-bit seed mixing (splitmix64 finalizer over the inputs).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace jiomber
