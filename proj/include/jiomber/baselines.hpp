#pragma once

#include <optional>

#include "jiomber/jio_mber.hpp"
#include "jiomber/linalg.hpp"

namespace jiomber {

/// Full-rank adaptive receiver state shared by the LMS and MBER baselines.
struct FullRankState {
    CVec w;
    double mu = 0.0;
    double rho = 1.0;  // MBER only
    Mode mode = Mode::Training;
};

/// w = 0. Throws ConfigError for M < 1, mu <= 0 or rho <= 0.
FullRankState init_full_rank(int M, double mu, double rho = 1.0);

/// sign(Re[w^H r]), ties to +1.
Bit full_rank_decide(const FullRankState& state, const CVec& r);

/// e = b - w^H r; w <- w + mu e* r.
void lms_update(FullRankState& state, const CVec& r, Bit b);

/// Unit-norm MBER step with S = I:
///   w <- w + mu g (r - Re[x] w), g = exp(-Re[x]^2/(2 rho^2)) b / (2 sqrt(2 pi) rho),
/// then w <- w / ||w|| when ||w||^2 > kScaleEpsilon.
void mber_full_rank_update(FullRankState& state, const CVec& r, Bit b);

/// The MBER step without the final normalization.
CVec mber_full_rank_direction(const FullRankState& state, const CVec& r, Bit b);

/// Decide with the pre-update filter, then adapt on the known bit (training) or
/// the decision (DD). Returns the decision.
Bit lms_step(FullRankState& state, const CVec& r, std::optional<Bit> known_bit);
Bit mber_full_rank_step(FullRankState& state, const CVec& r, std::optional<Bit> known_bit);

}  // namespace jiomber
