#pragma once

#include <optional>
#include <vector>

#include "jiomber/linalg.hpp"

namespace jiomber {

enum class Mode { Training, DecisionDirected };

/// Joint projection/filter state for one desired user.
///
/// `S` is M x D and `w` has D entries; with automatic rank selection D is the
/// maximum rank and `active_rank` records the rank used for the last decision.
/// After every completed update `w^H S^H S w == 1` unless `normalized` is false,
/// which only happens while `w` is still the all-zero initial vector.
struct JioState {
    CMat S;
    CVec w;
    double mu_w = 0.0;
    double mu_S = 0.0;
    int J = 1;
    double rho = 1.0;
    Mode mode = Mode::Training;
    int active_rank = 0;
    bool normalized = false;

    int window_length() const { return static_cast<int>(S.rows()); }
    int rank() const { return static_cast<int>(S.cols()); }
};

/// Bit that the rank-selection error estimates refer to in decision-directed mode.
enum class RankReference {
    FullRankDecision,  // the decision of the d_max filter, shared by all candidates
    CandidateDecision, // each candidate's own decision: P_D = Q(|Re[x^D]| / rho)
};

struct RankSelectionConfig {
    int d_min = 1;
    int d_max = 1;
    bool enabled = false;
    // 0 selects on the instantaneous error estimate. A value in (0, 1) selects on
    // an exponentially weighted average of it instead (non-standard extension).
    double forgetting = 0.0;
    RankReference dd_reference = RankReference::FullRankDecision;
};

/// Scaling is skipped below this effective norm.
inline constexpr double kScaleEpsilon = 1e-12;

/// S = [I_D; 0], w = 0, training mode. Throws ConfigError on bad arguments.
JioState init_state(int M, int D, double mu_w, double mu_S, int J, double rho);

/// w^H S^H S w
double effective_norm_sq(const JioState& state);

/// Filter update for one inner cycle, unit-norm form:
///   w + mu_w * g * (S^H r - Re[x] S^H S w),  g = exp(-Re[x]^2/(2 rho^2)) b / (2 sqrt(2 pi) rho)
CVec update_filter(const JioState& state, const CVec& r, Bit b);

/// Projection update for one inner cycle: S + mu_S * g * (r w^H - S w w^H Re[x]).
CMat update_projection(const JioState& state, const CVec& r, Bit b);

/// Rescales w so that w^H S^H S w = 1; returns false (and leaves `normalized`
/// cleared) when the norm is below kScaleEpsilon.
bool scale_filter(JioState& state);

/// One inner cycle: both updates from the current (w, S), then rescale.
void jio_cycle(JioState& state, const CVec& r, Bit b);

/// Hard decision of the current state at full rank.
Bit jio_decide(const JioState& state, const CVec& r);

/// Processes one received vector: decides with the pre-update state, then runs
/// J inner cycles driven by `known_bit` (training) or the decision (DD).
/// Returns the decision.
Bit jio_step(JioState& state, const CVec& r, std::optional<Bit> known_bit);

/// Error estimate Q(sign(b) Re[x^D] / rho) of the first D columns of S and
/// entries of w, rescaled to unit effective norm. Returns 0.5 when the truncated
/// norm is below kScaleEpsilon.
double candidate_error(const JioState& state, int D, const CVec& r, Bit b, double rho);

/// All candidate errors for D = d_min .. d_max (index 0 is d_min). With
/// `b == 0` every candidate is scored against its own hard decision.
std::vector<double> candidate_errors(const JioState& state, const RankSelectionConfig& cfg,
                                     const CVec& r, Bit b);

/// argmin over [d_min, d_max] of `candidate_error`, ties to the smallest D.
int select_rank(const JioState& state, const RankSelectionConfig& cfg, const CVec& r, Bit b);

/// Hard decision using only the first D columns / entries.
Bit truncated_decide(const JioState& state, int D, const CVec& r);

/// JIO-MBER with automatic rank selection.
///
/// Adapts at d_max. For each sample the rank is chosen from the error
/// estimates (reference bit: the training bit, or the full-rank decision in DD
/// mode), the output decision uses the truncated pair at that rank, and the
/// J-cycle adaptation is driven by the training bit or the output decision.
class AutoRankJio {
public:
    AutoRankJio(JioState state, RankSelectionConfig cfg);

    struct Output {
        Bit decision;
        int rank;
    };

    Output step(const CVec& r, std::optional<Bit> known_bit);

    const JioState& state() const { return state_; }
    JioState& state() { return state_; }
    const RankSelectionConfig& config() const { return cfg_; }

private:
    JioState state_;
    RankSelectionConfig cfg_;
    std::vector<double> averaged_;
    bool have_average_ = false;
};

}  // namespace jiomber
