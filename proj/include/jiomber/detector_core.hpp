#pragma once

#include "jiomber/linalg.hpp"

namespace jiomber {

// A projection matrix is an M x D complex matrix (1 <= D <= M); a reduced-rank
// filter is a complex D-vector. Both are plain Eigen types here.

struct DecisionStatistic {
    cd x;                // filter output w^H S^H r
    double signed_real;  // sign(b) * Re[x] for the bit the statistic refers to
};

inline DecisionStatistic make_statistic(cd x, Bit b) { return {x, b * x.real()}; }

struct Decision {
    DecisionStatistic stat;
    Bit bit;
};

/// S^H r.
CVec project(const CMat& S, const CVec& r);

/// x = w^H rbar and its hard decision; Re[x] == 0 decides +1.
Decision filter_and_decide(const CVec& w, const CVec& rbar);

/// Gaussian tail probability P(Z > x).
double q_function(double x);

/// Single-point Gaussian kernel density with mean `center` and variance
/// rho^2 * norm_sq, evaluated at `x_tilde`.
double kernel_density(double x_tilde, double center, double norm_sq, double rho);

/// Q(sign(b) Re[x] / (rho * sqrt(norm_sq))), with norm_sq = w^H S^H S w.
double error_probability(const DecisionStatistic& stat, double norm_sq, double rho);

/// Full pipeline: project, filter, and evaluate the smoothed error probability.
double error_probability(const CMat& S, const CVec& w, const CVec& r, Bit b, double rho);

/// dPe/dw* (conjugate Wirtinger gradient) of the smoothed error probability.
/// Throws ContractError when w^H S^H S w is zero.
CVec gradient_w(const CMat& S, const CVec& w, const CVec& r, Bit b, double rho);

/// dPe/dS* for the same cost; same preconditions as `gradient_w`.
CMat gradient_S(const CMat& S, const CVec& w, const CVec& r, Bit b, double rho);

/// Scalar in front of both gradients:
///   -exp(-Re[x]^2 / (2 rho^2 norm_sq)) * sign(b) / (2 sqrt(2 pi) rho)
double mber_gradient_weight(double re_x, double norm_sq, double rho, Bit b);

}  // namespace jiomber
