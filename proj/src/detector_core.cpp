#include "jiomber/detector_core.hpp"

#include <cmath>
#include <numbers>

#include "jiomber/errors.hpp"

namespace jiomber {

using detail::require;

namespace {

constexpr double kInvSqrt2Pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;

void check_bit(Bit b) { require(b == 1 || b == -1, "bit must be +1 or -1"); }

void check_pipeline(const CMat& S, const CVec& w, const CVec& r) {
    require(S.rows() == r.size(), "projection rows must match the received vector length");
    require(S.cols() == w.size(), "projection columns must match the filter length");
    require(S.cols() >= 1 && S.cols() <= S.rows(), "projection rank must satisfy 1 <= D <= M");
}

}  // namespace

CVec project(const CMat& S, const CVec& r) {
    require(S.rows() == r.size(), "project: dimension mismatch");
    return S.adjoint() * r;
}

Decision filter_and_decide(const CVec& w, const CVec& rbar) {
    require(w.size() == rbar.size(), "filter_and_decide: dimension mismatch");
    const cd x = w.dot(rbar);  // conjugates w
    const Bit b = hard_decision(x.real());
    return {make_statistic(x, b), b};
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double kernel_density(double x_tilde, double center, double norm_sq, double rho) {
    require(norm_sq > 0.0, "kernel_density: norm_sq must be > 0");
    require(rho > 0.0, "kernel_density: rho must be > 0");
    const double var = rho * rho * norm_sq;
    const double d = x_tilde - center;
    return kInvSqrt2Pi / std::sqrt(var) * std::exp(-d * d / (2.0 * var));
}

double error_probability(const DecisionStatistic& stat, double norm_sq, double rho) {
    require(norm_sq > 0.0, "error_probability: norm_sq must be > 0");
    require(rho > 0.0, "error_probability: rho must be > 0");
    return q_function(stat.signed_real / (rho * std::sqrt(norm_sq)));
}

double error_probability(const CMat& S, const CVec& w, const CVec& r, Bit b, double rho) {
    check_pipeline(S, w, r);
    check_bit(b);
    const CVec sw = S * w;
    const cd x = sw.dot(r);
    return error_probability(make_statistic(x, b), sw.squaredNorm(), rho);
}

double mber_gradient_weight(double re_x, double norm_sq, double rho, Bit b) {
    return -std::exp(-re_x * re_x / (2.0 * rho * rho * norm_sq)) * b * kInvSqrt2Pi / (2.0 * rho);
}

CVec gradient_w(const CMat& S, const CVec& w, const CVec& r, Bit b, double rho) {
    check_pipeline(S, w, r);
    check_bit(b);
    require(rho > 0.0, "gradient_w: rho must be > 0");
    const CVec sw = S * w;
    const double n = sw.squaredNorm();
    require(n > 0.0, "gradient_w: w^H S^H S w must be > 0");
    const double re_x = sw.dot(r).real();
    const double c = mber_gradient_weight(re_x, n, rho, b);
    const double root = std::sqrt(n);
    return c * (S.adjoint() * r / root - (re_x / (n * root)) * (S.adjoint() * sw));
}

CMat gradient_S(const CMat& S, const CVec& w, const CVec& r, Bit b, double rho) {
    check_pipeline(S, w, r);
    check_bit(b);
    require(rho > 0.0, "gradient_S: rho must be > 0");
    const CVec sw = S * w;
    const double n = sw.squaredNorm();
    require(n > 0.0, "gradient_S: w^H S^H S w must be > 0");
    const double re_x = sw.dot(r).real();
    const double c = mber_gradient_weight(re_x, n, rho, b);
    const double root = std::sqrt(n);
    return c * (r * w.adjoint() / root - (re_x / (n * root)) * (sw * w.adjoint()));
}

}  // namespace jiomber
