#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "jiomber/detector_core.hpp"
#include "jiomber/errors.hpp"
#include "oracles.hpp"

using namespace jiomber;

namespace {

struct Instance {
    CMat S;
    CVec w, r;
    Bit b;
    double rho;
};

Instance random_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> m_dist(2, 8);
    const int M = m_dist(rng);
    const int D = std::uniform_int_distribution<int>(1, std::min(4, M))(rng);
    Instance in;
    in.S = oracle::random_cmat(rng, M, D);
    in.w = oracle::random_cvec(rng, D);
    in.r = oracle::random_cvec(rng, M, 0.5);
    in.b = (rng() & 1) ? 1 : -1;
    in.rho = std::uniform_real_distribution<double>(0.5, 2.0)(rng);
    return in;
}

}  // namespace

TEST_CASE("filter_and_decide: unit filter, tie rule and summation oracle") {
    CVec w = CVec::Zero(3);
    w[0] = 1.0;
    CVec r(3);
    r << cd(2, 1), cd(-4, 0.5), cd(0, 3);
    auto d = filter_and_decide(w, r);
    CHECK(d.stat.x == cd(2, 1));
    CHECK(d.bit == 1);

    d = filter_and_decide(w, CVec::Zero(3));
    CHECK(d.stat.x == cd(0, 0));
    CHECK(d.bit == 1);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const CVec a = oracle::random_cvec(rng, 6), v = oracle::random_cvec(rng, 6);
        const auto dd = filter_and_decide(a, v);
        CHECK(std::abs(dd.stat.x - oracle::naive_inner(a, v)) < 1e-12);
        CHECK(dd.bit == (dd.stat.x.real() >= 0 ? 1 : -1));
    }
    CHECK_THROWS_AS(filter_and_decide(CVec::Zero(2), CVec::Zero(3)), ContractError);
}

TEST_CASE("project matches explicit loops") {
    std::mt19937_64 rng(11);
    const CMat S = oracle::random_cmat(rng, 7, 3);
    const CVec r = oracle::random_cvec(rng, 7);
    CHECK((project(S, r) - oracle::naive_project(S, r)).norm() < 1e-12);
    CHECK_THROWS_AS(project(S, CVec::Zero(6)), ContractError);
}

TEST_CASE("make_statistic carries sign(b) Re[x]") {
    CHECK(make_statistic(cd(0.3, 2.0), 1).signed_real == 0.3);
    CHECK(make_statistic(cd(0.3, 2.0), -1).signed_real == -0.3);
}

TEST_CASE("q_function reference values") {
    CHECK(q_function(0.0) == 0.5);
    CHECK(std::abs(q_function(1.0) - 0.15865525393145705) < 1e-15);
    CHECK(std::abs(q_function(-1.7) - (1.0 - q_function(1.7))) < 1e-15);
    CHECK(std::abs(q_function(1.7) - 0.044565462758543044) < 1e-15);
}

TEST_CASE("q_function against the high-precision series and reflection") {
    for (double x = -8.0; x <= 8.0; x += 0.125) {
        CAPTURE(x);
        CHECK(std::abs(q_function(x) - oracle::q_series(x)) <= 1e-12);
        CHECK(std::abs(q_function(x) + q_function(-x) - 1.0) <= 1e-12);
    }
    // the oracle itself against a known tail value
    CHECK(oracle::q_series(5.0) == doctest::Approx(2.866515718791939e-07).epsilon(1e-13));
}

TEST_CASE("kernel_density is the Gaussian with variance rho^2 norm_sq") {
    CHECK(kernel_density(0.4, 0.4, 1.0, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK(kernel_density(1.3, 1.0, 2.0, 0.7) == doctest::Approx(kernel_density(0.7, 1.0, 2.0, 0.7)).epsilon(1e-14));

    // trapezoidal quadrature over +-12 standard deviations
    const double center = -0.3, norm_sq = 1.7, rho = 0.4;
    const double sd = rho * std::sqrt(norm_sq);
    const int n = 20000;
    const double a = center - 12 * sd, h = 24 * sd / n;
    double integral = 0.0;
    for (int i = 0; i <= n; ++i) integral += (i == 0 || i == n ? 0.5 : 1.0) * kernel_density(a + i * h, center, norm_sq, rho);
    CHECK(std::abs(integral * h - 1.0) < 1e-6);

    CHECK_THROWS_AS(kernel_density(0, 0, 0.0, 1.0), ContractError);
    CHECK_THROWS_AS(kernel_density(0, 0, 1.0, 0.0), ContractError);
}

TEST_CASE("error_probability worked values and symmetries") {
    CHECK(error_probability(make_statistic(cd(0.0, 5.0), 1), 3.0, 0.2) == 0.5);
    const double rho = 0.35;
    CHECK(std::abs(error_probability(make_statistic(cd(rho, 0), 1), 1.0, rho) - 0.15865525393145705) < 1e-15);
    CHECK(error_probability(make_statistic(cd(0.7, 1), 1), 2.0, 0.5) ==
          error_probability(make_statistic(cd(-0.7, 1), -1), 2.0, 0.5));
    CHECK_THROWS_AS(error_probability(make_statistic(cd(1, 0), 1), 0.0, 1.0), ContractError);
    CHECK_THROWS_AS(error_probability(make_statistic(cd(1, 0), 1), 1.0, -1.0), ContractError);
}

TEST_CASE("error_probability is strictly decreasing in sign(b) Re[x]") {
    double prev = 1.0;
    for (double t = -6.0; t <= 6.0; t += 0.05) {
        const double p = error_probability(make_statistic(cd(t, 0.0), 1), 1.3, 0.9);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("pipeline error_probability matches the loop oracle and is scale invariant in w") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 100; ++t) {
        const auto in = random_instance(rng);
        const double p = error_probability(in.S, in.w, in.r, in.b, in.rho);
        CHECK(std::abs(p - oracle::naive_error_probability(in.S, in.w, in.r, in.b, in.rho)) < 1e-12);
        for (double c : {0.25, 3.0, 1024.0}) CHECK(std::abs(error_probability(in.S, c * in.w, in.r, in.b, in.rho) - p) < 1e-14);
    }
}

TEST_CASE("gradients match central finite differences on random instances") {
    std::mt19937_64 rng(2718);
    const double h = 1e-6;
    double worst_w = 0.0, worst_S = 0.0;
    for (int t = 0; t < 150; ++t) {
        const auto in = random_instance(rng);
        const CVec gw = gradient_w(in.S, in.w, in.r, in.b, in.rho);
        const CVec fw = oracle::fd_conj_gradient(
            [&](const CVec& w) { return error_probability(in.S, w, in.r, in.b, in.rho); }, in.w, h);
        worst_w = std::max(worst_w, oracle::rel_err(gw, fw));

        const CMat gS = gradient_S(in.S, in.w, in.r, in.b, in.rho);
        const CVec vecS = Eigen::Map<const CVec>(in.S.data(), in.S.size());
        const CVec fS = oracle::fd_conj_gradient(
            [&](const CVec& s) {
                const CMat S = Eigen::Map<const CMat>(s.data(), in.S.rows(), in.S.cols());
                return error_probability(S, in.w, in.r, in.b, in.rho);
            },
            vecS, h);
        worst_S = std::max(worst_S, oracle::rel_err(CVec(Eigen::Map<const CVec>(gS.data(), gS.size())), fS));
    }
    CHECK(worst_w <= 1e-6);
    CHECK(worst_S <= 1e-6);
}

TEST_CASE("gradients at zero output on a unit-norm state") {
    // S = [I; 0], w = e1, r orthogonal to e1 in the real part: Re[x] = 0.
    CMat S = CMat::Zero(4, 2);
    S(0, 0) = S(1, 1) = 1.0;
    CVec w = CVec::Zero(2);
    w[0] = 1.0;
    CVec r(4);
    r << cd(0, 0.8), cd(0.5, -0.2), cd(1, 1), cd(-0.3, 0);
    const double rho = 0.6;
    for (Bit b : {1, -1}) {
        const double k = -b / (2.0 * std::sqrt(2.0 * std::numbers::pi) * rho);
        CHECK((gradient_w(S, w, r, b, rho) - k * S.adjoint() * r).norm() < 1e-15);
        CHECK((gradient_S(S, w, r, b, rho) - k * r * w.adjoint()).norm() < 1e-15);
    }
}

TEST_CASE("gradients are invariant under joint negation of b and r") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 50; ++t) {
        const auto in = random_instance(rng);
        CHECK((gradient_w(in.S, in.w, in.r, in.b, in.rho) - gradient_w(in.S, in.w, -in.r, -in.b, in.rho)).norm() < 1e-15);
        CHECK((gradient_S(in.S, in.w, in.r, in.b, in.rho) - gradient_S(in.S, in.w, -in.r, -in.b, in.rho)).norm() < 1e-15);
    }
}

TEST_CASE("w is orthogonal to the w-gradient (scale invariance)") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const auto in = random_instance(rng);
        const CVec g = gradient_w(in.S, in.w, in.r, in.b, in.rho);
        CHECK(std::abs(in.w.dot(g).real()) < 1e-12 * (1.0 + g.norm() * in.w.norm()));
    }
}

TEST_CASE("a small step against the gradient lowers the error probability") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        const auto in = random_instance(rng);
        const double before = error_probability(in.S, in.w, in.r, in.b, in.rho);
        const CVec w1 = in.w - 1e-4 * gradient_w(in.S, in.w, in.r, in.b, in.rho);
        const CMat S1 = in.S - 1e-4 * gradient_S(in.S, in.w, in.r, in.b, in.rho);
        CHECK(error_probability(in.S, w1, in.r, in.b, in.rho) <= before);
        CHECK(error_probability(S1, in.w, in.r, in.b, in.rho) <= before);
    }
}

TEST_CASE("gradient preconditions") {
    const CMat S = CMat::Identity(3, 2);
    const CVec r = CVec::Ones(3);
    CHECK_THROWS_AS(gradient_w(S, CVec::Zero(2), r, 1, 1.0), ContractError);
    CHECK_THROWS_AS(gradient_S(S, CVec::Zero(2), r, 1, 1.0), ContractError);
    CHECK_THROWS_AS(gradient_w(S, CVec::Ones(2), r, 1, 0.0), ContractError);
    CHECK_THROWS_AS(gradient_w(S, CVec::Ones(3), r, 1, 1.0), ContractError);
    CHECK_THROWS_AS(gradient_w(S, CVec::Ones(2), r, 0, 1.0), ContractError);
}

TEST_CASE("mber_gradient_weight formula") {
    const double w = mber_gradient_weight(0.4, 1.5, 0.8, -1);
    const double expected = std::exp(-0.16 / (2 * 0.64 * 1.5)) / (2 * std::sqrt(2 * std::numbers::pi) * 0.8);
    CHECK(w == doctest::Approx(expected).epsilon(1e-14));
}
