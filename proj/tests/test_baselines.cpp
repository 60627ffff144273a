#include <doctest.h>

#include <cstring>
#include <random>

#include "jiomber/baselines.hpp"
#include "jiomber/detector_core.hpp"
#include "jiomber/errors.hpp"
#include "jiomber/signal_model.hpp"
#include "oracles.hpp"

using namespace jiomber;

namespace {

bool bitwise_equal(const CVec& a, const CVec& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), sizeof(cd) * static_cast<std::size_t>(a.size())) == 0;
}

FullRankState random_full_rank(std::mt19937_64& rng, int M) {
    auto s = init_full_rank(M, std::uniform_real_distribution<double>(0.001, 0.2)(rng),
                            std::uniform_real_distribution<double>(0.2, 2.0)(rng));
    s.w = oracle::random_cvec(rng, M);
    s.w.normalize();
    return s;
}

JioState as_identity_jio(const FullRankState& f) {
    const int M = static_cast<int>(f.w.size());
    JioState s = init_state(M, M, f.mu, 0.0, 1, f.rho);
    s.w = f.w;
    return s;
}

}  // namespace

TEST_CASE("init_full_rank validation and zero start") {
    const auto s = init_full_rank(5, 0.1, 0.3);
    CHECK(s.w == CVec::Zero(5));
    CHECK(s.mode == Mode::Training);
    CHECK_THROWS_AS(init_full_rank(0, 0.1), ConfigError);
    CHECK_THROWS_AS(init_full_rank(3, 0.0), ConfigError);
    CHECK_THROWS_AS(init_full_rank(3, 0.1, 0.0), ConfigError);
}

TEST_CASE("full_rank_decide uses the tie rule") {
    auto s = init_full_rank(3, 0.1);
    CHECK(full_rank_decide(s, CVec::Ones(3)) == 1);
    s.w = CVec::Ones(3);
    CHECK(full_rank_decide(s, -CVec::Ones(3)) == -1);
    CHECK_THROWS_AS(full_rank_decide(s, CVec::Ones(2)), ContractError);
}

TEST_CASE("lms_update follows w + mu e* r") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 30; ++t) {
        auto s = random_full_rank(rng, 6);
        const CVec r = oracle::random_cvec(rng, 6);
        const Bit b = (t % 2) ? 1 : -1;
        const cd e = double(b) - oracle::naive_inner(s.w, r);
        const CVec expected = s.w + s.mu * std::conj(e) * r;
        lms_update(s, r, b);
        CHECK((s.w - expected).norm() < 1e-14);
    }
}

TEST_CASE("full-rank MBER equals the JIO filter update with S = I bit for bit") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        const int M = std::uniform_int_distribution<int>(1, 40)(rng);
        auto f = random_full_rank(rng, M);
        const CVec r = oracle::random_cvec(rng, M, 0.5);
        const Bit b = (rng() & 1) ? 1 : -1;
        JioState j = as_identity_jio(f);
        CHECK(bitwise_equal(mber_full_rank_direction(f, r, b), update_filter(j, r, b)));

        mber_full_rank_update(f, r, b);
        jio_cycle(j, r, b);
        CHECK(bitwise_equal(f.w, j.w));
    }
}

TEST_CASE("full-rank MBER keeps unit norm and handles the zero start") {
    std::mt19937_64 rng(3);
    auto f = init_full_rank(7, 0.05, 0.4);
    for (int t = 0; t < 100; ++t) {
        mber_full_rank_update(f, oracle::random_cvec(rng, 7), (t % 3) ? 1 : -1);
        CHECK(std::abs(f.w.squaredNorm() - 1.0) < 1e-12);
    }
    auto z = init_full_rank(3, 0.05, 0.4);
    mber_full_rank_update(z, CVec::Zero(3), 1);
    CHECK(z.w == CVec::Zero(3));
    CHECK_THROWS_AS(mber_full_rank_update(z, CVec::Zero(3), 0), ContractError);
}

TEST_CASE("full-rank MBER with zero step only rescales") {
    std::mt19937_64 rng(4);
    auto f = random_full_rank(rng, 5);
    f.mu = 0.0;
    const CVec before = f.w;
    mber_full_rank_update(f, oracle::random_cvec(rng, 5), 1);
    CHECK((f.w - before).norm() < 1e-15);
}

TEST_CASE("full-rank MBER descends the error estimate for a tiny step") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        const int M = std::uniform_int_distribution<int>(2, 10)(rng);
        auto f = random_full_rank(rng, M);
        f.mu = 1e-6;
        const CVec r = oracle::random_cvec(rng, M);
        const Bit b = (rng() & 1) ? 1 : -1;
        const CMat I = CMat::Identity(M, M);
        const double before = error_probability(I, f.w, r, b, f.rho);
        mber_full_rank_update(f, r, b);
        CHECK(error_probability(I, f.w, r, b, f.rho) <= before + 1e-15);
    }
}

TEST_CASE("step functions decide before adapting and follow the mode") {
    std::mt19937_64 rng(6);
    for (auto step : {&lms_step, &mber_full_rank_step}) {
        auto s = random_full_rank(rng, 6);
        auto manual = s;
        const CVec r = oracle::random_cvec(rng, 6);
        const Bit d = full_rank_decide(s, r);
        const Bit known = -d;
        CHECK(step(s, r, known) == d);
        if (step == &lms_step) lms_update(manual, r, known);
        else mber_full_rank_update(manual, r, known);
        CHECK(s.w == manual.w);

        s.mode = manual.mode = Mode::DecisionDirected;
        const Bit d2 = full_rank_decide(s, r);
        CHECK(step(s, r, std::nullopt) == d2);
        if (step == &lms_step) lms_update(manual, r, d2);
        else mber_full_rank_update(manual, r, d2);
        CHECK(s.w == manual.w);

        auto t = init_full_rank(6, 0.1);
        CHECK_THROWS_AS(step(t, r, std::nullopt), ContractError);
    }
}

TEST_CASE("LMS converges to the Wiener filter on a stationary two-user toy") {
    SpreadingCode c1, c2;
    c1.chips = RVec(4);
    c1.chips << 0.5, 0.5, -0.5, 0.5;
    c2.chips = RVec(4);
    c2.chips << 0.5, -0.5, 0.5, 0.5;
    c2.user_id = 1;
    const cd h1(0.8, 0.3), h2(-0.4, 0.9);
    const double A1 = 1.0, A2 = 0.8, sigma = 0.1;
    std::vector<UserConfig> users{{A1, c1, ChannelState::fixed({h1})}, {A2, c2, ChannelState::fixed({h2})}};

    const CVec v1 = h1 * c1.chips.cast<cd>(), v2 = h2 * c2.chips.cast<cd>();
    const CMat R = A1 * A1 * v1 * v1.adjoint() + A2 * A2 * v2 * v2.adjoint() + sigma * sigma * CMat::Identity(4, 4);
    const CVec wiener = R.ldlt().solve(A1 * v1);
    auto mse = [&](const CVec& w) { return (1.0 - 2.0 * A1 * w.dot(v1).real() + w.dot(R * w).real()); };
    const double mmse = mse(wiener);

    StreamSynthesizer gen(users, sigma, 77);
    auto s = init_full_rank(4, 0.01);
    std::vector<double> excess;
    for (int i = 0; i < 10000; ++i) {
        const auto sample = gen.next();
        lms_step(s, sample.r, sample.true_bits[0]);
        excess.push_back(mse(s.w) - mmse);
    }
    auto block = [&](int from, int to) {
        double a = 0.0;
        for (int i = from; i < to; ++i) a += excess[static_cast<std::size_t>(i)];
        return a / (to - from);
    };
    // time constant about 1 / (mu * lambda_min of the signal subspace) ~ 200 symbols
    CHECK(block(0, 100) > block(100, 200));
    CHECK(block(100, 200) > block(200, 400));
    CHECK(block(200, 400) > block(400, 800));
    CHECK(block(5000, 10000) < 0.05 * block(0, 100));
    CHECK((s.w - wiener).norm() / wiener.norm() < 0.1);
}
