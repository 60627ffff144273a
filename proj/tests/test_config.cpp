#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "jiomber/config.hpp"
#include "jiomber/errors.hpp"

using namespace jiomber;

namespace {

std::size_t parse_error_line(const std::string& text) {
    try {
        parse_config_string(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    FAIL("expected a parse error for: " << text);
    return 0;
}

}  // namespace

TEST_CASE("empty config gives the reference defaults") {
    const auto cfg = parse_config_string("");
    CHECK(cfg == ExperimentConfig{});
    CHECK(cfg.N == 31);
    CHECK(cfg.K == 5);
    CHECK(cfg.Lp == 3);
    CHECK(cfg.power_profile_db == std::vector<double>{0.0, -7.0, -10.0});
    CHECK(cfg.doppler == 5e-5);
    CHECK(cfg.tr_symbols == 250);
    CHECK(cfg.dd_symbols == 1500);
    CHECK(cfg.D_min == 3);
    CHECK(cfg.D_max == 20);
    CHECK(cfg.D == 8);
    CHECK(cfg.J == 5);
    CHECK(cfg.mu_w == 0.005);
    CHECK(cfg.mu_S == 0.005);
    CHECK(cfg.window_length() == 33);
    CHECK(cfg.rho() == doctest::Approx(2.0 * cfg.sigma()));
    CHECK(cfg.sigma() == doctest::Approx(std::pow(10.0, -0.75)));
    CHECK(cfg.detectors.size() == 4);
}

TEST_CASE("comments, whitespace, BOM and lists") {
    const auto cfg = parse_config_string(
        "\xEF\xBB\xBF# header comment\n"
        "  K = 3   # trailing comment\r\n"
        "\n"
        "snr_sweep = 1, 2.5 ,4\n"
        "detectors = FullRankLMS,JIO_MBER_auto\n"
        "amplitudes=1,0.5,0.5\n"
        "rank_reference = candidate\n");
    CHECK(cfg.K == 3);
    CHECK(cfg.snr_sweep == std::vector<double>{1.0, 2.5, 4.0});
    CHECK(cfg.detectors == std::vector<DetectorKind>{DetectorKind::FullRankLMS, DetectorKind::JIO_MBER_auto});
    CHECK(cfg.amplitudes == std::vector<double>{1.0, 0.5, 0.5});
    CHECK(cfg.rank_reference == RankReference::CandidateDecision);
}

TEST_CASE("infinite SNR means noiseless and uses the rho floor") {
    const auto cfg = parse_config_string("snr_db = inf\nrho_floor = 0.01\n");
    CHECK(std::isinf(cfg.snr_db));
    CHECK(cfg.sigma() == 0.0);
    CHECK(cfg.rho() == 0.01);
}

TEST_CASE("sigma follows the first amplitude") {
    ExperimentConfig cfg;
    cfg.amplitudes = {2.0, 1.0};
    cfg.snr_db = 20.0;
    CHECK(cfg.sigma() == doctest::Approx(0.2));
}

TEST_CASE("parse errors carry the line number") {
    CHECK(parse_error_line("K = 3\nJ = 0\n") == 2);
    CHECK(parse_error_line("\n\nbogus = 1\n") == 3);
    CHECK(parse_error_line("K = 3\nK = 4\n") == 2);
    CHECK(parse_error_line("# c\nK 3\n") == 2);
    CHECK(parse_error_line("= 3\n") == 1);
    CHECK(parse_error_line("K = three\n") == 1);
    CHECK(parse_error_line("mu_w = 0.1x\n") == 1);
    CHECK(parse_error_line("snr_sweep = 1,,2\n") == 1);
    CHECK(parse_error_line("detectors = RLS\n") == 1);
    CHECK(parse_error_line("rank_reference = best\n") == 1);
    CHECK(parse_error_line("doppler = nan\n") == 1);
    // invariant violations point at the line that set the offending key
    CHECK(parse_error_line("K = 2\nLp = 2\npower_profile_db = 0\n") == 3);
    CHECK(parse_error_line("N = 7\nusers_sweep = 1, 2\nrank_sweep = 2\n# x\nD_max = 20\n") == 5);
    CHECK(parse_error_line("D_min = 9\nD_max = 8\n") == 1);
    CHECK(parse_error_line("N = 15\n") == 1);
    CHECK(parse_error_line("final_window = 5000\n") == 1);
    CHECK(parse_error_line("rank_forgetting = 1\n") == 1);
    CHECK(parse_error_line("detectors =\n") == 1);
}

TEST_CASE("violating an invariant left at its default reports line 0") {
    // the default profile has three taps; changing Lp alone invalidates it
    try {
        parse_config_string("Lp = 2\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 0);
        CHECK(std::string(e.what()).find("power_profile_db") != std::string::npos);
    }
}

TEST_CASE("parse errors are configuration errors") {
    CHECK_THROWS_AS(parse_config_string("J = 0"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::filesystem::path("/nonexistent/cfg.txt")), ConfigError);
}

TEST_CASE("validate names the offending key") {
    ExperimentConfig cfg;
    cfg.mu_S = 0.0;
    try {
        validate(cfg);
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).rfind("mu_S", 0) == 0);
    }
    cfg = {};
    cfg.K = 34;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.amplitudes = {1.0, -1.0};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.users_sweep = {1, 40};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("emit and re-parse round-trips the defaults and random configs") {
    CHECK(parse_config_string(emit_config(ExperimentConfig{})) == ExperimentConfig{});

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        ExperimentConfig cfg;
        cfg.N = 127;
        cfg.K = 1 + static_cast<int>(rng() % 20);
        cfg.Lp = 1 + static_cast<int>(rng() % 4);
        cfg.power_profile_db.clear();
        for (int l = 0; l < cfg.Lp; ++l) cfg.power_profile_db.push_back(-20.0 * u(rng));
        cfg.doppler = u(rng) * 1e-3;
        cfg.snr_db = (t % 10 == 0) ? std::numeric_limits<double>::infinity() : 30.0 * u(rng) - 5.0;
        cfg.amplitudes = {0.1 + u(rng), 0.1 + u(rng)};
        cfg.snr_sweep = {u(rng), 1.0 / 3.0, 1e-17};
        cfg.mu_w = u(rng) * 0.01 + 1e-9;
        cfg.mu_S = 1.0 / 7.0;
        cfg.rho_multiplier = 0.5 + u(rng);
        cfg.rank_forgetting = 0.99 * u(rng);
        cfg.rank_reference = (t % 2) ? RankReference::CandidateDecision : RankReference::FullRankDecision;
        cfg.base_seed = rng();
        cfg.detectors = {DetectorKind::FullRankMBER, DetectorKind::JIO_MBER_fixed};
        cfg.D = 1 + static_cast<int>(rng() % 30);
        REQUIRE_NOTHROW(validate(cfg));
        const auto text = emit_config(cfg);
        CHECK(parse_config_string(text) == cfg);
    }
}

TEST_CASE("config_entries lists every key once in canonical order") {
    const auto entries = config_entries(ExperimentConfig{});
    CHECK(entries.front().first == "N");
    std::set<std::string> keys;
    for (const auto& [k, v] : entries) {
        CHECK(keys.insert(k).second);
        ExperimentConfig c;
        CHECK_NOTHROW(set_config_value(c, k, v));
    }
    CHECK(keys.count("rank_reference") == 1);
    ExperimentConfig c;
    CHECK_THROWS_AS(set_config_value(c, "nope", "1"), ConfigError);
}

TEST_CASE("parse_config reads files") {
    const auto path = std::filesystem::temp_directory_path() / "jiomber_cfg_test.txt";
    {
        std::ofstream f(path);
        f << "K = 2\nnum_trials = 3\n";
    }
    const auto cfg = parse_config(path);
    CHECK(cfg.K == 2);
    CHECK(cfg.num_trials == 3);
    std::filesystem::remove(path);
}

TEST_CASE("detector names round-trip") {
    for (auto d : {DetectorKind::JIO_MBER_fixed, DetectorKind::JIO_MBER_auto, DetectorKind::FullRankLMS,
                   DetectorKind::FullRankMBER})
        CHECK(detector_from_string(to_string(d)) == d);
    CHECK_THROWS_AS(detector_from_string("x"), ConfigError);
}
