#include "jiomber/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "jiomber/errors.hpp"

namespace jiomber {

namespace {

constexpr struct {
    DetectorKind kind;
    std::string_view name;
} kDetectorNames[] = {
    {DetectorKind::JIO_MBER_fixed, "JIO_MBER_fixed"},
    {DetectorKind::JIO_MBER_auto, "JIO_MBER_auto"},
    {DetectorKind::FullRankLMS, "FullRankLMS"},
    {DetectorKind::FullRankMBER, "FullRankMBER"},
};

// Carries the key so the parser can report the line that set it.
class FieldError : public ConfigError {
public:
    FieldError(std::string key, const std::string& what)
        : ConfigError(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) out.push_back(trim(item));
    if (!v.empty() && v.back() == ',') out.emplace_back();
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc{} || p != end || v.empty() || std::isnan(x))
        throw FieldError(key, "expected a number, got '" + v + "'");
    return x;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& v) {
    Int x{};
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, x);
    if (ec != std::errc{} || p != end || v.empty())
        throw FieldError(key, "expected an integer, got '" + v + "'");
    return x;
}

std::string fmt_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F&& f) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += f(v[i]);
    }
    return out;
}

struct Field {
    std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field int_field(T ExperimentConfig::*m) {
    return {[m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = to_int<T>(k, v); },
            [m](const ExperimentConfig& c) { return std::to_string(c.*m); }};
}

Field double_field(double ExperimentConfig::*m) {
    return {[m](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*m = to_double(k, v); },
            [m](const ExperimentConfig& c) { return fmt_double(c.*m); }};
}

Field double_list(std::vector<double> ExperimentConfig::*m) {
    return {[m](ExperimentConfig& c, const std::string& k, const std::string& v) {
                std::vector<double> out;
                if (!v.empty())
                    for (const auto& item : split_list(v)) out.push_back(to_double(k, item));
                c.*m = std::move(out);
            },
            [m](const ExperimentConfig& c) { return join(c.*m, fmt_double); }};
}

Field int_list(std::vector<int> ExperimentConfig::*m) {
    return {[m](ExperimentConfig& c, const std::string& k, const std::string& v) {
                std::vector<int> out;
                if (!v.empty())
                    for (const auto& item : split_list(v)) out.push_back(to_int<int>(k, item));
                c.*m = std::move(out);
            },
            [m](const ExperimentConfig& c) { return join(c.*m, [](int x) { return std::to_string(x); }); }};
}

// Canonical key order, also the emission order.
const std::vector<std::pair<std::string, Field>>& fields() {
    using C = ExperimentConfig;
    static const std::vector<std::pair<std::string, Field>> f = {
        {"N", int_field(&C::N)},
        {"K", int_field(&C::K)},
        {"Lp", int_field(&C::Lp)},
        {"power_profile_db", double_list(&C::power_profile_db)},
        {"doppler", double_field(&C::doppler)},
        {"snr_db", double_field(&C::snr_db)},
        {"amplitudes", double_list(&C::amplitudes)},
        {"snr_sweep", double_list(&C::snr_sweep)},
        {"users_sweep", int_list(&C::users_sweep)},
        {"rank_sweep", int_list(&C::rank_sweep)},
        {"D", int_field(&C::D)},
        {"D_min", int_field(&C::D_min)},
        {"D_max", int_field(&C::D_max)},
        {"J", int_field(&C::J)},
        {"mu_w", double_field(&C::mu_w)},
        {"mu_S", double_field(&C::mu_S)},
        {"mu_lms", double_field(&C::mu_lms)},
        {"mu_mber", double_field(&C::mu_mber)},
        {"rho_multiplier", double_field(&C::rho_multiplier)},
        {"rho_floor", double_field(&C::rho_floor)},
        {"rank_forgetting", double_field(&C::rank_forgetting)},
        {"rank_reference",
         {[](C& c, const std::string& k, const std::string& v) {
              if (v == "full")
                  c.rank_reference = RankReference::FullRankDecision;
              else if (v == "candidate")
                  c.rank_reference = RankReference::CandidateDecision;
              else
                  throw FieldError(k, "expected 'full' or 'candidate', got '" + v + "'");
          },
          [](const C& c) {
              return std::string(c.rank_reference == RankReference::FullRankDecision ? "full" : "candidate");
          }}},
        {"tr_symbols", int_field(&C::tr_symbols)},
        {"dd_symbols", int_field(&C::dd_symbols)},
        {"final_window", int_field(&C::final_window)},
        {"smoothing_window", int_field(&C::smoothing_window)},
        {"num_trials", int_field(&C::num_trials)},
        {"base_seed", int_field(&C::base_seed)},
        {"threads", int_field(&C::threads)},
        {"detectors",
         {[](C& c, const std::string& k, const std::string& v) {
              std::vector<DetectorKind> out;
              for (const auto& item : split_list(v)) {
                  try {
                      out.push_back(detector_from_string(item));
                  } catch (const ConfigError& e) {
                      throw FieldError(k, e.what());
                  }
              }
              c.detectors = std::move(out);
          },
          [](const C& c) { return join(c.detectors, [](DetectorKind d) { return std::string(to_string(d)); }); }}},
    };
    return f;
}

const Field* find_field(const std::string& key) {
    for (const auto& [k, f] : fields())
        if (k == key) return &f;
    return nullptr;
}

void check(bool ok, const char* key, const std::string& what) {
    if (!ok) throw FieldError(key, what);
}

}  // namespace

std::string_view to_string(DetectorKind d) {
    for (const auto& n : kDetectorNames)
        if (n.kind == d) return n.name;
    return "unknown";
}

DetectorKind detector_from_string(std::string_view name) {
    for (const auto& n : kDetectorNames)
        if (n.name == name) return n.kind;
    throw ConfigError("unknown detector '" + std::string(name) + "'");
}

double ExperimentConfig::sigma() const {
    const double a1 = amplitudes.empty() ? 1.0 : amplitudes.front();
    return a1 / std::pow(10.0, snr_db / 20.0);
}

double ExperimentConfig::rho() const { return std::max(rho_multiplier * sigma(), rho_floor); }

void validate(const ExperimentConfig& c) {
    check(c.N == 7 || c.N == 31 || c.N == 127, "N", "spreading gain must be 7, 31 or 127 (Gold codes)");
    check(c.K >= 1 && c.K <= c.N + 2, "K", "number of users must be in [1, N + 2]");
    check(c.Lp >= 1 && c.Lp <= c.N, "Lp", "number of paths must be in [1, N]");
    check(static_cast<int>(c.power_profile_db.size()) == c.Lp, "power_profile_db",
          "needs exactly Lp entries");
    for (double p : c.power_profile_db) check(std::isfinite(p), "power_profile_db", "entries must be finite");
    check(std::isfinite(c.doppler) && c.doppler >= 0.0, "doppler", "must be finite and >= 0");
    check(!std::isnan(c.snr_db) && c.snr_db > -std::numeric_limits<double>::infinity(), "snr_db",
          "must be a number or inf");
    for (double a : c.amplitudes) check(std::isfinite(a) && a > 0.0, "amplitudes", "entries must be > 0");
    for (double s : c.snr_sweep) check(!std::isnan(s) && s > -std::numeric_limits<double>::infinity(), "snr_sweep", "entries must be numbers");
    for (int k : c.users_sweep) check(k >= 1 && k <= c.N + 2, "users_sweep", "entries must be in [1, N + 2]");

    const int M = c.window_length();
    for (int d : c.rank_sweep) check(d >= 1 && d <= M, "rank_sweep", "entries must be in [1, M]");
    check(c.D >= 1 && c.D <= M, "D", "rank must be in [1, M]");
    check(c.D_min >= 1 && c.D_min <= c.D_max, "D_min", "must satisfy 1 <= D_min <= D_max");
    check(c.D_max <= M, "D_max", "must not exceed M = N + Lp - 1");
    check(c.J >= 1, "J", "must be >= 1");
    check(c.mu_w > 0.0 && std::isfinite(c.mu_w), "mu_w", "must be > 0");
    check(c.mu_S > 0.0 && std::isfinite(c.mu_S), "mu_S", "must be > 0");
    check(c.mu_lms > 0.0 && std::isfinite(c.mu_lms), "mu_lms", "must be > 0");
    check(c.mu_mber > 0.0 && std::isfinite(c.mu_mber), "mu_mber", "must be > 0");
    check(c.rho_multiplier > 0.0 && std::isfinite(c.rho_multiplier), "rho_multiplier", "must be > 0");
    check(c.rho_floor > 0.0 && std::isfinite(c.rho_floor), "rho_floor", "must be > 0");
    check(c.rank_forgetting >= 0.0 && c.rank_forgetting < 1.0, "rank_forgetting", "must be in [0, 1)");
    check(c.tr_symbols >= 1, "tr_symbols", "must be >= 1");
    check(c.dd_symbols >= 1, "dd_symbols", "must be >= 1");
    check(c.final_window >= 1 && c.final_window <= c.total_symbols(), "final_window",
          "must be in [1, tr_symbols + dd_symbols]");
    check(c.smoothing_window >= 0, "smoothing_window", "must be >= 0");
    check(c.num_trials >= 1, "num_trials", "must be >= 1");
    check(c.threads >= 0, "threads", "must be >= 0");
    check(!c.detectors.empty(), "detectors", "list must not be empty");
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    const Field* f = find_field(key);
    if (!f) throw ConfigError("unknown key '" + key + "'");
    f->set(cfg, key, value);
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::map<std::string, std::size_t> seen;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "missing key");

        const Field* f = find_field(key);
        if (!f) throw ParseError(line_no, "unknown key '" + key + "'");
        if (seen.count(key)) throw ParseError(line_no, "duplicate key '" + key + "'");
        seen[key] = line_no;
        try {
            f->set(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    try {
        validate(cfg);
    } catch (const FieldError& e) {
        const auto it = seen.find(e.key());
        throw ParseError(it == seen.end() ? 0 : it->second, e.what());
    }
    return cfg;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    return parse_config(in);
}

ExperimentConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& [k, f] : fields()) out.emplace_back(k, f.get(cfg));
    return out;
}

std::string emit_config(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [k, v] : config_entries(cfg)) out += k + " = " + v + "\n";
    return out;
}

}  // namespace jiomber
