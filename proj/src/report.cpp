#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "jiomber/errors.hpp"
#include "jiomber/harness.hpp"

#ifndef JIOMBER_VERSION
#define JIOMBER_VERSION "0.1.0"
#endif

namespace jiomber {

namespace {

std::string g6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

template <typename Result>
void write_file(const Result& result, const std::filesystem::path& path,
                void (*writer)(std::ostream&, const Result&)) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    writer(out, result);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : config_entries(cfg)) j[k] = v;
    return j;
}

}  // namespace

std::string version_string() { return JIOMBER_VERSION; }

void write_trace_csv(std::ostream& out, const ExperimentResult& result) {
    out << "symbol_index,detector,ber\r\n";
    for (const auto& d : result.detectors) {
        const auto trace = smooth_trace(d.ber_trace, result.config.smoothing_window);
        for (std::size_t i = 0; i < trace.size(); ++i)
            out << i << ',' << to_string(d.kind) << ',' << g6(trace[i]) << "\r\n";
    }
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "axis_value,detector,ber,stderr\r\n";
    for (const auto& r : result.rows)
        out << g6(r.axis_value) << ',' << to_string(r.detector) << ',' << g6(r.ber) << ','
            << g6(r.stderr_) << "\r\n";
}

void emit_csv(const ExperimentResult& result, const std::filesystem::path& path) {
    write_file(result, path, &write_trace_csv);
}

void emit_csv(const SweepResult& result, const std::filesystem::path& path) {
    write_file(result, path, &write_sweep_csv);
}

std::string metadata_json(const ExperimentResult& result) {
    nlohmann::ordered_json j;
    j["kind"] = "run";
    j["version"] = version_string();
    j["config"] = config_json(result.config);
    j["base_seed"] = result.config.base_seed;
    j["trial_seeds"] = result.trial_seeds;
    j["wall_time_seconds"] = result.wall_seconds;
    auto& dets = j["detectors"] = nlohmann::ordered_json::array();
    for (const auto& d : result.detectors) {
        nlohmann::ordered_json e;
        e["detector"] = std::string(to_string(d.kind));
        e["final_ber"] = d.final_ber;
        e["final_stderr"] = d.final_stderr;
        if (d.kind == DetectorKind::JIO_MBER_auto) e["selected_rank_range"] = {d.min_rank, d.max_rank};
        dets.push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

std::string metadata_json(const SweepResult& result) {
    nlohmann::ordered_json j;
    j["kind"] = "sweep";
    j["axis"] = std::string(to_string(result.axis));
    j["version"] = version_string();
    j["config"] = config_json(result.config);
    j["base_seed"] = result.config.base_seed;
    std::vector<std::uint64_t> seeds;
    for (int t = 0; t < result.config.num_trials; ++t) seeds.push_back(result.config.base_seed + static_cast<std::uint64_t>(t));
    j["trial_seeds"] = seeds;
    j["wall_time_seconds"] = result.wall_seconds;
    return j.dump(2) + "\n";
}

void write_metadata(const std::string& json, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << json;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace jiomber
