#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jiomber/jiomber.hpp"

namespace py = pybind11;
using namespace jiomber;

namespace {

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
    return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<std::uint8_t> to_matrix(const std::vector<std::vector<std::uint8_t>>& rows) {
    const auto n = static_cast<py::ssize_t>(rows.size());
    const auto m = rows.empty() ? py::ssize_t{0} : static_cast<py::ssize_t>(rows.front().size());
    py::array_t<std::uint8_t> a({n, m});
    auto v = a.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < n; ++i)
        for (py::ssize_t j = 0; j < m; ++j) v(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return a;
}

ExperimentConfig config_from_kwargs(const py::kwargs& kw) {
    ExperimentConfig cfg;
    for (const auto& item : kw) {
        const auto key = py::str(item.first).cast<std::string>();
        std::string value;
        if (py::isinstance<py::list>(item.second) || py::isinstance<py::tuple>(item.second)) {
            for (const auto& x : item.second) {
                if (!value.empty()) value += ",";
                value += py::str(x).cast<std::string>();
            }
        } else {
            value = py::str(item.second).cast<std::string>();
        }
        set_config_value(cfg, key, value);
    }
    validate(cfg);
    return cfg;
}

py::dict summary_dict(const DetectorSummary& s) {
    py::dict d;
    d["ber_trace"] = to_array(s.ber_trace);
    d["trial_final_ber"] = to_array(s.trial_final_ber);
    d["final_ber"] = s.final_ber;
    d["final_stderr"] = s.final_stderr;
    if (s.kind == DetectorKind::JIO_MBER_auto) d["rank_range"] = py::make_tuple(s.min_rank, s.max_rank);
    return d;
}

}  // namespace

PYBIND11_MODULE(_jiomber, m) {
    m.doc() = "JIO-MBER reduced-rank multiuser detection core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);

    // signal model
    py::class_<SpreadingCode>(m, "SpreadingCode")
        .def_readonly("chips", &SpreadingCode::chips)
        .def_readonly("user_id", &SpreadingCode::user_id);
    m.def("generate_gold_family", &generate_gold_family, py::arg("degree"));
    m.def("build_convolution_matrix",
          [](const RVec& chips, int lp) { return build_convolution_matrix({chips, 0}, lp); },
          py::arg("chips"), py::arg("num_paths"));

    py::class_<ChannelState>(m, "ChannelState")
        .def(py::init<std::vector<double>, double, std::uint64_t>(), py::arg("power_profile_db"),
             py::arg("normalized_doppler"), py::arg("seed"))
        .def_static("fixed", &ChannelState::fixed, py::arg("taps"))
        .def_property_readonly("taps", &ChannelState::taps)
        .def("tap_powers", &ChannelState::tap_powers)
        .def("step", [](ChannelState& s) { return s.step(); });

    py::class_<UserConfig>(m, "UserConfig")
        .def(py::init([](double amplitude, const SpreadingCode& code, const ChannelState& channel) {
                 return UserConfig{amplitude, code, channel};
             }),
             py::arg("amplitude"), py::arg("code"), py::arg("channel"));

    m.def(
        "synthesize_stream",
        [](std::vector<UserConfig> users, std::int64_t n, double sigma, std::uint64_t seed, int sg, int lp) {
            const auto samples = synthesize_stream(std::move(users), n, sigma, seed, sg, lp);
            CMat r(samples.empty() ? 0 : samples.front().r.size(), static_cast<Eigen::Index>(samples.size()));
            std::vector<std::vector<Bit>> bits;
            for (std::size_t i = 0; i < samples.size(); ++i) {
                r.col(static_cast<Eigen::Index>(i)) = samples[i].r;
                bits.push_back(samples[i].true_bits);
            }
            return py::make_tuple(r, bits);
        },
        py::arg("users"), py::arg("num_symbols"), py::arg("sigma"), py::arg("seed"),
        py::arg("spreading_gain") = 0, py::arg("num_paths") = 0,
        "Returns (R, bits): R is M x num_symbols, bits[i] the users' bits of symbol i.");

    // detector core
    m.def("project", &project, py::arg("S"), py::arg("r"));
    m.def("filter_and_decide", [](const CVec& w, const CVec& rbar) {
        const auto d = filter_and_decide(w, rbar);
        return py::make_tuple(d.stat.x, d.bit);
    });
    m.def("q_function", &q_function, py::arg("x"));
    m.def("kernel_density", &kernel_density, py::arg("x_tilde"), py::arg("center"), py::arg("norm_sq"),
          py::arg("rho"));
    m.def("error_probability",
          py::overload_cast<const CMat&, const CVec&, const CVec&, Bit, double>(&error_probability),
          py::arg("S"), py::arg("w"), py::arg("r"), py::arg("b"), py::arg("rho"));
    m.def("gradient_w", &gradient_w, py::arg("S"), py::arg("w"), py::arg("r"), py::arg("b"), py::arg("rho"));
    m.def("gradient_S", &gradient_S, py::arg("S"), py::arg("w"), py::arg("r"), py::arg("b"), py::arg("rho"));

    // JIO-MBER
    py::enum_<Mode>(m, "Mode")
        .value("Training", Mode::Training)
        .value("DecisionDirected", Mode::DecisionDirected);
    py::class_<JioState>(m, "JioState")
        .def_readwrite("S", &JioState::S)
        .def_readwrite("w", &JioState::w)
        .def_readwrite("mu_w", &JioState::mu_w)
        .def_readwrite("mu_S", &JioState::mu_S)
        .def_readwrite("J", &JioState::J)
        .def_readwrite("rho", &JioState::rho)
        .def_readwrite("mode", &JioState::mode)
        .def_readonly("active_rank", &JioState::active_rank)
        .def_readonly("normalized", &JioState::normalized);
    py::class_<RankSelectionConfig>(m, "RankSelectionConfig")
        .def(py::init([](int d_min, int d_max, double forgetting) {
                 return RankSelectionConfig{d_min, d_max, true, forgetting};
             }),
             py::arg("d_min"), py::arg("d_max"), py::arg("forgetting") = 0.0);
    m.def("init_state", &init_state, py::arg("M"), py::arg("D"), py::arg("mu_w"), py::arg("mu_S"),
          py::arg("J"), py::arg("rho"));
    m.def("effective_norm_sq", &effective_norm_sq);
    m.def("update_filter", &update_filter, py::arg("state"), py::arg("r"), py::arg("b"));
    m.def("update_projection", &update_projection, py::arg("state"), py::arg("r"), py::arg("b"));
    m.def("scale_filter", &scale_filter, py::arg("state"));
    m.def("jio_step", &jio_step, py::arg("state"), py::arg("r"), py::arg("known_bit") = py::none());
    m.def("candidate_error", &candidate_error, py::arg("state"), py::arg("D"), py::arg("r"), py::arg("b"),
          py::arg("rho"));
    m.def("select_rank", &select_rank, py::arg("state"), py::arg("cfg"), py::arg("r"), py::arg("b"));

    // baselines
    py::class_<FullRankState>(m, "FullRankState")
        .def_readwrite("w", &FullRankState::w)
        .def_readwrite("mode", &FullRankState::mode);
    m.def("init_full_rank", &init_full_rank, py::arg("M"), py::arg("mu"), py::arg("rho") = 1.0);
    m.def("lms_step", &lms_step, py::arg("state"), py::arg("r"), py::arg("known_bit") = py::none());
    m.def("mber_full_rank_step", &mber_full_rank_step, py::arg("state"), py::arg("r"),
          py::arg("known_bit") = py::none());

    // complexity
    m.def(
        "op_count",
        [](const std::string& algorithm, std::optional<std::int64_t> M, std::optional<std::int64_t> D,
           std::optional<std::int64_t> J, std::optional<std::int64_t> Lp, std::optional<std::int64_t> D_max) {
            const auto r = op_count(algorithm_from_string(algorithm), {M, D, J, Lp, D_max});
            return py::make_tuple(r.multiplications, r.additions);
        },
        py::arg("algorithm"), py::arg("M") = py::none(), py::arg("D") = py::none(), py::arg("J") = py::none(),
        py::arg("Lp") = py::none(), py::arg("D_max") = py::none(),
        "(multiplications, additions) per symbol.");

    // harness
    m.def(
        "default_config", [] { return config_entries(ExperimentConfig{}); },
        "Default configuration as (key, value) string pairs.");
    m.def(
        "run_trial",
        [](std::uint64_t seed, const py::kwargs& kw) {
            const auto cfg = config_from_kwargs(kw);
            const auto t = run_trial(cfg, seed);
            py::dict d;
            py::list names;
            for (auto k : t.detectors) names.append(std::string(to_string(k)));
            d["detectors"] = names;
            d["errors"] = to_matrix(t.errors);
            d["true_bits"] = to_array(t.true_bits);
            d["decisions"] = t.decisions;
            d["selected_ranks"] = to_array(t.selected_ranks);
            return d;
        },
        py::arg("trial_seed"), "Runs one trial; keyword arguments override config keys.");
    m.def(
        "run_monte_carlo",
        [](const py::kwargs& kw) {
            const auto res = run_monte_carlo(config_from_kwargs(kw));
            py::dict d;
            for (const auto& s : res.detectors) d[py::str(std::string(to_string(s.kind)))] = summary_dict(s);
            return d;
        },
        "Monte Carlo run; keyword arguments override config keys. Returns per-detector summaries.");
    m.def(
        "sweep",
        [](const std::string& axis, const py::kwargs& kw) {
            const auto res = sweep(config_from_kwargs(kw), sweep_axis_from_string(axis));
            py::list rows;
            for (const auto& r : res.rows)
                rows.append(py::make_tuple(r.axis_value, std::string(to_string(r.detector)), r.ber, r.stderr_));
            return rows;
        },
        py::arg("axis"), "Rows of (axis_value, detector, ber, stderr).");
    m.def("version", &version_string);
}
