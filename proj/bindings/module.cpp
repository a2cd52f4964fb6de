// module.cpp - Python bindings for the core operations: curve algebra,
// tandem delay bounds, fading-channel bounds, and config-driven scenario
// analysis. Topology construction stays on the config-file path; the
// struct-level API is C++ only.
//
// Copyright (c) 2026 ubinc contributors.
// Licensed under the MIT License. See LICENSE file for details.
//

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ubinc/config.hpp"
#include "ubinc/curve.hpp"
#include "ubinc/scenario.hpp"
#include "ubinc/snr.hpp"
#include "ubinc/tandem.hpp"

namespace py = pybind11;
using namespace ubinc;

namespace {

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg) {
    if (!cfg.sweep) {
        throw std::invalid_argument("config has no [sweep] table");
    }
    return sweep(cfg.topology, cfg.flow, cfg.sweep->param, cfg.sweep->values, cfg.mode);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Delay bounds for device-edge-cloud compute loops";

    py::register_exception<instability_error>(m, "InstabilityError");
    py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);

    py::class_<CurveSegment>(m, "CurveSegment")
        .def(py::init([](double start, double value, double slope) {
                 return CurveSegment{start, value, slope};
             }),
             py::arg("start"), py::arg("value"), py::arg("slope"))
        .def_readonly("start", &CurveSegment::start)
        .def_readonly("value", &CurveSegment::value)
        .def_readonly("slope", &CurveSegment::slope)
        .def("__repr__", [](const CurveSegment& s) {
            return "CurveSegment(start=" + std::to_string(s.start) +
                   ", value=" + std::to_string(s.value) +
                   ", slope=" + std::to_string(s.slope) + ")";
        });

    py::class_<Curve>(m, "Curve",
                      "Non-decreasing piecewise-linear function on [0, inf)")
        .def(py::init<double, std::vector<CurveSegment>>(), py::arg("origin_value"),
             py::arg("segments"))
        .def("__call__", [](const Curve& c, double t) { return c(t); }, py::arg("t"))
        .def("right_limit", &Curve::right_limit, py::arg("t"))
        .def("lower_inverse", &Curve::lower_inverse, py::arg("y"))
        .def_property_readonly("origin_value", &Curve::origin_value)
        .def_property_readonly("segments",
                               [](const Curve& c) { return c.segments(); })
        .def("final_rate", &Curve::final_rate)
        .def_static("zero", &Curve::zero)
        .def_static("delta_zero", &Curve::delta_zero);

    py::class_<TokenBucket>(m, "TokenBucket")
        .def(py::init<double, double>(), py::arg("rate"), py::arg("burst"))
        .def_readonly("rate", &TokenBucket::rate)
        .def_readonly("burst", &TokenBucket::burst)
        .def("curve", &TokenBucket::curve);

    py::class_<RateLatency>(m, "RateLatency")
        .def(py::init<double, double>(), py::arg("rate"), py::arg("latency"))
        .def_readonly("rate", &RateLatency::rate)
        .def_readonly("latency", &RateLatency::latency)
        .def("curve", &RateLatency::curve);

    py::class_<TSpec>(m, "TSpec")
        .def(py::init<double, double, double, double>(), py::arg("peak"),
             py::arg("max_packet"), py::arg("rate"), py::arg("burst"))
        .def_readonly("peak", &TSpec::peak)
        .def_readonly("max_packet", &TSpec::max_packet)
        .def_readonly("rate", &TSpec::rate)
        .def_readonly("burst", &TSpec::burst)
        .def("curve", &TSpec::curve);

    m.def("min_plus_conv", &min_plus_conv, py::arg("f"), py::arg("g"));
    m.def("min_plus_deconv", &min_plus_deconv, py::arg("f"), py::arg("g"));
    m.def("h_dev", &h_dev, py::arg("alpha"), py::arg("beta"),
          "Horizontal deviation: the delay bound for alpha over beta");
    m.def("v_dev", &v_dev, py::arg("alpha"), py::arg("beta"),
          "Vertical deviation: the backlog bound for alpha over beta");

    py::enum_<NodeRole>(m, "NodeRole")
        .value("device", NodeRole::device)
        .value("bs", NodeRole::bs)
        .value("cloud", NodeRole::cloud)
        .value("compute", NodeRole::compute)
        .value("backhaul", NodeRole::backhaul);

    py::class_<TandemNode>(m, "TandemNode")
        .def(py::init([](NodeRole role, RateLatency service) {
                 return TandemNode{role, service};
             }),
             py::arg("role"), py::arg("service"))
        .def_readonly("role", &TandemNode::role)
        .def_readonly("service", &TandemNode::service);

    py::class_<Tandem>(m, "Tandem")
        .def(py::init<std::vector<TandemNode>>(), py::arg("nodes"))
        .def_property_readonly("nodes", [](const Tandem& t) { return t.nodes(); });

    m.def("e2e_service_curve", &e2e_service_curve, py::arg("tandem"),
          "Convolution of all per-node service curves");
    m.def("case1_delay", &case1_delay, py::arg("token_bucket"), py::arg("tandem"));
    m.def("case2_delay", &case2_delay, py::arg("tspec"), py::arg("tandem"));

    py::class_<ConstantSnr>(m, "ConstantSnr")
        .def(py::init([](double gamma) { return ConstantSnr{gamma}; }),
             py::arg("gamma"))
        .def_readonly("gamma", &ConstantSnr::gamma);

    py::class_<RayleighSnr>(m, "RayleighSnr")
        .def(py::init([](double mean) { return RayleighSnr{mean}; }), py::arg("mean"))
        .def_readonly("mean", &RayleighSnr::mean);

    py::class_<FadingChannel>(m, "FadingChannel")
        .def(py::init<double, SnrModel, double>(), py::arg("symbols_per_slot"),
             py::arg("snr"), py::arg("slot_duration"))
        .def_readonly("symbols_per_slot", &FadingChannel::symbols_per_slot)
        .def_readonly("snr", &FadingChannel::snr)
        .def_readonly("slot_duration", &FadingChannel::slot_duration);

    py::class_<SnrArrival>(m, "SnrArrival")
        .def(py::init<double, double, double, double>(), py::arg("rho"),
             py::arg("sigma"), py::arg("theta_valid_min") = 0.0,
             py::arg("theta_valid_max") = kInf)
        .def_readonly("rho", &SnrArrival::rho)
        .def_readonly("sigma", &SnrArrival::sigma);

    py::class_<ThetaSearch>(m, "ThetaSearch")
        .def(py::init<>())
        .def_readwrite("theta_min", &ThetaSearch::theta_min)
        .def_readwrite("theta_max", &ThetaSearch::theta_max)
        .def_readwrite("tolerance", &ThetaSearch::tolerance)
        .def_readwrite("max_iterations", &ThetaSearch::max_iterations);

    m.def("mellin_rayleigh", &mellin_rayleigh, py::arg("nu"), py::arg("gamma_bar"),
          "Moment of 1 + snr at order nu for a Rayleigh channel");
    m.def("delay_violation_bound", &delay_violation_bound, py::arg("arrival"),
          py::arg("channel"), py::arg("w_slots"), py::arg("search") = ThetaSearch{});
    m.def("delay_quantile", &delay_quantile, py::arg("arrival"), py::arg("channel"),
          py::arg("epsilon"), py::arg("search") = ThetaSearch{},
          py::arg("max_slots") = 1000000,
          "Smallest delay w in slots with violation bound at most epsilon");

    py::enum_<AnalysisMode>(m, "AnalysisMode")
        .value("deterministic", AnalysisMode::deterministic)
        .value("hybrid", AnalysisMode::hybrid);

    py::class_<DelayReport>(m, "DelayReport")
        .def_readonly("uplink_s", &DelayReport::uplink_s)
        .def_readonly("compute_s", &DelayReport::compute_s)
        .def_readonly("downlink_s", &DelayReport::downlink_s)
        .def_readonly("wireless_quantile_s", &DelayReport::wireless_quantile_s)
        .def_readonly("per_round_s", &DelayReport::per_round_s)
        .def_readonly("total_s", &DelayReport::total_s)
        .def_readonly("rounds", &DelayReport::rounds)
        .def_readonly("mode", &DelayReport::mode)
        .def_readonly("epsilon", &DelayReport::epsilon)
        .def("__repr__", [](const DelayReport& r) {
            return "DelayReport(total_s=" + std::to_string(r.total_s) +
                   ", rounds=" + std::to_string(r.rounds) + ")";
        });

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("value", &SweepRow::value)
        .def_readonly("report", &SweepRow::report)
        .def_readonly("stable", &SweepRow::stable);

    m.def(
        "analyze_config",
        [](const std::string& path) {
            ScenarioConfig cfg = load_config(path);
            return service_delay(cfg.topology, cfg.flow, cfg.mode);
        },
        py::arg("path"), "Load a config file and return its delay report");
    m.def(
        "analyze_config_text",
        [](const std::string& text) {
            ScenarioConfig cfg = parse_config(text);
            return service_delay(cfg.topology, cfg.flow, cfg.mode);
        },
        py::arg("text"), "Parse config text and return its delay report");
    m.def(
        "sweep_config",
        [](const std::string& path) { return run_sweep(load_config(path)); },
        py::arg("path"), "Load a config file and run its [sweep] table");
    m.def(
        "sweep_config_text",
        [](const std::string& text) { return run_sweep(parse_config(text)); },
        py::arg("text"), "Parse config text and run its [sweep] table");
}
