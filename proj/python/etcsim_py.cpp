#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "etcsim/calibration.hpp"
#include "etcsim/experiments.hpp"
#include "etcsim/graph.hpp"
#include "etcsim/simulation.hpp"

namespace py = pybind11;
using namespace etcsim;

#ifndef ETCSIM_VERSION
#define ETCSIM_VERSION "dev"
#endif

PYBIND11_MODULE(_etcsim, m) {
    m.doc() = "Triggered impulsive consensus control of noisy integrator agents.";
    m.attr("__version__") = ETCSIM_VERSION;

    py::enum_<InfoScenario>(m, "InfoScenario")
        .value("BroadcastOnly", InfoScenario::BroadcastOnly)
        .value("BroadcastPlusLocal", InfoScenario::BroadcastPlusLocal);

    py::class_<PeriodicSync>(m, "PeriodicSync")
        .def(py::init<double>(), py::arg("period"))
        .def_readwrite("period", &PeriodicSync::period);
    py::class_<PeriodicAsync>(m, "PeriodicAsync")
        .def(py::init<double, std::vector<double>>(), py::arg("period"), py::arg("offsets"))
        .def_readwrite("period", &PeriodicAsync::period)
        .def_readwrite("offsets", &PeriodicAsync::offsets);
    py::class_<LevelBroadcast>(m, "LevelBroadcast")
        .def(py::init<double>(), py::arg("threshold"))
        .def_readwrite("threshold", &LevelBroadcast::threshold);
    py::class_<LevelGlobal>(m, "LevelGlobal")
        .def(py::init<double>(), py::arg("threshold"))
        .def_readwrite("threshold", &LevelGlobal::threshold);

    py::class_<AverageRule>(m, "AverageRule").def(py::init<>());
    py::class_<LeaderRule>(m, "LeaderRule").def(py::init<>());
    py::class_<FixedRule>(m, "FixedRule")
        .def(py::init<double>(), py::arg("point"))
        .def_readwrite("point", &FixedRule::point);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("n", &ScenarioConfig::n)
        .def_readwrite("scenario", &ScenarioConfig::scenario)
        .def_readwrite("scheme", &ScenarioConfig::scheme)
        .def_readwrite("rule", &ScenarioConfig::rule)
        .def_readwrite("dt", &ScenarioConfig::dt)
        .def_readwrite("horizon", &ScenarioConfig::horizon)
        .def_readwrite("trials", &ScenarioConfig::trials)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("trajectory_stride", &ScenarioConfig::trajectory_stride)
        .def_readwrite("noise_scale", &ScenarioConfig::noise_scale)
        .def("validate", &validate_config);

    py::class_<CostReport>(m, "CostReport")
        .def_readonly("n", &CostReport::n)
        .def_readonly("trials", &CostReport::trials)
        .def_readonly("j_time_avg", &CostReport::j_time_avg)
        .def_readonly("ci_halfwidth", &CostReport::ci_halfwidth)
        .def_readonly("j_renewal", &CostReport::j_renewal)
        .def_readonly("j_renewal_ci", &CostReport::j_renewal_ci)
        .def_readonly("mean_local_interevent", &CostReport::mean_local_interevent)
        .def_readonly("mean_global_interevent", &CostReport::mean_global_interevent)
        .def_readonly("per_trial_j", &CostReport::per_trial_j)
        .def_readonly("per_trial_global_interevent", &CostReport::per_trial_global_interevent);

    m.def("run_batch", &run_batch, py::arg("config"), py::call_guard<py::gil_scoped_release>());

    m.def(
        "trajectory",
        [](const ScenarioConfig& config) {
            const Table t = trajectory(config);
            return py::make_tuple(t.header, t.rows);
        },
        py::arg("config"), "Header and rows (as strings) of a sampled trial-0 path.");

    m.def(
        "consensus_cost",
        [](const std::vector<double>& x) { return consensus_cost(CompleteGraph(x.size()), x); },
        py::arg("x"));

    m.def(
        "calibrate_delta_bl",
        [](std::size_t n, double target, std::uint64_t seed, std::size_t samples, bool bridge_correction) {
            CalibrationOptions o;
            o.samples = samples;
            o.verify_samples = std::min<std::size_t>(o.verify_samples, samples);
            o.bridge_correction = bridge_correction;
            const auto r = calibrate_delta_bl(n, target, NoiseStream(seed, 0).split(n), o);
            py::dict d;
            d["delta"] = r.delta_star;
            d["target_T"] = r.target_T;
            d["achieved_T"] = r.achieved_T;
            d["ci_halfwidth"] = r.ci_halfwidth;
            d["unit_exit_time"] = r.unit_exit_time;
            d["samples_used"] = r.samples_used;
            return d;
        },
        py::arg("n"), py::arg("target_T"), py::arg("seed") = 1, py::arg("samples") = 100'000,
        py::arg("bridge_correction") = true);

    m.def(
        "mean_first_passage",
        [](std::size_t n, double threshold, double dt, bool bridge_correction, std::size_t samples,
           std::uint64_t seed) {
            const auto s = mean_first_passage(NoiseStream(seed, 0), n, threshold, dt, bridge_correction, samples);
            return py::make_tuple(s.mean, s.ci_halfwidth);
        },
        py::arg("n"), py::arg("threshold"), py::arg("dt") = 1e-3, py::arg("bridge_correction") = true,
        py::arg("samples") = 10'000, py::arg("seed") = 1);

    m.def("j_tt_b", &j_tt_b, py::arg("n"), py::arg("t_local"));
    m.def("j_et_b", &j_et_b, py::arg("n"), py::arg("threshold"));
    m.def("j_tt_bl", &j_tt_bl, py::arg("n"), py::arg("t_global"));
    m.def("tt_information_gap", py::overload_cast<std::size_t>(&tt_information_gap), py::arg("n"));
    m.def("expected_occupation_integral", &expected_occupation_integral, py::arg("threshold"));
}
