#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "daaca/config.hpp"
#include "daaca/experiment.hpp"
#include "daaca/sweep.hpp"

namespace py = pybind11;
using namespace daaca;

namespace {

Algorithm algorithm_from(const std::string& name) {
  if (auto a = parse_algorithm(name)) return *a;
  throw py::value_error("unknown algorithm '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_daaca, m) {
  m.doc() = "Ant-colony data aggregation simulator";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<SimulationEnded>(m, "SimulationEnded");

  m.def("algorithms", [] {
    std::vector<std::string> names;
    for (auto a : all_algorithms()) names.emplace_back(to_string(a));
    return names;
  });

  py::class_<EnergyModelParams>(m, "EnergyModelParams")
      .def(py::init<>())
      .def_readwrite("e_tx_elec", &EnergyModelParams::e_tx_elec)
      .def_readwrite("e_rx_elec", &EnergyModelParams::e_rx_elec)
      .def_readwrite("eps_amp", &EnergyModelParams::eps_amp)
      .def_readwrite("packet_bits", &EnergyModelParams::packet_bits)
      .def_readwrite("e_init", &EnergyModelParams::e_init);

  m.def("tx_cost", &tx_cost, py::arg("bits"), py::arg("distance"), py::arg("params") = EnergyModelParams{});
  m.def("rx_cost", &rx_cost, py::arg("bits"), py::arg("params") = EnergyModelParams{});

  py::class_<AlgorithmConfig>(m, "AlgorithmConfig")
      .def(py::init<>())
      .def_readwrite("alpha", &AlgorithmConfig::alpha)
      .def_readwrite("beta", &AlgorithmConfig::beta)
      .def_readwrite("rho", &AlgorithmConfig::rho)
      .def_readwrite("zeta", &AlgorithmConfig::zeta)
      .def_readwrite("q0", &AlgorithmConfig::q0)
      .def_readwrite("eta_min", &AlgorithmConfig::eta_min)
      .def_readwrite("eta_max", &AlgorithmConfig::eta_max)
      .def_readwrite("eta_init", &AlgorithmConfig::eta_init)
      .def_readwrite("round_to_update", &AlgorithmConfig::round_to_update)
      .def_readwrite("deposit_scale", &AlgorithmConfig::deposit_scale)
      .def_readwrite("control_bits", &AlgorithmConfig::control_bits);

  py::class_<SimulationConfig>(m, "SimulationConfig")
      .def(py::init<>())
      .def(py::init([](const std::string& algorithm, std::size_t n, double width, double length,
                       std::uint64_t packets, std::uint32_t sources) {
             SimulationConfig c;
             c.algorithm = algorithm_from(algorithm);
             c.n = n;
             c.width = width;
             c.length = length;
             c.packet_budget = packets;
             c.sources = sources;
             return c;
           }),
           py::arg("algorithm") = "Basic", py::arg("n") = 200, py::arg("width") = 40.0,
           py::arg("length") = 50.0, py::arg("packets") = 1000, py::arg("sources") = 10)
      .def_property(
          "algorithm", [](const SimulationConfig& c) { return std::string(to_string(c.algorithm)); },
          [](SimulationConfig& c, const std::string& name) { c.algorithm = algorithm_from(name); })
      .def_readwrite("n", &SimulationConfig::n)
      .def_readwrite("width", &SimulationConfig::width)
      .def_readwrite("length", &SimulationConfig::length)
      .def_readwrite("range", &SimulationConfig::range)
      .def_readwrite("sources", &SimulationConfig::sources)
      .def_readwrite("packet_budget", &SimulationConfig::packet_budget)
      .def_readwrite("lifetime_mode", &SimulationConfig::lifetime_mode)
      .def_readwrite("energy", &SimulationConfig::energy)
      .def_readwrite("daaca", &SimulationConfig::daaca)
      .def("validate", &SimulationConfig::validate)
      .def("rounds", &SimulationConfig::rounds);

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("algorithm", &MetricsReport::algorithm)
      .def_readonly("n", &MetricsReport::n)
      .def_readonly("seed", &MetricsReport::seed)
      .def_readonly("packets", &MetricsReport::packets)
      .def_readonly("rounds_run", &MetricsReport::rounds_run)
      .def_readonly("avg_remaining_energy", &MetricsReport::avg_remaining_energy)
      .def_readonly("avg_remaining_energy_with_sink", &MetricsReport::avg_remaining_energy_with_sink)
      .def_readonly("energy_difference", &MetricsReport::energy_difference)
      .def_readonly("energy_difference_with_sink", &MetricsReport::energy_difference_with_sink)
      .def_readonly("lifetime_rounds", &MetricsReport::lifetime_rounds)
      .def_readonly("lifetime_censored", &MetricsReport::lifetime_censored)
      .def_readonly("sink_death_round", &MetricsReport::sink_death_round)
      .def_readonly("hop_success_ratio", &MetricsReport::hop_success_ratio)
      .def_readonly("delivered", &MetricsReport::delivered)
      .def_readonly("dropped", &MetricsReport::dropped)
      .def_readonly("avg_degree", &MetricsReport::avg_degree)
      .def_readonly("avg_tx_radius", &MetricsReport::avg_tx_radius)
      .def_readonly("energy_tx", &MetricsReport::energy_tx)
      .def_readonly("energy_rx", &MetricsReport::energy_rx)
      .def_readonly("energy_control", &MetricsReport::energy_control)
      .def("__eq__", [](const MetricsReport& a, const MetricsReport& b) { return a == b; })
      .def("csv", [](const MetricsReport& r, std::uint64_t stride) { return emit_csv(report_rows(r, stride)); },
           py::arg("stride") = 10);

  py::class_<RoundOutcome>(m, "RoundOutcome")
      .def_readonly("round", &RoundOutcome::round)
      .def_readonly("delivered", &RoundOutcome::delivered)
      .def_readonly("dropped", &RoundOutcome::dropped)
      .def_readonly("hop_attempts", &RoundOutcome::hop_attempts)
      .def_readonly("hop_successes", &RoundOutcome::hop_successes)
      .def_readonly("energy_spent", &RoundOutcome::energy_spent)
      .def_readonly("deaths", &RoundOutcome::deaths)
      .def_readonly("forwarding_edges", &RoundOutcome::forwarding_edges);

  py::class_<Simulation>(m, "Simulation")
      .def(py::init<const SimulationConfig&, std::uint64_t>(), py::arg("config"), py::arg("seed"))
      .def("step", &Simulation::step)
      .def("run_round", &Simulation::run_round)
      .def("maintenance", &Simulation::maintenance)
      .def("used_links", &Simulation::used_links)
      .def("remove_node", [](Simulation& s, NodeId id) { return s.scenario_remove_node(id).touched; })
      .def("add_node", [](Simulation& s, double x, double y) {
        const auto r = s.scenario_add_node({x, y});
        return py::make_tuple(r.node, r.touched);
      })
      .def_property_readonly("round", &Simulation::round)
      .def_property_readonly("sources", &Simulation::sources)
      .def_property_readonly("sink", [](const Simulation& s) { return s.graph().sink(); })
      .def_property_readonly("energies", [](const Simulation& s) {
        std::vector<double> e;
        for (const auto& n : s.graph().nodes()) e.push_back(n.energy);
        return e;
      })
      .def_property_readonly("positions", [](const Simulation& s) {
        std::vector<std::pair<double, double>> p;
        for (const auto& n : s.graph().nodes()) p.emplace_back(n.pos.x, n.pos.y);
        return p;
      })
      .def("neighbors", [](const Simulation& s, NodeId id) { return s.graph().neighbors(id); })
      .def_property_readonly("energy_charged", [](const Simulation& s) { return s.ledger().total(); })
      .def_property_readonly("conservation_error", [](const Simulation& s) { return conservation_error(s); });

  m.def("run_simulation", &run_simulation, py::arg("config"), py::arg("seed"),
        py::arg("observer") = RoundObserver{}, py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_experiment",
      [](const SimulationConfig& cfg, const std::vector<std::uint64_t>& seeds) { return run_experiment(cfg, seeds); },
      py::call_guard<py::gil_scoped_release>());

  py::class_<SignTest>(m, "SignTest")
      .def_readonly("wins", &SignTest::wins)
      .def_readonly("losses", &SignTest::losses)
      .def_readonly("ties", &SignTest::ties)
      .def_readonly("p_value", &SignTest::p_value);
  m.def("sign_test", [](const std::vector<double>& a, const std::vector<double>& b) { return sign_test(a, b); });

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_property(
          "algorithms",
          [](const ExperimentConfig& c) {
            std::vector<std::string> names;
            for (auto a : c.algorithms) names.emplace_back(to_string(a));
            return names;
          },
          [](ExperimentConfig& c, const std::vector<std::string>& names) {
            c.algorithms.clear();
            for (const auto& n : names) c.algorithms.push_back(algorithm_from(n));
          })
      .def_property(
          "sizes",
          [](const ExperimentConfig& c) {
            std::vector<std::tuple<double, double, std::size_t>> s;
            for (const auto& f : c.sizes) s.emplace_back(f.width, f.length, f.n);
            return s;
          },
          [](ExperimentConfig& c, const std::vector<std::tuple<double, double, std::size_t>>& s) {
            c.sizes.clear();
            for (const auto& [w, l, n] : s) c.sizes.push_back({w, l, n});
          })
      .def_readwrite("packets", &ExperimentConfig::packets)
      .def_readwrite("seeds", &ExperimentConfig::seeds)
      .def_readwrite("out", &ExperimentConfig::out)
      .def_readwrite("jobs", &ExperimentConfig::jobs)
      .def_readwrite("base", &ExperimentConfig::base)
      .def_property(
          "lifetime", [](const ExperimentConfig& c) { return c.lifetime.enabled; },
          [](ExperimentConfig& c, bool on) { c.lifetime.enabled = on; })
      .def("validate", &ExperimentConfig::validate);

  m.def("parse_config", &parse_config);
  m.def("load_config", &load_config);
  m.def("preset", [](const std::string& name) {
    auto p = preset(name);
    if (!p) throw py::value_error("unknown preset '" + name + "'");
    return *p;
  });

  m.def(
      "run_sweep",
      [](const ExperimentConfig& cfg) {
        SweepSummary s;
        {
          py::gil_scoped_release release;
          s = run_sweep(cfg);
        }
        const auto problems = write_plot_files(s.rows, cfg, cfg.out);
        py::dict d;
        d["cells"] = s.cells;
        d["computed"] = s.computed;
        d["reused"] = s.reused;
        d["failed"] = s.failed;
        d["errors"] = s.errors;
        d["plot_problems"] = problems;
        return d;
      },
      "Runs the sweep into cfg.out and writes results.csv and the figure files.");
}
