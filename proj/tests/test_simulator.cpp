#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <vector>

#include "daaca/experiment.hpp"
#include "daaca/simulator.hpp"
#include "support.hpp"

using namespace daaca;
using testsupport::config_for;
using testsupport::make_graph;

namespace {

std::vector<double> energies(const NetworkGraph& g) {
  std::vector<double> e;
  for (const auto& s : g.nodes()) e.push_back(s.energy);
  return e;
}

}  // namespace

TEST_CASE("line trace: source, relay, sink") {
  auto cfg = config_for(Algorithm::Basic);
  Simulation sim(cfg, make_graph({{0, 0}, {8, 0}, {16, 0}}), {2}, 1);
  REQUIRE(sim.tables()[2].entries.size() == 1);
  REQUIRE(sim.tables()[2].entries[0].neighbor == 1);
  const auto before = energies(sim.graph());
  const auto out = sim.run_round();
  const auto after = energies(sim.graph());
  const EnergyModelParams em;
  const double tx = tx_cost(4098, 8.0, em);
  const double rx = rx_cost(4098, em);
  CHECK(out.delivered == 1);
  CHECK(out.dropped == 0);
  CHECK(out.hop_attempts == 2);
  CHECK(out.hop_successes == 2);
  CHECK(before[2] - after[2] == doctest::Approx(tx).epsilon(1e-12));
  CHECK(before[1] - after[1] == doctest::Approx(tx + rx).epsilon(1e-12));
  CHECK(before[0] - after[0] == doctest::Approx(rx).epsilon(1e-12));
  CHECK(out.energy_spent == doctest::Approx(2 * tx + 2 * rx).epsilon(1e-12));
  CHECK(out.packets[0].id_list == std::vector<NodeId>{2, 1, 0});
  CHECK(out.packets[0].energy_consumption == doctest::Approx(2 * tx).epsilon(1e-12));
  CHECK(out.forwarding_edges == std::vector<Link>{{2, 1}, {1, 0}});
}

TEST_CASE("initialization is charged") {
  auto g = make_graph({{0, 0}, {8, 0}, {16, 0}});
  const double fresh = g.residual_energy_total();
  Simulation sim(config_for(Algorithm::Basic), g, {2}, 1);
  const EnergyModelParams em;
  // three hellos: 0 and 2 reach one neighbor each, 1 reaches two
  const double hello = 3 * tx_cost(128, 10.0, em) + 4 * rx_cost(128, em);
  CHECK(fresh - sim.graph().residual_energy_total() == doctest::Approx(hello).epsilon(1e-12));
  CHECK(sim.ledger().control() == doctest::Approx(hello).epsilon(1e-12));
}

TEST_CASE("aggregation at a junction") {
  auto cfg = config_for(Algorithm::Basic);
  Simulation sim(cfg, make_graph({{0, 0}, {8, 0}, {14, 5.5}, {14, -5.5}}), {2, 3}, 1);
  const auto before = energies(sim.graph());
  const auto out = sim.run_round();
  const auto after = energies(sim.graph());
  const EnergyModelParams em;
  CHECK(out.delivered == 2);
  CHECK(before[1] - after[1] ==
        doctest::Approx(2 * rx_cost(4098, em) + tx_cost(4098, 8.0, em)).epsilon(1e-12));
  CHECK(sim.conj().count[1] == 1);
  CHECK(sim.conj().count[2] == 0);
  CHECK(out.forwarding_edges.size() == 3);
  CHECK(is_sink_forest(sim.graph(), out.forwarding_edges));
}

TEST_CASE("no sources ends the run") {
  Simulation sim(config_for(Algorithm::Basic), make_graph({{0, 0}, {8, 0}}), {1}, 1);
  sim.set_sources({});
  CHECK_THROWS_AS(sim.run_round(), SimulationEnded);
}

TEST_CASE("dead sink ends the run") {
  Simulation sim(config_for(Algorithm::PEDAP), make_graph({{0, 0}, {8, 0}}), {1}, 1);
  sim.graph().node(0).alive = false;
  CHECK_THROWS_AS(sim.run_round(), SimulationEnded);
}

TEST_CASE("maintenance only on the boundary") {
  auto cfg = config_for(Algorithm::ES);
  cfg.daaca.round_to_update = 3;
  Simulation sim(cfg, make_graph({{0, 0}, {8, 0}, {16, 0}}), {2}, 1);
  sim.run_round();
  const double spent = sim.ledger().total();
  const auto tables = sim.tables();
  CHECK_FALSE(sim.maintenance());
  CHECK(sim.ledger().total() == spent);
  CHECK(sim.tables() == tables);
  sim.run_round();
  sim.run_round();
  CHECK(sim.maintenance());
  CHECK(sim.ledger().total() > spent);
}

TEST_CASE("MM keeps pheromone within bounds") {
  SimulationConfig cfg;
  cfg.algorithm = Algorithm::MM;
  cfg.daaca.round_to_update = 10;
  cfg.packet_budget = 3000;
  Simulation sim(cfg, 9);
  for (int r = 0; r < 300; ++r) {
    sim.step();
    if (sim.round() % 10 != 0) continue;
    for (const auto& t : sim.tables()) {
      for (const auto& e : t.entries) {
        CHECK(e.pheromone >= cfg.daaca.eta_min);
        CHECK(e.pheromone <= cfg.daaca.eta_max);
      }
    }
  }
}

TEST_CASE("idle rows only evaporate under ACS") {
  auto cfg = config_for(Algorithm::ACS);
  cfg.daaca.round_to_update = 5;
  // node 3 never carries traffic
  Simulation sim(cfg, make_graph({{0, 0}, {8, 0}, {16, 0}, {4, 8}}), {2}, 1);
  REQUIRE(sim.tables()[3].entries.size() == 2);
  for (int r = 0; r < 5; ++r) sim.step();
  for (const auto& e : sim.tables()[3].entries) CHECK(e.pheromone == doctest::Approx(0.64));
}

TEST_CASE("packet budget sets the number of rounds") {
  SimulationConfig cfg;
  cfg.packet_budget = 1000;
  cfg.sources = 10;
  CHECK(cfg.rounds() == 100);
  const auto rep = run_simulation(cfg, 3);
  CHECK(rep.rounds_run == 100);
  CHECK(rep.avg_remaining_energy.size() == 101);
  CHECK(rep.delivered + rep.dropped == 1000);
}

TEST_CASE("runs are reproducible") {
  for (auto a : all_algorithms()) {
    SimulationConfig cfg;
    cfg.algorithm = a;
    cfg.packet_budget = 300;
    CAPTURE(to_string(a));
    const auto r1 = run_simulation(cfg, 11);
    const auto r2 = run_simulation(cfg, 11);
    CHECK(r1 == r2);
    const auto r3 = run_simulation(cfg, 12);
    CHECK(r3.avg_remaining_energy != r1.avg_remaining_energy);
  }
}

TEST_CASE("removing the only relay cuts the source off") {
  for (auto a : {Algorithm::Basic, Algorithm::ACA, Algorithm::PEDAP}) {
    CAPTURE(to_string(a));
    Simulation sim(config_for(a), make_graph({{0, 0}, {8, 0}, {16, 0}}), {2}, 1);
    CHECK(sim.run_round().delivered == 1);
    const auto rep = sim.scenario_remove_node(1);
    CHECK(rep.touched == std::vector<NodeId>{0, 2});
    CHECK(sim.graph().neighbors(2).empty());
    const auto out = sim.run_round();
    CHECK(out.delivered == 0);
    CHECK(out.dropped == 1);
    CHECK(out.forwarding_edges.empty());
    // a replacement restores the path
    const auto add = sim.scenario_add_node({8, 1});
    CHECK(add.node == 3);
    CHECK(sim.run_round().delivered == 1);
    CHECK(conservation_error(sim) < 1e-12);
  }
}

TEST_CASE("remove keeps routing state in sync") {
  SimulationConfig cfg;
  for (auto a : {Algorithm::Basic, Algorithm::ACS, Algorithm::ACA, Algorithm::L_PEDAP}) {
    CAPTURE(to_string(a));
    cfg.algorithm = a;
    Simulation sim(cfg, 5);
    for (int r = 0; r < 20; ++r) sim.step();
    NodeId victim = 1;
    while (victim == sim.graph().sink() || sim.graph().node(victim).is_source) ++victim;
    sim.scenario_remove_node(victim);
    sim.scenario_add_node({20, 20});
    for (NodeId i = 0; i < sim.graph().size(); ++i) {
      if (!sim.tables().empty()) {
        for (const auto& e : sim.tables()[i].entries) {
          CHECK(e.neighbor != victim);
          CHECK(sim.graph().adjacent(i, e.neighbor));
        }
      }
      if (sim.aca()) CHECK(sim.aca()->tau[i].size() == sim.graph().neighbors(i).size());
    }
    for (int r = 0; r < 20; ++r) {
      const auto out = sim.step();
      CHECK(is_sink_forest(sim.graph(), out.forwarding_edges));
    }
    CHECK(conservation_error(sim) < 1e-12);
  }
}

TEST_CASE("scenario argument checks") {
  Simulation sim(config_for(Algorithm::Basic), make_graph({{0, 0}, {8, 0}}), {1}, 1);
  CHECK_THROWS_AS(sim.scenario_remove_node(0), std::invalid_argument);
  CHECK_THROWS_AS(sim.scenario_remove_node(9), std::invalid_argument);
  CHECK_THROWS_AS(sim.scenario_add_node({-1, 0}), std::invalid_argument);
}

TEST_CASE("config validation") {
  SimulationConfig cfg;
  cfg.sources = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.packet_budget = 5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.daaca.rho = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(Simulation(cfg, 1), ConfigError);
}

TEST_CASE("sources are distinct and never the sink") {
  RngStream rng(4);
  SimulationConfig cfg;
  auto g = deploy_random(cfg.deployment(), rng);
  auto s = pick_sources(g, 50, rng);
  std::sort(s.begin(), s.end());
  CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
  CHECK(std::find(s.begin(), s.end(), g.sink()) == s.end());
  CHECK_THROWS_AS(pick_sources(g, 200, rng), ConfigError);
}
