#pragma once

#include <initializer_list>
#include <vector>

#include "daaca/core.hpp"
#include "daaca/simulator.hpp"

namespace testsupport {

inline daaca::NetworkGraph make_graph(std::initializer_list<daaca::Position> pts, double range = 10.0,
                                      double e_init = 10.0, daaca::NodeId sink = 0) {
  return daaca::NetworkGraph(std::vector<daaca::Position>(pts), sink, range, 100.0, 100.0, e_init);
}

// Config for hand-built graphs; control traffic still follows the usual rules.
inline daaca::SimulationConfig config_for(daaca::Algorithm a) {
  daaca::SimulationConfig c;
  c.algorithm = a;
  c.sources = 1;
  return c;
}

}  // namespace testsupport
