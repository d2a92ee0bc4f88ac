#pragma once

#include "tornado/types.hpp"

#include <vector>

namespace tornado {

/// Nodal velocity and pressure at time level k.
struct FieldState {
  int step = 0;
  double time = 0.0;
  std::vector<Vec3> velocity;
  std::vector<double> pressure;

  static FieldState zeros(std::size_t num_nodes, int step = 0, double time = 0.0) {
    FieldState s;
    s.step = step;
    s.time = time;
    s.velocity.assign(num_nodes, Vec3::Zero());
    s.pressure.assign(num_nodes, 0.0);
    return s;
  }
};

} // namespace tornado
