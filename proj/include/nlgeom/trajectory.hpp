#pragma once

#include "nlgeom/state.hpp"

#include <map>
#include <string>
#include <vector>

namespace nlgeom {

enum class StopReason { completed, target_reached, max_speed, barrier_margin, aborted };

const char* to_string(StopReason r);

struct Termination {
  StopReason reason = StopReason::completed;
  double time = 0.0;
  std::string message;
};

/// Time-stamped states with optional per-sample channels.
///
/// `accelerations`, when non-empty, holds the acceleration the generating
/// system produced at each accepted state; retiming transforms it alongside
/// the velocities so residual checks need no numerical differentiation.
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<Vector> accelerations;
  std::map<std::string, std::vector<double>> diagnostics;
  Termination termination;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  std::size_t dim() const { return states.empty() ? 0 : states.front().dim(); }
  bool aborted() const { return termination.reason == StopReason::aborted; }

  /// Throws ValidationError when times are not strictly increasing, state
  /// dimensions differ, or a channel length disagrees with `times`.
  void validate() const;

  /// Concatenates `tail` after this trajectory. The first sample of `tail`
  /// is dropped when it repeats the last time stamp.
  Trajectory joined(const Trajectory& tail) const;
};

}  // namespace nlgeom
