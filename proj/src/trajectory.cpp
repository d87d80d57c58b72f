#include "nlgeom/trajectory.hpp"

#include "nlgeom/errors.hpp"

namespace nlgeom {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::completed: return "completed";
    case StopReason::target_reached: return "target_reached";
    case StopReason::max_speed: return "max_speed";
    case StopReason::barrier_margin: return "barrier_margin";
    case StopReason::aborted: return "aborted";
  }
  return "unknown";
}

void Trajectory::validate() const {
  if (states.size() != times.size()) throw ValidationError("trajectory has mismatched times/states lengths");
  if (!accelerations.empty() && accelerations.size() != times.size())
    throw ValidationError("trajectory acceleration channel length mismatch");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw ValidationError("trajectory times must be strictly increasing");
  for (const auto& s : states)
    if (s.dim() != dim() || s.xd.size() != s.x.size())
      throw ValidationError("trajectory states are not dimensionally uniform");
  for (const auto& [name, channel] : diagnostics)
    if (channel.size() != times.size()) throw ValidationError("diagnostic channel '" + name + "' length mismatch");
}

Trajectory Trajectory::joined(const Trajectory& tail) const {
  Trajectory out = *this;
  std::size_t start = 0;
  if (!empty() && !tail.empty() && tail.times.front() == times.back()) start = 1;
  const bool keep_acc = !accelerations.empty() && !tail.accelerations.empty();
  if (!keep_acc) out.accelerations.clear();
  for (std::size_t k = start; k < tail.size(); ++k) {
    out.times.push_back(tail.times[k]);
    out.states.push_back(tail.states[k]);
    if (keep_acc) out.accelerations.push_back(tail.accelerations[k]);
  }
  for (auto it = out.diagnostics.begin(); it != out.diagnostics.end();) {
    auto other = tail.diagnostics.find(it->first);
    if (other == tail.diagnostics.end()) {
      it = out.diagnostics.erase(it);
      continue;
    }
    it->second.insert(it->second.end(), other->second.begin() + static_cast<std::ptrdiff_t>(start), other->second.end());
    ++it;
  }
  out.termination = tail.termination;
  return out;
}

}  // namespace nlgeom
