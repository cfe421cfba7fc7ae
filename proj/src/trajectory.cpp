#include "lagsim/trajectory.hpp"

#include <algorithm>

namespace lagsim {

std::vector<PathPoint> merged_path(const Trajectory& traj) {
  std::vector<PathPoint> pts;
  pts.reserve(traj.samples.size() + traj.fixed_count);
  std::size_t si = 0;
  std::size_t ei = 0;
  const auto& samples = traj.samples;
  const auto& events = traj.events;
  while (si < samples.size() || ei < events.size()) {
    // skip rejected proposals: they do not move the path
    while (ei < events.size() && events[ei].kind != EventKind::fixed) ++ei;
    const bool take_sample =
        ei >= events.size() ||
        (si < samples.size() && samples[si].t <= events[ei].t);
    if (take_sample && si < samples.size()) {
      pts.push_back({samples[si].t, samples[si].x, samples[si].x, false, 0.0});
      ++si;
    } else if (ei < events.size()) {
      const JumpEvent& e = events[ei];
      pts.push_back({e.t, e.x_before, e.x_after, true, e.alpha});
      ++ei;
    } else {
      break;
    }
  }
  return pts;
}

}  // namespace lagsim
