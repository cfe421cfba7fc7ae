#ifndef LAGSIM_TRAJECTORY_HPP
#define LAGSIM_TRAJECTORY_HPP

#include <cstdint>
#include <vector>

namespace lagsim {

enum class EventKind { proposed_rejected, fixed };

struct JumpEvent {
  double t;
  EventKind kind;
  double alpha;     // proposed effect (applied only when fixed)
  double x_before;
  double x_after;   // == x_before for rejected proposals
};

struct Sample {
  double t;
  double x;
};

/// One realised path: fixed/rejected proposal log plus the lag sampled
/// on the output grid (t = 0 and the final time always included).
/// Immutable once emitted by the simulator.
struct Trajectory {
  std::vector<JumpEvent> events;
  std::vector<Sample> samples;
  double x0 = 0.0;
  double horizon = 0.0;
  double t_final = 0.0;
  double x_final = 0.0;
  std::uint64_t scenario_hash = 0;
  std::uint64_t seed = 0;
  std::uint64_t proposal_count = 0;
  std::uint64_t fixed_count = 0;
  bool budget_exceeded = false;
  bool rejected_logged = true;  // false when only fixed events were kept
};

/// Chronological path point; jumps carry distinct left/right values.
struct PathPoint {
  double t;
  double x_left;
  double x_right;
  bool is_jump;
  double alpha;  // jump size when is_jump
};

/// Samples and fixed jumps merged into one ordered walkable view.
/// Between consecutive points the path is the recorded straight segment
/// (exact for constant and piecewise-constant speeds).
std::vector<PathPoint> merged_path(const Trajectory& traj);

}  // namespace lagsim

#endif  // LAGSIM_TRAJECTORY_HPP
