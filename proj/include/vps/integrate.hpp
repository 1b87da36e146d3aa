#ifndef VPS_INTEGRATE_HPP
#define VPS_INTEGRATE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vps/scheme.hpp"

namespace vps {

enum class RunStatus { completed, aborted };

// Recorded time series of one integration. Failures are encoded in the
// status so batch sweeps never crash.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  RunStatus status = RunStatus::completed;
  std::string abort_reason;  // "singular_step" | "domain_error" | "overflow" |
                             // "step_underflow" | "max_steps" (empty if completed)
  double t_abort = 0.0;
  std::uint64_t steps_taken = 0;

  const std::vector<double>& final_state() const { return states.back(); }
  double final_time() const { return times.back(); }
  bool completed() const { return status == RunStatus::completed; }
};

// States with |x|_inf beyond this are treated as divergence and abort the run.
inline constexpr double kOverflowGuard = 1e12;

// record_every = 0 picks 1 for runs of at most 1000 steps, otherwise the
// smallest stride keeping at most 1e6 recorded states.
struct RunOptions {
  std::uint64_t record_every = 0;
  StepOptions step;
};

// Fixed-step trajectory over ceil(T/h) steps of the split scheme, recording
// every record_every-th state plus the final one.
Trajectory run(const SplitScheme& scheme, std::span<const double> x0, double h, double T,
               const RunOptions& opts = {});

// Planar section x_axis = level with a crossing direction filter.
struct SectionSpec {
  std::size_t axis = 0;  // coordinate index, 0-based
  double level = 0.0;
  int direction = +1;  // +1, -1, or 0 for both
};

struct SectionResult {
  // Remaining n-1 coordinates of each refined crossing, in trajectory order.
  std::vector<std::vector<double>> points;
  std::vector<double> crossing_times;
  RunStatus status = RunStatus::completed;
  std::string abort_reason;
  double t_abort = 0.0;
};

// Detects sign changes of x_axis - level between consecutive fixed steps and
// refines each crossing by bisection on the step fraction, re-running the
// step map from the pre-crossing state until |x_axis - level| <= 1e-10.
SectionResult poincare(const SplitScheme& scheme, std::span<const double> x0, double h, double T,
                       const SectionSpec& sec, const RunOptions& opts = {});

}  // namespace vps

#endif  // VPS_INTEGRATE_HPP
