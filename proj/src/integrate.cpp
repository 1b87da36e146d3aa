#include "vps/integrate.hpp"

#include <cmath>

#include "vps/errors.hpp"

namespace vps {

namespace {

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool state_ok(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return norm_inf(v) <= kOverflowGuard;
}

std::uint64_t step_count(double T, double h) {
  if (h <= 0.0) throw DomainError("step size must be positive");
  if (T < 0.0) throw DomainError("horizon must be nonnegative");
  // Tiny slack so T/h that is an integer up to roundoff is not bumped up.
  return static_cast<std::uint64_t>(std::ceil(T / h - 1e-9));
}

std::uint64_t pick_record_every(std::uint64_t requested, std::uint64_t steps) {
  if (requested > 0) return requested;
  if (steps <= 1000) return 1;
  constexpr std::uint64_t kMaxStates = 1'000'000;
  return (steps + kMaxStates - 1) / kMaxStates;
}

}  // namespace

Trajectory run(const SplitScheme& scheme, std::span<const double> x0, double h, double T,
               const RunOptions& opts) {
  const std::uint64_t steps = step_count(T, h);
  const std::uint64_t record_every = pick_record_every(opts.record_every, steps);

  Trajectory traj;
  std::vector<double> x(x0.begin(), x0.end());
  traj.times.push_back(0.0);
  traj.states.push_back(x);

  auto record = [&](double t, const std::vector<double>& state) {
    if (t > traj.times.back()) {
      traj.times.push_back(t);
      traj.states.push_back(state);
    }
  };

  for (std::uint64_t k = 1; k <= steps; ++k) {
    std::vector<double> next;
    try {
      next = scheme.step(x, h, opts.step);
    } catch (const SingularStepError&) {
      traj.status = RunStatus::aborted;
      traj.abort_reason = "singular_step";
      traj.t_abort = static_cast<double>(k - 1) * h;
      record(traj.t_abort, x);
      return traj;
    } catch (const DomainError&) {
      traj.status = RunStatus::aborted;
      traj.abort_reason = "domain_error";
      traj.t_abort = static_cast<double>(k - 1) * h;
      record(traj.t_abort, x);
      return traj;
    }
    const double t = static_cast<double>(k) * h;
    if (!state_ok(next)) {
      traj.status = RunStatus::aborted;
      traj.abort_reason = "overflow";
      traj.t_abort = t;
      record(static_cast<double>(k - 1) * h, x);
      return traj;
    }
    x = std::move(next);
    traj.steps_taken = k;
    if (k % record_every == 0 || k == steps) record(t, x);
  }
  return traj;
}

SectionResult poincare(const SplitScheme& scheme, std::span<const double> x0, double h, double T,
                       const SectionSpec& sec, const RunOptions& opts) {
  if (sec.axis >= x0.size()) throw DomainError("section axis out of range");
  const std::uint64_t steps = step_count(T, h);

  SectionResult result;
  std::vector<double> x(x0.begin(), x0.end());
  auto offset = [&](const std::vector<double>& state) { return state[sec.axis] - sec.level; };
  auto wanted = [&](double g_pre, double g_post) {
    const bool up = g_pre < 0.0 && g_post > 0.0;
    const bool down = g_pre > 0.0 && g_post < 0.0;
    if (sec.direction > 0) return up;
    if (sec.direction < 0) return down;
    return up || down;
  };

  double g_prev = offset(x);
  for (std::uint64_t k = 1; k <= steps; ++k) {
    std::vector<double> next;
    try {
      next = scheme.step(x, h, opts.step);
      if (!state_ok(next)) {
        result.status = RunStatus::aborted;
        result.abort_reason = "overflow";
        result.t_abort = static_cast<double>(k) * h;
        return result;
      }
      const double g_next = offset(next);
      if (wanted(g_prev, g_next)) {
        // Bisection on the step fraction, re-running the step map from the
        // pre-crossing state.
        double lo = 0.0, hi = 1.0;
        std::vector<double> y = next;
        double alpha = 1.0, gy = g_next;
        for (int iter = 0; iter < 60 && std::abs(gy) > 1e-10; ++iter) {
          alpha = 0.5 * (lo + hi);
          y = scheme.step(x, alpha * h, opts.step);
          gy = offset(y);
          if ((gy < 0.0) == (g_prev < 0.0))
            lo = alpha;
          else
            hi = alpha;
        }
        std::vector<double> point;
        point.reserve(y.size() - 1);
        for (std::size_t i = 0; i < y.size(); ++i)
          if (i != sec.axis) point.push_back(y[i]);
        result.points.push_back(std::move(point));
        result.crossing_times.push_back((static_cast<double>(k - 1) + alpha) * h);
      }
      g_prev = g_next;
    } catch (const SingularStepError&) {
      result.status = RunStatus::aborted;
      result.abort_reason = "singular_step";
      result.t_abort = static_cast<double>(k - 1) * h;
      return result;
    } catch (const DomainError&) {
      result.status = RunStatus::aborted;
      result.abort_reason = "domain_error";
      result.t_abort = static_cast<double>(k - 1) * h;
      return result;
    }
    x = std::move(next);
  }
  return result;
}

}  // namespace vps
