#include "vps/rk45.hpp"

#include <algorithm>
#include <cmath>

#include "vps/errors.hpp"

namespace vps {

namespace {

// Dormand-Prince 5(4) tableau (the ode45 pair), FSAL.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
// b(5th) - b(4th): the embedded error weights.
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

Trajectory rk45(const OdeRhs& rhs, std::size_t dim, std::span<const double> x0, double T,
                const RkOptions& opts) {
  if (opts.rel_tol <= 0 || opts.abs_tol <= 0 || opts.h_min <= 0)
    throw DomainError("rk45 tolerances and h_min must be positive");
  if (x0.size() != dim) throw DomainError("rk45 initial point dimension mismatch");

  Trajectory traj;
  std::vector<double> x(x0.begin(), x0.end());
  traj.times.push_back(0.0);
  traj.states.push_back(x);

  const std::uint64_t record_every = opts.record_every == 0 ? 1 : opts.record_every;
  auto abort = [&](const char* reason, double t) {
    traj.status = RunStatus::aborted;
    traj.abort_reason = reason;
    traj.t_abort = t;
    if (t > traj.times.back() && all_finite(x) && norm_inf(x) <= kOverflowGuard) {
      traj.times.push_back(t);
      traj.states.push_back(x);
    }
  };

  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  std::vector<double> xt(dim), x5(dim), err(dim);

  double t = 0.0;
  try {
    rhs(x, k1);
  } catch (const DomainError&) {
    abort("domain_error", 0.0);
    return traj;
  }

  double h = opts.h_init;
  if (h <= 0.0) {
    // Crude |x|/|dx/dt| heuristic, clamped into the horizon.
    const double nx = norm_inf(x), nf = norm_inf(k1);
    h = 0.01 * (nx + 1.0) / (nf + 1.0);
    h = std::min(h, T);
  }
  h = std::max(h, opts.h_min);

  double err_prev = 1.0;
  std::uint64_t attempts = 0;
  while (t < T) {
    if (attempts >= opts.max_steps) {
      abort("max_steps", t);
      return traj;
    }
    ++attempts;
    const bool last = t + h >= T;
    if (last) h = T - t;

    bool eval_failed = false;
    try {
      for (std::size_t i = 0; i < dim; ++i) xt[i] = x[i] + h * kA21 * k1[i];
      rhs(xt, k2);
      for (std::size_t i = 0; i < dim; ++i) xt[i] = x[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
      rhs(xt, k3);
      for (std::size_t i = 0; i < dim; ++i)
        xt[i] = x[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
      rhs(xt, k4);
      for (std::size_t i = 0; i < dim; ++i)
        xt[i] = x[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
      rhs(xt, k5);
      for (std::size_t i = 0; i < dim; ++i)
        xt[i] = x[i] + h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] +
                            kA65 * k5[i]);
      rhs(xt, k6);
      for (std::size_t i = 0; i < dim; ++i)
        x5[i] = x[i] + h * (kB1 * k1[i] + kB3 * k3[i] + kB4 * k4[i] + kB5 * k5[i] + kB6 * k6[i]);
      rhs(x5, k7);
    } catch (const DomainError&) {
      eval_failed = true;
    }

    double scaled_err = 0.0;
    if (eval_failed || !all_finite(x5)) {
      scaled_err = 1e8;  // force rejection and shrink
    } else {
      for (std::size_t i = 0; i < dim; ++i) {
        err[i] = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] + kE6 * k6[i] +
                      kE7 * k7[i]);
        const double tol = opts.abs_tol + opts.rel_tol * std::max(std::abs(x[i]), std::abs(x5[i]));
        scaled_err = std::max(scaled_err, std::abs(err[i]) / tol);
      }
      if (!std::isfinite(scaled_err)) scaled_err = 1e8;
    }

    if (scaled_err <= 1.0) {
      t = last ? T : t + h;
      x = x5;
      std::swap(k1, k7);
      ++traj.steps_taken;
      if (norm_inf(x) > kOverflowGuard) {
        abort("overflow", t);
        return traj;
      }
      if (traj.steps_taken % record_every == 0 || t >= T) {
        traj.times.push_back(t);
        traj.states.push_back(x);
      }
      const double e = std::max(scaled_err, 1e-10);
      double factor = 0.9 * std::pow(e, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
      factor = std::clamp(factor, 0.2, 5.0);
      err_prev = e;
      h *= factor;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(scaled_err, -0.2));
    }
    if (h < opts.h_min && t < T) {
      abort("step_underflow", t);
      return traj;
    }
  }
  return traj;
}

Trajectory rk45(const VectorField& f, std::span<const double> x0, double T,
                const RkOptions& opts) {
  OdeRhs rhs = [&f](std::span<const double> x, std::span<double> dxdt) {
    const auto v = f.evaluate(x);
    std::copy(v.begin(), v.end(), dxdt.begin());
  };
  return rk45(rhs, f.dim(), x0, T, opts);
}

}  // namespace vps
