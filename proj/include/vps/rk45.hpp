#ifndef VPS_RK45_HPP
#define VPS_RK45_HPP

#include <functional>
#include <span>

#include "vps/integrate.hpp"
#include "vps/vector_field.hpp"

namespace vps {

// Dormand-Prince 5(4) options. Mixed component-wise tolerance in the max
// norm; PI step-size controller with safety 0.9 and growth clamp [0.2, 5].
struct RkOptions {
  double rel_tol = 1e-3;
  double abs_tol = 1e-6;
  double h_init = 0.0;  // <= 0 selects an automatic initial step
  double h_min = 1e-12;
  std::uint64_t max_steps = 10'000'000;
  std::uint64_t record_every = 0;  // 0 = record every accepted step

  static RkOptions tol(double t) {
    RkOptions o;
    o.rel_tol = t;
    o.abs_tol = t;
    return o;
  }
};

using OdeRhs = std::function<void(std::span<const double> x, std::span<double> dxdt)>;

// Embedded Dormand-Prince 5(4) reference integrator. Abort reasons:
// "step_underflow" when the controller requires h < h_min, "max_steps",
// "domain_error" from field evaluation, "overflow" past the guard.
Trajectory rk45(const OdeRhs& rhs, std::size_t dim, std::span<const double> x0, double T,
                const RkOptions& opts);

Trajectory rk45(const VectorField& f, std::span<const double> x0, double T,
                const RkOptions& opts);

}  // namespace vps

#endif  // VPS_RK45_HPP
