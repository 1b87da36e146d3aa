#ifndef VPS_SCHEME_HPP
#define VPS_SCHEME_HPP

#include <span>
#include <variant>
#include <vector>

#include "vps/edfvf.hpp"

namespace vps {

// One canonical shear: x_axis' = g(x) with g independent of x_axis.
// Its exact flow x_axis += h g(x0) has a unit-triangular Jacobian.
struct Shear {
  std::size_t axis;
  SparsePolynomial g;
};

// Validated off-diagonal field: component i independent of x_i.
class ShearField {
 public:
  explicit ShearField(const VectorField& offdiag);

  std::size_t dim() const { return field_.dim(); }
  const VectorField& field() const { return field_; }

  // Shears for the nonzero components, in ascending axis order.
  std::vector<Shear> shears() const;

 private:
  VectorField field_;
};

std::vector<double> shear_flow(const Shear& s, std::span<const double> x0, double h);

using FlowMap = std::variant<Edfvf, Shear>;

// Applies one constituent exact flow.
std::vector<double> apply_flow(const FlowMap& flow, std::span<const double> x0, double h);

// Generator of a constituent flow as a vector field (for completeness checks).
VectorField flow_generator(const FlowMap& flow);

struct StepOptions {
  // When the singular-time guard trips mid-composition, retry the whole step
  // as two recursive half steps instead of raising SingularStepError.
  bool substep_on_singular = false;
  int max_substep_depth = 40;
};

// Ordered list of exactly solvable flows (EDFVFs in lexicographic j-order,
// then shears by ascending axis) with a composition rule.
class SplitScheme {
 public:
  SplitScheme(std::vector<FlowMap> flows, int order);

  int order() const { return order_; }
  const std::vector<FlowMap>& flows() const { return flows_; }
  std::size_t flow_count() const { return flows_.size(); }

  // One step of the composition method. Order 1 applies every flow once with
  // the full step (Lie-Trotter); order 2 applies the palindrome with half
  // steps (Strang). Volume-preserving by construction.
  std::vector<double> step(std::span<const double> x0, double h,
                           const StepOptions& opts = {}) const;

 private:
  std::vector<double> step_once(std::span<const double> x0, double h) const;

  std::vector<FlowMap> flows_;
  int order_;
};

// Splits f into diagonal EDFVFs plus canonical shears and fixes the flow
// order. Propagates NotDivergenceFreeError from the decomposition.
SplitScheme build_scheme(const VectorField& f, int order);

}  // namespace vps

#endif  // VPS_SCHEME_HPP
