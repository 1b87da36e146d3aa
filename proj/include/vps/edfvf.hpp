#ifndef VPS_EDFVF_HPP
#define VPS_EDFVF_HPP

#include <span>
#include <vector>

#include "vps/vector_field.hpp"

namespace vps {

// Elementary divergence-free vector field x_i' = a_i x_i x^j, the atomic
// exactly-solvable piece of the splitting. Axes with j_i = -1 carry a_i = 0
// and evolve as the identity. The closure a'(j+1) = 0 holds by construction
// (it is checked by the decomposition that produces these).
class Edfvf {
 public:
  Edfvf(MultiIndex j, std::vector<double> a);

  const MultiIndex& j() const { return j_; }
  const std::vector<double>& a() const { return a_; }
  double c() const { return c_; }                      // c_j = a' j
  const std::vector<double>& r() const { return r_; }  // r_i = a_i / c (power branch only)
  bool exponential_branch() const { return exponential_; }
  std::size_t dim() const { return j_.dim(); }

  // Residual of the divergence-free closure, sum_i a_i (j_i + 1).
  double closure_residual() const;

  // x^j at the given point (domain-checked).
  double monomial_value(std::span<const double> x) const;

  // Exact flow over step h. Power branch: x_i(h) = x_i (1 - c m0 h)^{-r_i}
  // with m0 = x^j(x0); exponential branch: x_i(h) = x_i exp(a_i m0 h).
  // Throws SingularStepError when 1 - c m0 h <= 0.
  std::vector<double> flow(std::span<const double> x0, double h) const;

  // The field as a plain polynomial system (component i = a_i x^{j+e_i}),
  // usable by generic integrators.
  VectorField as_vector_field() const;

 private:
  MultiIndex j_;
  std::vector<double> a_;
  double c_;
  std::vector<double> r_;
  bool exponential_;
};

// |c| at or below this scale-relative threshold selects the exponential
// branch; the two formulas agree to ~1e-9 there (pinned by tests).
inline constexpr double kBranchThresholdRel = 1e-14;

// Splits a diagonal field into EDFVFs keyed by the divergence monomials
// j = k - e_i, consuming every term exactly once. Axes with j_i = -1 are
// excluded from their own equation (the Kronecker-delta rule for Laurent
// terms). Throws NotDiagonalError when a term of component i is constant in
// x_i, and NotDivergenceFreeError when some closure residual exceeds the
// pruning tolerance. The result is ordered lexicographically by j.
std::vector<Edfvf> decompose_diagonal(const VectorField& diag);

// Exponent vectors b (real entries) of the n-1 independent first integrals
// x^b: b_1 = j + 1, the rest filled by Gram-Schmidt of the canonical basis
// against {a, b_1}. Every b is orthogonal to a. Throws DegenerateFieldError
// when a = 0.
std::vector<std::vector<double>> integrals_basis(const Edfvf& e);

// x^b with a real exponent vector (positive-orthant evaluation).
double real_monomial_value(std::span<const double> x, std::span<const double> b);

}  // namespace vps

#endif  // VPS_EDFVF_HPP
