#ifndef VPS_VECTOR_FIELD_HPP
#define VPS_VECTOR_FIELD_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "vps/polynomial.hpp"

namespace vps {

// System x' = f(x) with polynomial components. Divergence-freeness is a
// checked property of consumers, not a constructor requirement.
class VectorField {
 public:
  explicit VectorField(std::size_t dim)
      : components_(dim, SparsePolynomial(dim)) {}
  explicit VectorField(std::vector<SparsePolynomial> components);

  std::size_t dim() const { return components_.size(); }
  const SparsePolynomial& component(std::size_t i) const { return components_[i]; }
  const std::vector<SparsePolynomial>& components() const { return components_; }

  std::vector<double> evaluate(std::span<const double> x) const;

  friend bool operator==(const VectorField& a, const VectorField& b) = default;

 private:
  std::vector<SparsePolynomial> components_;
};

// sum_i d f_i / d x_i, grouped by exact exponent keys. Per-monomial sums with
// |sum| <= 1e-12 * max |contributing coefficient * exponent| are pruned, so a
// divergence-free field in exact coefficients yields the zero polynomial.
SparsePolynomial divergence(const VectorField& f);

// Relative pruning factor used by `divergence` (tau_div).
inline constexpr double kDivergencePruneRel = 1e-12;

struct DiagOffdiagSplit {
  VectorField diag;
  VectorField offdiag;
};

// A term of component i belongs to the diagonal part iff it depends on x_i.
// diag + offdiag reproduces f with identical keys and coefficients.
DiagOffdiagSplit diag_offdiag_split(const VectorField& f);

// alpha * f + beta * g, component-wise.
VectorField linear_combination(double alpha, const VectorField& f, double beta,
                               const VectorField& g);

// Number of coefficients of one component of a homogeneous polynomial field:
// binomial(n + d - 1, d). Throws OverflowError when it exceeds 64 bits.
std::uint64_t coefficient_count(int n, int d);

}  // namespace vps

#endif  // VPS_VECTOR_FIELD_HPP
