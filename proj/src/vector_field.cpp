#include "vps/vector_field.hpp"

#include <cmath>
#include <map>

#include "vps/errors.hpp"

namespace vps {

VectorField::VectorField(std::vector<SparsePolynomial> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw DomainError("vector field needs at least one component");
  for (const auto& c : components_)
    if (c.dim() != components_.size())
      throw DomainError("vector field component dimension mismatch");
}

std::vector<double> VectorField::evaluate(std::span<const double> x) const {
  std::vector<double> out(dim());
  for (std::size_t i = 0; i < dim(); ++i) out[i] = components_[i].evaluate(x);
  return out;
}

SparsePolynomial divergence(const VectorField& f) {
  const std::size_t n = f.dim();
  // Per-monomial running sum and the largest single contribution |a * l_i|,
  // which sets the pruning scale.
  std::map<MultiIndex, std::pair<double, double>> acc;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [l, a] : f.component(i).terms()) {
      const Rational& e = l[i];
      if (e.is_zero()) continue;
      const double contrib = a * e.to_double();
      auto& [sum, scale] = acc[l.plus(i, Rational(-1))];
      sum += contrib;
      scale = std::max(scale, std::abs(contrib));
    }
  }
  std::vector<std::pair<MultiIndex, double>> kept;
  for (const auto& [j, sum_scale] : acc) {
    const auto& [sum, scale] = sum_scale;
    if (std::abs(sum) > kDivergencePruneRel * scale) kept.emplace_back(j, sum);
  }
  return SparsePolynomial::from_terms(n, kept);
}

DiagOffdiagSplit diag_offdiag_split(const VectorField& f) {
  const std::size_t n = f.dim();
  std::vector<SparsePolynomial> diag;
  std::vector<SparsePolynomial> offdiag;
  diag.reserve(n);
  offdiag.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<MultiIndex, double>> d, o;
    for (const auto& [k, a] : f.component(i).terms()) {
      (k[i].is_zero() ? o : d).emplace_back(k, a);
    }
    diag.push_back(SparsePolynomial::from_terms(n, d));
    offdiag.push_back(SparsePolynomial::from_terms(n, o));
  }
  return {VectorField(std::move(diag)), VectorField(std::move(offdiag))};
}

VectorField linear_combination(double alpha, const VectorField& f, double beta,
                               const VectorField& g) {
  if (f.dim() != g.dim()) throw DomainError("vector field dimension mismatch");
  std::vector<SparsePolynomial> out;
  out.reserve(f.dim());
  for (std::size_t i = 0; i < f.dim(); ++i)
    out.push_back(alpha * f.component(i) + beta * g.component(i));
  return VectorField(std::move(out));
}

std::uint64_t coefficient_count(int n, int d) {
  if (n < 1 || d < 0) throw DomainError("coefficient_count needs n >= 1, d >= 0");
  // binomial(n + d - 1, d) with overflow-checked multiply-then-divide.
  std::uint64_t result = 1;
  for (int k = 1; k <= d; ++k) {
    const std::uint64_t factor = static_cast<std::uint64_t>(n - 1 + k);
    if (result > UINT64_MAX / factor) throw OverflowError("coefficient count exceeds 64 bits");
    result = result * factor / static_cast<std::uint64_t>(k);
  }
  return result;
}

}  // namespace vps
