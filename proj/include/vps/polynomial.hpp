#ifndef VPS_POLYNOMIAL_HPP
#define VPS_POLYNOMIAL_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vps/multi_index.hpp"

namespace vps {

// x^e for a single variable, under the admissibility policy:
// negative exponents need x != 0, fractional exponents need x > 0,
// integer exponents allow any sign. Integer powers use repeated squaring.
double pow_rational(double x, const Rational& e);

// Sparse multivariate Laurent polynomial with exact rational exponents and
// double coefficients. Terms are kept in lexicographic key order; no zero
// coefficients are stored. Values are immutable after construction.
class SparsePolynomial {
 public:
  using TermMap = std::map<MultiIndex, double>;

  explicit SparsePolynomial(std::size_t dim) : dim_(dim) {}

  // Merges like terms; drops terms whose merged coefficient is zero.
  static SparsePolynomial from_terms(std::size_t dim,
                                     const std::vector<std::pair<MultiIndex, double>>& terms);

  std::size_t dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  // Coefficient of x^j, zero when the monomial is absent.
  double coefficient(const MultiIndex& j) const;

  // Sum over terms (in lexicographic order) of coef * prod_i x_i^{j_i}.
  double evaluate(std::span<const double> x) const;

  // Term-wise derivative along `axis`; terms constant in that variable vanish.
  SparsePolynomial partial(std::size_t axis) const;

  // True when no term has a nonzero exponent on `axis`.
  bool independent_of(std::size_t axis) const;

  friend SparsePolynomial operator+(const SparsePolynomial& a, const SparsePolynomial& b);
  friend SparsePolynomial operator-(const SparsePolynomial& a, const SparsePolynomial& b);
  friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b);
  friend SparsePolynomial operator*(double s, const SparsePolynomial& p);

  friend bool operator==(const SparsePolynomial& a, const SparsePolynomial& b) = default;

  std::string to_string() const;

 private:
  std::size_t dim_;
  TermMap terms_;
};

// Single-term polynomial c * x^j.
SparsePolynomial monomial(MultiIndex j, double coef);

// Convenience: c * x_axis^e in `dim` variables.
SparsePolynomial axis_monomial(std::size_t dim, std::size_t axis, const Rational& e, double coef);

// Constant polynomial.
SparsePolynomial constant(std::size_t dim, double value);

}  // namespace vps

#endif  // VPS_POLYNOMIAL_HPP
