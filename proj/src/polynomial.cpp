#include "vps/polynomial.hpp"

#include <cmath>
#include <cstdlib>

#include "vps/errors.hpp"

namespace vps {

namespace {

double pow_integer(double x, std::int64_t e) {
  if (e < 0) {
    if (x == 0.0) throw DomainError("pole: zero base with negative exponent");
    return 1.0 / pow_integer(x, -e);
  }
  double result = 1.0;
  double base = x;
  std::uint64_t n = static_cast<std::uint64_t>(e);
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

}  // namespace

double pow_rational(double x, const Rational& e) {
  if (e.is_zero()) return 1.0;
  if (e.is_integer()) return pow_integer(x, e.num());
  if (x <= 0.0) throw DomainError("non-integer exponent requires a positive base");
  return std::pow(x, e.to_double());
}

SparsePolynomial SparsePolynomial::from_terms(
    std::size_t dim, const std::vector<std::pair<MultiIndex, double>>& terms) {
  SparsePolynomial p(dim);
  for (const auto& [j, coef] : terms) {
    if (j.dim() != dim) throw DomainError("term exponent dimension mismatch");
    const auto it = p.terms_.find(j);
    const double merged = (it == p.terms_.end() ? 0.0 : it->second) + coef;
    if (merged == 0.0) {
      if (it != p.terms_.end()) p.terms_.erase(it);
    } else if (it == p.terms_.end()) {
      p.terms_.emplace(j, merged);
    } else {
      it->second = merged;
    }
  }
  return p;
}

double SparsePolynomial::coefficient(const MultiIndex& j) const {
  const auto it = terms_.find(j);
  return it == terms_.end() ? 0.0 : it->second;
}

double SparsePolynomial::evaluate(std::span<const double> x) const {
  if (x.size() != dim_) throw DomainError("evaluation point dimension mismatch");
  double sum = 0.0;
  for (const auto& [j, coef] : terms_) {
    double v = coef;
    for (std::size_t i = 0; i < dim_; ++i) v *= pow_rational(x[i], j[i]);
    sum += v;
  }
  return sum;
}

SparsePolynomial SparsePolynomial::partial(std::size_t axis) const {
  std::vector<std::pair<MultiIndex, double>> out;
  out.reserve(terms_.size());
  for (const auto& [j, coef] : terms_) {
    const Rational& e = j[axis];
    if (e.is_zero()) continue;
    out.emplace_back(j.plus(axis, Rational(-1)), coef * e.to_double());
  }
  return from_terms(dim_, out);
}

bool SparsePolynomial::independent_of(std::size_t axis) const {
  for (const auto& [j, coef] : terms_)
    if (!j[axis].is_zero()) return false;
  return true;
}

SparsePolynomial operator+(const SparsePolynomial& a, const SparsePolynomial& b) {
  if (a.dim() != b.dim()) throw DomainError("polynomial dimension mismatch");
  std::vector<std::pair<MultiIndex, double>> out;
  out.reserve(a.terms_.size() + b.terms_.size());
  for (const auto& t : a.terms_) out.push_back(t);
  for (const auto& t : b.terms_) out.push_back(t);
  return SparsePolynomial::from_terms(a.dim(), out);
}

SparsePolynomial operator-(const SparsePolynomial& a, const SparsePolynomial& b) {
  return a + (-1.0 * b);
}

SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
  if (a.dim() != b.dim()) throw DomainError("polynomial dimension mismatch");
  std::vector<std::pair<MultiIndex, double>> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ja, ca] : a.terms_) {
    for (const auto& [jb, cb] : b.terms_) {
      std::vector<Rational> exps(a.dim());
      for (std::size_t i = 0; i < a.dim(); ++i) exps[i] = ja[i] + jb[i];
      out.emplace_back(MultiIndex(std::move(exps)), ca * cb);
    }
  }
  return SparsePolynomial::from_terms(a.dim(), out);
}

SparsePolynomial operator*(double s, const SparsePolynomial& p) {
  std::vector<std::pair<MultiIndex, double>> out;
  out.reserve(p.terms_.size());
  for (const auto& [j, coef] : p.terms_) out.emplace_back(j, s * coef);
  return SparsePolynomial::from_terms(p.dim(), out);
}

std::string SparsePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [j, coef] : terms_) {
    if (!s.empty()) s += " + ";
    s += std::to_string(coef) + "*x^" + j.to_string();
  }
  return s;
}

SparsePolynomial monomial(MultiIndex j, double coef) {
  const std::size_t dim = j.dim();
  return SparsePolynomial::from_terms(dim, {{std::move(j), coef}});
}

SparsePolynomial axis_monomial(std::size_t dim, std::size_t axis, const Rational& e, double coef) {
  MultiIndex j(dim);
  return monomial(j.plus(axis, e), coef);
}

SparsePolynomial constant(std::size_t dim, double value) {
  return monomial(MultiIndex(dim), value);
}

}  // namespace vps
