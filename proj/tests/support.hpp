#ifndef VPS_TESTS_SUPPORT_HPP
#define VPS_TESTS_SUPPORT_HPP

// Shared generators and independent oracles. Everything here recomputes its
// answers from first principles so the checks do not share code paths with
// the library implementations they verify.

#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "vps/polynomial.hpp"
#include "vps/vector_field.hpp"

namespace vps_tests {

using vps::MultiIndex;
using vps::Rational;
using vps::SparsePolynomial;
using vps::VectorField;

using Term = std::pair<std::vector<Rational>, double>;

// Term-list derivative, written directly from the power rule.
inline std::vector<Term> oracle_partial(const std::vector<Term>& terms, std::size_t axis) {
  std::vector<Term> out;
  for (const auto& [exps, coef] : terms) {
    if (exps[axis].is_zero()) continue;
    auto d = exps;
    d[axis] = d[axis] - Rational(1);
    out.emplace_back(std::move(d), coef * exps[axis].to_double());
  }
  return out;
}

inline double oracle_eval(const std::vector<Term>& terms, const std::vector<double>& x) {
  double sum = 0.0;
  for (const auto& [exps, coef] : terms) {
    double v = coef;
    for (std::size_t i = 0; i < x.size(); ++i) v *= std::pow(x[i], exps[i].to_double());
    sum += v;
  }
  return sum;
}

inline SparsePolynomial to_poly(std::size_t dim, const std::vector<Term>& terms) {
  std::vector<std::pair<MultiIndex, double>> t;
  for (const auto& [exps, coef] : terms) t.emplace_back(MultiIndex(exps), coef);
  return SparsePolynomial::from_terms(dim, t);
}

// Counts monomials of exact degree d in n variables by direct enumeration.
inline std::uint64_t oracle_monomial_count(int n, int d) {
  if (n == 1) return 1;
  std::uint64_t total = 0;
  for (int first = 0; first <= d; ++first) total += oracle_monomial_count(n - 1, d - first);
  return total;
}

inline Rational random_small_rational(std::mt19937_64& rng, bool allow_fraction = true) {
  std::uniform_int_distribution<std::int64_t> num(-4, 4);
  std::uniform_int_distribution<std::int64_t> den(1, 3);
  return Rational(num(rng), allow_fraction ? den(rng) : 1);
}

inline MultiIndex random_index(std::mt19937_64& rng, std::size_t dim,
                               bool allow_fraction = true) {
  std::vector<Rational> exps(dim);
  for (auto& e : exps) e = random_small_rational(rng, allow_fraction);
  return MultiIndex(std::move(exps));
}

inline SparsePolynomial random_poly(std::mt19937_64& rng, std::size_t dim, std::size_t terms,
                                    bool allow_fraction = true) {
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::vector<std::pair<MultiIndex, double>> t;
  for (std::size_t k = 0; k < terms; ++k)
    t.emplace_back(random_index(rng, dim, allow_fraction), coef(rng));
  return SparsePolynomial::from_terms(dim, t);
}

inline std::vector<double> random_positive_point(std::mt19937_64& rng, std::size_t dim,
                                                 double lo = 0.3, double hi = 1.5) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(dim);
  for (auto& xi : x) xi = u(rng);
  return x;
}

inline double norm_inf_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace vps_tests

#endif  // VPS_TESTS_SUPPORT_HPP
