#ifndef VPS_MULTI_INDEX_HPP
#define VPS_MULTI_INDEX_HPP

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "vps/rational.hpp"

namespace vps {

// Exponent vector of a monomial x^j, with exact rational entries.
// Lexicographic ordering makes it usable as an ordered-map key, which fixes
// the canonical term order everywhere in the library.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t dim) : exps_(dim) {}
  explicit MultiIndex(std::vector<Rational> exps) : exps_(std::move(exps)) {}
  MultiIndex(std::initializer_list<Rational> exps) : exps_(exps) {}

  std::size_t dim() const { return exps_.size(); }
  const Rational& operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<Rational>& exps() const { return exps_; }

  bool is_zero() const {
    for (const auto& e : exps_)
      if (!e.is_zero()) return false;
    return true;
  }

  // |j| = sum of the entries.
  Rational degree() const {
    Rational d;
    for (const auto& e : exps_) d = d + e;
    return d;
  }

  MultiIndex plus(std::size_t axis, const Rational& delta) const {
    MultiIndex r = *this;
    r.exps_[axis] = r.exps_[axis] + delta;
    return r;
  }

  // j + 1 (all-ones shift), as doubles; the first-integral exponent.
  std::vector<double> plus_one_real() const {
    std::vector<double> r(dim());
    for (std::size_t i = 0; i < dim(); ++i) r[i] = exps_[i].to_double() + 1.0;
    return r;
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) = default;
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    const std::size_t n = a.dim() < b.dim() ? a.dim() : b.dim();
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = a.exps_[i] <=> b.exps_[i];
      if (c != std::strong_ordering::equal) return c;
    }
    return a.dim() <=> b.dim();
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < exps_.size(); ++i) {
      if (i) s += ",";
      s += exps_[i].to_string();
    }
    s += ")";
    return s;
  }

  static MultiIndex unit(std::size_t dim, std::size_t axis) {
    MultiIndex r(dim);
    r.exps_[axis] = Rational(1);
    return r;
  }

 private:
  std::vector<Rational> exps_;
};

}  // namespace vps

#endif  // VPS_MULTI_INDEX_HPP
