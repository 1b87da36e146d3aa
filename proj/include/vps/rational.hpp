#ifndef VPS_RATIONAL_HPP
#define VPS_RATIONAL_HPP

#include <compare>
#include <cstdint>
#include <numeric>
#include <string>

#include "vps/errors.hpp"

namespace vps {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("rational addition overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("rational multiplication overflow");
  return r;
}

}  // namespace detail

// Exact rational with a normalized representation: lowest terms, den > 0.
// Exponent arithmetic never leaves this type, so monomial grouping is exact.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit from integers
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator-(const Rational& x) { return raw(-x.num_, x.den_); }

  friend Rational operator+(const Rational& x, const Rational& y) {
    using detail::checked_add;
    using detail::checked_mul;
    return Rational(checked_add(checked_mul(x.num_, y.den_), checked_mul(y.num_, x.den_)),
                    checked_mul(x.den_, y.den_));
  }
  friend Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }
  friend Rational operator*(const Rational& x, const Rational& y) {
    return Rational(detail::checked_mul(x.num_, y.num_), detail::checked_mul(x.den_, y.den_));
  }

  friend bool operator==(const Rational& x, const Rational& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
    // Exact comparison via cross multiplication on the normalized pairs.
    return detail::checked_mul(x.num_, y.den_) <=> detail::checked_mul(y.num_, x.den_);
  }

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Parses "n" or "p/q". Rejects q = 0 and malformed text.
  static Rational parse(const std::string& s);

 private:
  static Rational raw(std::int64_t n, std::int64_t d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }

  void normalize() {
    if (den_ == 0) throw DomainError("rational with zero denominator");
    if (den_ < 0) {
      num_ = detail::checked_mul(num_, -1);
      den_ = detail::checked_mul(den_, -1);
    }
    const std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline Rational Rational::parse(const std::string& s) {
  const auto slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const std::int64_t n = std::stoll(s, &used);
      if (used != s.size()) throw DomainError("malformed rational: " + s);
      return Rational(n);
    }
    const std::int64_t p = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw DomainError("malformed rational: " + s);
    const std::string den_part = s.substr(slash + 1);
    const std::int64_t q = std::stoll(den_part, &used);
    if (used != den_part.size()) throw DomainError("malformed rational: " + s);
    return Rational(p, q);
  } catch (const std::invalid_argument&) {
    throw DomainError("malformed rational: " + s);
  } catch (const std::out_of_range&) {
    throw OverflowError("rational out of range: " + s);
  }
}

}  // namespace vps

#endif  // VPS_RATIONAL_HPP
