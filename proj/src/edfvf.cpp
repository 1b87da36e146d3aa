#include "vps/edfvf.hpp"

#include <cmath>
#include <set>

#include "vps/errors.hpp"

namespace vps {

namespace {

const Rational kMinusOne(-1);

double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Edfvf::Edfvf(MultiIndex j, std::vector<double> a) : j_(std::move(j)), a_(std::move(a)) {
  if (a_.size() != j_.dim()) throw DomainError("edfvf coefficient dimension mismatch");
  double j_norm1 = 0.0;
  c_ = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) {
    if (j_[i] == kMinusOne && a_[i] != 0.0)
      throw DomainError("axis with exponent -1 must be frozen (a_i = 0)");
    const double ji = j_[i].to_double();
    j_norm1 += std::abs(ji);
    c_ += a_[i] * ji;
  }
  exponential_ = std::abs(c_) <= kBranchThresholdRel * (norm1(a_) * j_norm1 + 1.0);
  if (!exponential_) {
    r_.resize(a_.size());
    for (std::size_t i = 0; i < a_.size(); ++i) r_[i] = a_[i] / c_;
  }
}

double Edfvf::closure_residual() const {
  double s = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) s += a_[i] * (j_[i].to_double() + 1.0);
  return s;
}

double Edfvf::monomial_value(std::span<const double> x) const {
  double m = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) m *= pow_rational(x[i], j_[i]);
  return m;
}

std::vector<double> Edfvf::flow(std::span<const double> x0, double h) const {
  if (x0.size() != dim()) throw DomainError("flow initial point dimension mismatch");
  std::vector<double> x(x0.begin(), x0.end());
  const double m0 = monomial_value(x0);
  if (exponential_) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (a_[i] != 0.0) x[i] *= std::exp(a_[i] * m0 * h);
    return x;
  }
  const double z = c_ * m0 * h;
  if (z >= 1.0) throw SingularStepError(1.0 / (c_ * m0), j_.to_string());
  if (std::abs(z) >= 1e-3) {
    const double g = 1.0 - z;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (a_[i] != 0.0) x[i] *= std::pow(g, -r_[i]);
  } else {
    // For small |z| the subtraction 1 - z loses the digits that the huge
    // exponent -r_i = -a_i/c would amplify; log1p keeps them, so the power
    // branch meets the exponential branch continuously at the threshold.
    const double log_g = std::log1p(-z);
    for (std::size_t i = 0; i < x.size(); ++i)
      if (a_[i] != 0.0) x[i] *= std::exp(-r_[i] * log_g);
  }
  return x;
}

VectorField Edfvf::as_vector_field() const {
  std::vector<SparsePolynomial> comps;
  comps.reserve(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (a_[i] == 0.0) {
      comps.emplace_back(dim());
    } else {
      comps.push_back(monomial(j_.plus(i, Rational(1)), a_[i]));
    }
  }
  return VectorField(std::move(comps));
}

std::vector<Edfvf> decompose_diagonal(const VectorField& diag) {
  const std::size_t n = diag.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [k, coef] : diag.component(i).terms())
      if (k[i].is_zero())
        throw NotDiagonalError("component " + std::to_string(i + 1) +
                               " has a term independent of its own variable: " + k.to_string());

  // Divergence-candidate lattice: j = k - e_i over all terms of all components.
  std::set<MultiIndex> candidates;
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [k, coef] : diag.component(i).terms())
      candidates.insert(k.plus(i, kMinusOne));

  std::vector<Edfvf> out;
  out.reserve(candidates.size());
  for (const MultiIndex& j : candidates) {
    std::vector<double> a(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      // An axis with j_i = -1 cannot be fed by its own equation; the
      // feeding term x^{j+e_i} would be off-diagonal.
      if (j[i] == kMinusOne) continue;
      a[i] = diag.component(i).coefficient(j.plus(i, Rational(1)));
    }
    Edfvf e(j, std::move(a));
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      scale = std::max(scale, std::abs(e.a()[i] * (j[i].to_double() + 1.0)));
    const double residual = e.closure_residual();
    if (std::abs(residual) > kDivergencePruneRel * scale)
      throw NotDivergenceFreeError(j.to_string(), residual);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::vector<double>> integrals_basis(const Edfvf& e) {
  const std::size_t n = e.dim();
  const std::vector<double>& a = e.a();
  const double a_norm = norm2(a);
  if (a_norm == 0.0) throw DegenerateFieldError("a = 0 has no integral basis");
  if (n == 1) return {};

  std::vector<std::vector<double>> integrals;
  integrals.reserve(n - 1);

  // Orthonormal working set spanning {a} plus the accepted integrals.
  std::vector<std::vector<double>> ortho;
  auto push_ortho = [&](std::vector<double> v) {
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
    ortho.push_back(std::move(v));
  };
  auto project_out = [&](std::vector<double>& v) {
    for (const auto& q : ortho) {
      const double p = dot(v, q);
      for (std::size_t i = 0; i < n; ++i) v[i] -= p * q[i];
    }
  };
  push_ortho(a);

  std::vector<double> b1 = e.j().plus_one_real();
  if (norm2(b1) > 0.0) {
    integrals.push_back(b1);
    project_out(b1);  // remove the closure-residual component along a
    if (norm2(b1) > 1e-10) push_ortho(std::move(b1));
  }

  for (std::size_t k = 0; k < n && integrals.size() < n - 1; ++k) {
    std::vector<double> v(n, 0.0);
    v[k] = 1.0;
    project_out(v);
    const double nv = norm2(v);
    if (nv <= 1e-10) continue;
    for (double& x : v) x /= nv;
    integrals.push_back(v);
    push_ortho(std::move(v));
  }
  return integrals;
}

double real_monomial_value(std::span<const double> x, std::span<const double> b) {
  double m = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = b[i];
    if (e == 0.0) continue;
    if (x[i] == 0.0 && e < 0.0) throw DomainError("pole: zero base with negative exponent");
    if (x[i] < 0.0 && e != std::rint(e))
      throw DomainError("non-integer exponent requires a positive base");
    m *= std::pow(x[i], e);
  }
  return m;
}

}  // namespace vps
