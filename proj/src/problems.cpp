#include "vps/problems.hpp"

#include <cmath>

#include "vps/errors.hpp"

namespace vps {

namespace {

MultiIndex exps3(std::int64_t e1, std::int64_t e2, std::int64_t e3) {
  return MultiIndex{Rational(e1), Rational(e2), Rational(e3)};
}

MultiIndex exps2(std::int64_t e1, std::int64_t e2) {
  return MultiIndex{Rational(e1), Rational(e2)};
}

}  // namespace

VectorField build_quad_stokes(double epsilon) {
  SparsePolynomial f1 = SparsePolynomial::from_terms(
      3, {{exps3(1, 1, 0), -8.0}, {exps3(0, 0, 1), epsilon}});
  SparsePolynomial f2 = SparsePolynomial::from_terms(
      3, {{exps3(2, 0, 0), 11.0}, {exps3(0, 2, 0), 3.0}, {exps3(0, 0, 2), 1.0},
          {exps3(0, 0, 0), -3.0}});
  SparsePolynomial f3 = SparsePolynomial::from_terms(
      3, {{exps3(0, 1, 1), 2.0}, {exps3(1, 0, 0), -epsilon}});
  return VectorField({f1, f2, f3});
}

VectorField build_cubic_stokes(double alpha, double w_norm, double theta) {
  if (alpha == -1.0) throw DomainError("cubic Stokes flow needs alpha != -1");
  const double w1 = w_norm * std::sin(theta);
  const double w2 = 0.0;
  const double w3 = w_norm * std::cos(theta);
  const double strain[3] = {1.0 / (1.0 + alpha), alpha / (1.0 + alpha), -1.0};

  std::vector<SparsePolynomial> var;
  for (std::size_t i = 0; i < 3; ++i) var.push_back(axis_monomial(3, i, Rational(1), 1.0));

  const SparsePolynomial r2 = var[0] * var[0] + var[1] * var[1] + var[2] * var[2];
  const SparsePolynomial quad_form =
      strain[0] * (var[0] * var[0]) + strain[1] * (var[1] * var[1]) + strain[2] * (var[2] * var[2]);
  const SparsePolynomial radial = 5.0 * r2 + constant(3, -3.0);

  const SparsePolynomial cross[3] = {
      w2 * var[2] + (-w3) * var[1],
      w3 * var[0] + (-w1) * var[2],
      w1 * var[1] + (-w2) * var[0],
  };

  std::vector<SparsePolynomial> comps;
  comps.reserve(3);
  for (std::size_t i = 0; i < 3; ++i)
    comps.push_back(0.5 * strain[i] * (radial * var[i]) - var[i] * quad_form + 0.5 * cross[i]);

  VectorField field(std::move(comps));
  if (!divergence(field).is_zero())
    throw ConstructionError("cubic Stokes expansion is not divergence-free");
  return field;
}

VectorField build_laurent() {
  SparsePolynomial f1 =
      SparsePolynomial::from_terms(2, {{exps2(-2, 2), 3.0}, {exps2(3, -3), 2.0}});
  SparsePolynomial f2 =
      SparsePolynomial::from_terms(2, {{exps2(-3, 3), 2.0}, {exps2(2, -2), 3.0}});
  return VectorField({f1, f2});
}

BuiltinDefaults builtin_defaults(const std::string& name) {
  if (name == "quad_stokes") return {{0.0, 0.0, 0.96}, 0.01, 500.0};
  if (name == "cubic_stokes") return {{-0.1689, 0.0, -0.0437}, 0.01, 20000.0};
  if (name == "laurent") return {{-0.5689, 0.0437}, 0.001, 10.0};
  throw DomainError("unknown builtin problem: " + name);
}

std::vector<double> sample_admissible_point(const std::string& name, std::size_t dim,
                                            std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  if (name == "laurent") {
    std::uniform_real_distribution<double> mag(0.05, 1.0);
    std::vector<double> x(dim);
    for (auto& xi : x) xi = (unit(rng) < 0.0 ? -1.0 : 1.0) * mag(rng);
    return x;
  }
  // Unit ball via rejection.
  std::vector<double> x(dim);
  for (;;) {
    double n2 = 0.0;
    for (auto& xi : x) {
      xi = unit(rng);
      n2 += xi * xi;
    }
    if (n2 <= 1.0) return x;
  }
}

bool is_builtin(const std::string& name) {
  return name == "quad_stokes" || name == "cubic_stokes" || name == "laurent";
}

}  // namespace vps
