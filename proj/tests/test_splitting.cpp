#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vps/edfvf.hpp"
#include "vps/errors.hpp"
#include "vps/jacobian.hpp"
#include "vps/problems.hpp"
#include "vps/rk45.hpp"
#include "vps/scheme.hpp"

using namespace vps;
using namespace vps_tests;

namespace {

MultiIndex ix2(std::int64_t a, std::int64_t b) { return {Rational(a), Rational(b)}; }
MultiIndex ix3(std::int64_t a, std::int64_t b, std::int64_t c) {
  return {Rational(a), Rational(b), Rational(c)};
}
Rational rat(std::int64_t n, std::int64_t d) { return Rational(n, d); }

Edfvf single_edfvf(std::vector<Edfvf> list) {
  REQUIRE(list.size() == 1);
  return std::move(list.front());
}

// Degree-5 truncated drift field, diagonal part only. The x1^4 coefficient is
// 1/4 so the field is exactly divergence-free (the variant with coefficient 1
// is used below as a deliberate failure case).
VectorField truncated_diag_field(double x1_quartic_coef) {
  const SparsePolynomial f1 = SparsePolynomial::from_terms(
      3, {{ix3(1, 0, 1), 1.0},
          {ix3(4, 0, 0), x1_quartic_coef},
          {ix3(3, 0, 1), rat(-1, 6).to_double()},
          {ix3(1, 2, 1), -0.5}});
  const SparsePolynomial f2 = SparsePolynomial::from_terms(
      3, {{ix3(0, 1, 1), -0.5},
          {ix3(3, 1, 0), -0.5},
          {ix3(0, 3, 1), rat(1, 12).to_double()},
          {ix3(2, 1, 1), 0.25}});
  const SparsePolynomial f3 = SparsePolynomial::from_terms(
      3, {{ix3(0, 0, 2), -0.25},
          {ix3(3, 0, 1), -0.5},
          {ix3(2, 0, 2), 0.125},
          {ix3(0, 2, 2), 0.125}});
  return VectorField({f1, f2, f3});
}

Edfvf random_edfvf(std::mt19937_64& rng, std::size_t dim) {
  for (;;) {
    std::vector<Rational> exps(dim);
    for (auto& e : exps) e = random_small_rational(rng);
    if (exps.back() == Rational(-1)) continue;
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::vector<double> a(dim, 0.0);
    double partial_closure = 0.0;
    for (std::size_t i = 0; i + 1 < dim; ++i) {
      if (exps[i] == Rational(-1)) continue;  // frozen axis
      a[i] = coef(rng);
      partial_closure += a[i] * (exps[i].to_double() + 1.0);
    }
    a.back() = -partial_closure / (exps.back().to_double() + 1.0);
    bool nonzero = false;
    for (double ai : a) nonzero |= ai != 0.0;
    if (!nonzero) continue;
    return Edfvf(MultiIndex(exps), a);
  }
}

}  // namespace

TEST_CASE("quadratic Stokes diagonal reduces to a single elementary field") {
  const auto [diag, offdiag] = diag_offdiag_split(build_quad_stokes(0.1));
  const Edfvf e = single_edfvf(decompose_diagonal(diag));
  CHECK(e.j() == ix3(0, 1, 0));
  CHECK(e.a() == std::vector<double>{-8.0, 3.0, 2.0});
  CHECK(e.c() == 3.0);
  REQUIRE_FALSE(e.exponential_branch());
  CHECK(e.r()[0] == doctest::Approx(-8.0 / 3).epsilon(1e-15));
  CHECK(e.r()[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e.r()[2] == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(e.closure_residual() == 0.0);
}

TEST_CASE("decomposition of the truncated degree-5 field") {
  const auto edfvfs = decompose_diagonal(truncated_diag_field(0.25));
  REQUIRE(edfvfs.size() == 4);
  // lexicographic j order: (0,0,1), (0,2,1), (2,0,1), (3,0,0)
  CHECK(edfvfs[0].j() == ix3(0, 0, 1));
  CHECK(edfvfs[1].j() == ix3(0, 2, 1));
  CHECK(edfvfs[2].j() == ix3(2, 0, 1));
  CHECK(edfvfs[3].j() == ix3(3, 0, 0));

  const Edfvf& l = edfvfs[2];
  CHECK(l.a()[0] == doctest::Approx(-1.0 / 6).epsilon(1e-15));
  CHECK(l.a()[1] == 0.25);
  CHECK(l.a()[2] == 0.125);
  CHECK(l.c() == doctest::Approx(-5.0 / 24).epsilon(1e-15));
  CHECK(l.r()[0] == doctest::Approx(4.0 / 5).epsilon(1e-14));
  CHECK(l.r()[1] == doctest::Approx(-6.0 / 5).epsilon(1e-14));
  CHECK(l.r()[2] == doctest::Approx(-3.0 / 5).epsilon(1e-14));
}

TEST_CASE("flow of the (2,0,1) elementary field matches its closed form") {
  const auto edfvfs = decompose_diagonal(truncated_diag_field(0.25));
  const Edfvf& l = edfvfs[2];
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_positive_point(rng, 3);
    const double h = 0.3;
    const double m0 = x[0] * x[0] * x[2];
    const double base = 1.0 + (5.0 / 24) * m0 * h;
    const auto y = l.flow(x, h);
    CHECK(y[0] == doctest::Approx(x[0] * std::pow(base, -4.0 / 5)).epsilon(1e-13));
    CHECK(y[1] == doctest::Approx(x[1] * std::pow(base, 6.0 / 5)).epsilon(1e-13));
    CHECK(y[2] == doctest::Approx(x[2] * std::pow(base, 3.0 / 5)).epsilon(1e-13));
  }
}

TEST_CASE("the literal truncated field is flagged as non-divergence-free") {
  // With the x1^4 coefficient at 1, the monomial (3,0,0) carries residual 3.
  try {
    decompose_diagonal(truncated_diag_field(1.0));
    FAIL("expected NotDivergenceFreeError");
  } catch (const NotDivergenceFreeError& e) {
    CHECK(e.monomial == "(3,0,0)");
    CHECK(e.residual == doctest::Approx(3.0));
  }
}

TEST_CASE("Laurent field splits into the two expected elementary fields") {
  const auto [diag, offdiag] = diag_offdiag_split(build_laurent());
  for (std::size_t i = 0; i < 2; ++i) CHECK(offdiag.component(i).is_zero());
  const auto edfvfs = decompose_diagonal(diag);
  REQUIRE(edfvfs.size() == 2);
  CHECK(edfvfs[0].j() == ix2(-3, 2));
  CHECK(edfvfs[0].a() == std::vector<double>{3.0, 2.0});
  CHECK(edfvfs[0].c() == -5.0);
  CHECK(edfvfs[1].j() == ix2(2, -3));
  CHECK(edfvfs[1].a() == std::vector<double>{2.0, 3.0});
  CHECK(edfvfs[1].c() == -5.0);
}

TEST_CASE("decomposition rejects off-diagonal input") {
  const VectorField f({monomial(ix2(0, 1), 1.0), monomial(ix2(2, 1), 1.0)});
  CHECK_THROWS_AS(decompose_diagonal(f), NotDiagonalError);
}

TEST_CASE("a hand-made non-divergence-free field names the offending monomial") {
  const VectorField f({monomial(ix2(2, 0), 1.0), SparsePolynomial(2)});
  try {
    decompose_diagonal(f);
    FAIL("expected NotDivergenceFreeError");
  } catch (const NotDivergenceFreeError& e) {
    CHECK(e.monomial == "(1,0)");
    CHECK(e.residual == doctest::Approx(2.0));
  }
}

TEST_CASE("fractional exponents group into a zero-c elementary field") {
  // x_i' = a_i x_i (x1 x2)^(1/2) with a = (1, -1): closure 3/2 - 3/2 = 0.
  const VectorField f({monomial(MultiIndex{rat(3, 2), rat(1, 2)}, 1.0),
                       monomial(MultiIndex{rat(1, 2), rat(3, 2)}, -1.0)});
  const Edfvf e = single_edfvf(decompose_diagonal(f));
  CHECK(e.j() == MultiIndex{rat(1, 2), rat(1, 2)});
  CHECK(e.exponential_branch());  // c = 1/2 - 1/2 = 0
  std::mt19937_64 rng(9);
  const auto x = random_positive_point(rng, 2);
  const auto y = e.flow(x, 0.05);
  const Trajectory ref = rk45(e.as_vector_field(), x, 0.05, RkOptions::tol(1e-12));
  REQUIRE(ref.completed());
  CHECK(norm_inf_diff(y, ref.final_state()) <= 1e-10);
}

TEST_CASE("frozen axes stay exactly constant and match the oracle") {
  // j = (0,1,-1) freezes axis 3; a = (2,-1,0) closes the divergence.
  const VectorField f({
      SparsePolynomial::from_terms(3, {{ix3(1, 1, -1), 2.0}}),
      SparsePolynomial::from_terms(3, {{ix3(0, 2, -1), -1.0}}),
      SparsePolynomial(3),
  });
  CHECK(divergence(f).is_zero());
  const Edfvf e = single_edfvf(decompose_diagonal(f));
  CHECK(e.j() == ix3(0, 1, -1));
  CHECK(e.a() == std::vector<double>{2.0, -1.0, 0.0});

  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_positive_point(rng, 3);
    const double h = 0.1;
    const auto y = e.flow(x, h);
    CHECK(y[2] == x[2]);  // identity on the frozen axis
    const Trajectory ref = rk45(e.as_vector_field(), x, h, RkOptions::tol(1e-12));
    REQUIRE(ref.completed());
    CHECK(norm_inf_diff(y, ref.final_state()) <= 1e-9);
  }
}

TEST_CASE("multiple frozen axes are all carried as identities") {
  // j = (-1,1,1,-1), a = (0,1,-1,0)
  const VectorField f({
      SparsePolynomial(4),
      monomial(MultiIndex{Rational(-1), Rational(2), Rational(1), Rational(-1)}, 1.0),
      monomial(MultiIndex{Rational(-1), Rational(1), Rational(2), Rational(-1)}, -1.0),
      SparsePolynomial(4),
  });
  CHECK(divergence(f).is_zero());
  const Edfvf e = single_edfvf(decompose_diagonal(f));
  CHECK(e.a() == std::vector<double>{0.0, 1.0, -1.0, 0.0});
  const std::vector<double> x{0.7, 1.1, 0.9, 1.3};
  const auto y = e.flow(x, 0.2);
  CHECK(y[0] == x[0]);
  CHECK(y[3] == x[3]);
  CHECK(y[1] != x[1]);
}

TEST_CASE("zero coefficients make the flow an identity map") {
  const Edfvf e(ix3(1, 2, 0), {0.0, 0.0, 0.0});
  const std::vector<double> x{0.3, -1.2, 2.0};
  CHECK(e.flow(x, 0.5) == x);
  CHECK(e.flow(x, -3.0) == x);
}

TEST_CASE("quadratic Stokes elementary flow agrees with the embedded reference") {
  const auto [diag, offdiag] = diag_offdiag_split(build_quad_stokes(0.1));
  const Edfvf e = single_edfvf(decompose_diagonal(diag));
  const std::vector<double> x{0.1, 0.2, 0.3};
  const auto y = e.flow(x, 0.01);
  const Trajectory ref = rk45(e.as_vector_field(), x, 0.01, RkOptions::tol(1e-12));
  REQUIRE(ref.completed());
  CHECK(norm_inf_diff(y, ref.final_state()) <= 1e-9);
}

TEST_CASE("monomial evolution follows m0 / (1 - c m0 h)") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Edfvf e = random_edfvf(rng, 3);
    const auto x = random_positive_point(rng, 3);
    const double m0 = e.monomial_value(x);
    double h = 0.05;
    if (e.c() * m0 > 0.0) h = std::min(h, 0.5 / (e.c() * m0));
    const double m1 = e.monomial_value(e.flow(x, h));
    const double expected = e.exponential_branch() ? m0 : m0 / (1.0 - e.c() * m0 * h);
    CHECK(m1 == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("elementary flows form a semigroup in the step") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    const Edfvf e = random_edfvf(rng, 3);
    const auto x = random_positive_point(rng, 3);
    const double m0 = e.monomial_value(x);
    double h = 0.08;
    if (e.c() * m0 > 0.0) h = std::min(h, 0.5 / (e.c() * m0));
    const double h1 = 0.3 * h, h2 = 0.7 * h;
    const auto direct = e.flow(x, h1 + h2);
    const auto chained = e.flow(e.flow(x, h1), h2);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(chained[i] == doctest::Approx(direct[i]).epsilon(1e-12));
  }
}

TEST_CASE("power and exponential formulas agree across the branch threshold") {
  // Validates the threshold choice: at |c| around 1e-14 (and well past it on
  // both sides) the two closed forms give the same flow to 1e-9 relative.
  const double a1 = 1.3, m0 = 0.8, h = 0.5;
  const double expo = std::exp(a1 * m0 * h);
  for (const double c : {1e-18, 1e-16, 1e-15, 1e-14, 1e-13, 1e-12, 1e-10}) {
    const double power = std::exp(-(a1 / c) * std::log1p(-c * m0 * h));
    CHECK(power == doctest::Approx(expo).epsilon(1e-9));
  }
}

TEST_CASE("branch selection is scale-aware") {
  CHECK(Edfvf(ix2(1, 1), {1.0, -1.0}).exponential_branch());       // c = 0 exactly
  CHECK_FALSE(Edfvf(ix2(1, 2), {3.0, -2.0}).exponential_branch()); // c = -1
}

TEST_CASE("laurent exclusion is enforced at construction") {
  CHECK_THROWS_AS(Edfvf(ix2(-1, 1), {1.0, 1.0}), DomainError);
}

TEST_CASE("first integrals: b1 = j + 1 and the cross-product example") {
  const Edfvf e(ix3(1, 1, 1), {-5.0 / 3, 4.0 / 3, 1.0 / 3});
  CHECK(e.exponential_branch());  // a' j = 0 here
  const auto basis = integrals_basis(e);
  REQUIRE(basis.size() == 2);
  CHECK(basis[0] == std::vector<double>{2.0, 2.0, 2.0});

  // b2 must be parallel to a x (j+1)
  const auto& a = e.a();
  const std::vector<double>& b1 = basis[0];
  const std::vector<double> cross{a[1] * b1[2] - a[2] * b1[1], a[2] * b1[0] - a[0] * b1[2],
                                  a[0] * b1[1] - a[1] * b1[0]};
  const auto& b2 = basis[1];
  const double dot_cb = cross[0] * b2[0] + cross[1] * b2[1] + cross[2] * b2[2];
  const double cos_angle = dot_cb / (norm2(cross) * norm2(b2));
  CHECK(std::abs(cos_angle) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two dimensions give exactly one integral") {
  const auto [diag, offdiag] = diag_offdiag_split(build_laurent());
  for (const Edfvf& e : decompose_diagonal(diag)) {
    const auto basis = integrals_basis(e);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0][0] == e.j()[0].to_double() + 1.0);
    CHECK(basis[0][1] == e.j()[1].to_double() + 1.0);
  }
}

TEST_CASE("random 4-D elementary fields have three independent integrals") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const Edfvf e = random_edfvf(rng, 4);
    const auto basis = integrals_basis(e);
    REQUIRE(basis.size() == 3);
    const auto& a = e.a();
    const double na = norm2(a);
    for (const auto& b : basis) {
      double ab = 0.0;
      for (std::size_t i = 0; i < 4; ++i) ab += a[i] * b[i];
      CHECK(std::abs(ab) <= 1e-12 * na * norm2(b));
    }
    // pairwise independence: no two basis vectors are parallel
    for (std::size_t p = 0; p < basis.size(); ++p)
      for (std::size_t q = p + 1; q < basis.size(); ++q) {
        double bb = 0.0;
        for (std::size_t i = 0; i < 4; ++i) bb += basis[p][i] * basis[q][i];
        CHECK(std::abs(bb) < (1.0 - 1e-6) * norm2(basis[p]) * norm2(basis[q]));
      }
  }
}

TEST_CASE("integrals are conserved along the exact flow") {
  std::mt19937_64 rng(31);
  std::vector<Edfvf> cases;
  const auto quad = decompose_diagonal(diag_offdiag_split(build_quad_stokes(0.1)).diag);
  const auto laur = decompose_diagonal(diag_offdiag_split(build_laurent()).diag);
  cases.insert(cases.end(), quad.begin(), quad.end());
  cases.insert(cases.end(), laur.begin(), laur.end());
  cases.emplace_back(ix3(1, 1, 1), std::vector<double>{-5.0 / 3, 4.0 / 3, 1.0 / 3});

  for (const Edfvf& e : cases) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = random_positive_point(rng, e.dim(), 0.4, 1.4);
      const double m0 = e.monomial_value(x);
      double h = 0.1;
      if (e.c() * m0 > 0.0) h = std::min(h, 0.5 / (e.c() * m0));
      const auto y = e.flow(x, h);
      for (const auto& b : integrals_basis(e)) {
        const double before = real_monomial_value(x, b);
        const double after = real_monomial_value(y, b);
        CHECK(std::abs(after - before) <= 1e-10 * std::abs(before));
      }
    }
  }
}

TEST_CASE("degenerate field has no integral basis") {
  CHECK_THROWS_AS(integrals_basis(Edfvf(ix2(1, 1), {0.0, 0.0})), DegenerateFieldError);
}

TEST_CASE("off-diagonal equivalent system is an algebraic identity over evaluations") {
  std::mt19937_64 rng(37);
  const auto quad = decompose_diagonal(diag_offdiag_split(build_quad_stokes(0.1)).diag);
  const auto laur = decompose_diagonal(diag_offdiag_split(build_laurent()).diag);
  std::vector<Edfvf> cases;
  cases.insert(cases.end(), quad.begin(), quad.end());
  cases.insert(cases.end(), laur.begin(), laur.end());
  for (const Edfvf& e : cases) {
    const std::size_t n = e.dim();
    for (int trial = 0; trial < 30; ++trial) {
      const auto x = random_positive_point(rng, n);
      const auto b1 = e.j().plus_one_real();
      const double i1 = real_monomial_value(x, b1);
      for (std::size_t i = 0; i < n; ++i) {
        if (e.a()[i] == 0.0) continue;
        // a_i x^{j+1} x^{-1+e_i} vs a_i x_i x^j
        std::vector<double> shift(n, -1.0);
        shift[i] += 1.0;
        const double lhs = e.a()[i] * i1 * real_monomial_value(x, shift);
        const double rhs = e.a()[i] * x[i] * e.monomial_value(x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("scheme layout: one elementary flow plus three shears for quad Stokes") {
  const auto scheme = build_scheme(build_quad_stokes(0.1), 1);
  REQUIRE(scheme.flow_count() == 4);
  CHECK(std::holds_alternative<Edfvf>(scheme.flows()[0]));
  for (int i = 1; i < 4; ++i) {
    REQUIRE(std::holds_alternative<Shear>(scheme.flows()[i]));
    CHECK(std::get<Shear>(scheme.flows()[i]).axis == static_cast<std::size_t>(i - 1));
  }
}

TEST_CASE("scheme layout: the Laurent problem has two flows and no shears") {
  const auto scheme = build_scheme(build_laurent(), 2);
  REQUIRE(scheme.flow_count() == 2);
  CHECK(std::holds_alternative<Edfvf>(scheme.flows()[0]));
  CHECK(std::holds_alternative<Edfvf>(scheme.flows()[1]));
  CHECK(scheme.order() == 2);
}

TEST_CASE("zero field gives an empty scheme whose step is the identity") {
  const auto scheme = build_scheme(VectorField(3), 1);
  CHECK(scheme.flow_count() == 0);
  const std::vector<double> x{1.0, -2.0, 0.5};
  CHECK(scheme.step(x, 0.7) == x);
}

TEST_CASE("a zero step is exactly the identity") {
  const auto scheme = build_scheme(build_quad_stokes(0.1), 2);
  const std::vector<double> x{0.1, -0.2, 0.93};
  CHECK(scheme.step(x, 0.0) == x);
}

TEST_CASE("decomposition completeness: generators sum back to the field") {
  std::mt19937_64 rng(0);
  const std::pair<const char*, VectorField> problems[] = {
      {"quad_stokes", build_quad_stokes(0.1)},
      {"cubic_stokes", build_cubic_stokes(1.0, 1.5, 0.275 * 3.14159265358979324)},
      {"laurent", build_laurent()},
  };
  for (const auto& [name, f] : problems) {
    const auto scheme = build_scheme(f, 1);
    for (int trial = 0; trial < 50; ++trial) {
      const auto x = sample_admissible_point(name, f.dim(), rng);
      const auto fx = f.evaluate(x);
      std::vector<double> sum(f.dim(), 0.0);
      for (const auto& flow : scheme.flows()) {
        const auto gx = flow_generator(flow).evaluate(x);
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += gx[i];
      }
      for (std::size_t i = 0; i < sum.size(); ++i)
        CHECK(std::abs(sum[i] - fx[i]) <= 1e-12 * std::max(1.0, std::abs(fx[i])));
    }
  }
}

TEST_CASE("shear flow moves one coordinate linearly") {
  // axis-1 shear x1' = x2 from (0,1) over h = 0.5 lands on (0.5, 1)
  const Shear s{0, monomial(ix2(0, 1), 1.0)};
  const auto y = shear_flow(s, std::vector<double>{0.0, 1.0}, 0.5);
  CHECK(y == std::vector<double>{0.5, 1.0});

  const Shear zero{0, SparsePolynomial(2)};
  const std::vector<double> x{0.4, -0.7};
  CHECK(shear_flow(zero, x, 2.0) == x);
}

TEST_CASE("quad Stokes shear on axis 2 applies the displayed off-diagonal component") {
  const auto scheme = build_scheme(build_quad_stokes(0.1), 1);
  const auto& s = std::get<Shear>(scheme.flows()[2]);
  REQUIRE(s.axis == 1);
  const std::vector<double> x{0.5, 0.2, -0.3};
  const auto y = shear_flow(s, x, 0.1);
  CHECK(y[1] == doctest::Approx(0.2 + 0.1 * (11 * 0.25 + 0.09 - 3)).epsilon(1e-15));
  CHECK(y[0] == x[0]);
  CHECK(y[2] == x[2]);
}

TEST_CASE("shear field construction rejects self-dependent components") {
  const VectorField bad({monomial(ix2(1, 1), 1.0), SparsePolynomial(2)});
  CHECK_THROWS_AS(ShearField{bad}, DomainError);
}

TEST_CASE("order-2 steps are volume preserving under finite differences") {
  const auto scheme = build_scheme(build_quad_stokes(0.1), 2);
  const StepMap map = [&scheme](std::span<const double> x, double h) {
    return scheme.step(x, h);
  };
  const double det = jacobian_det(map, std::vector<double>{0.0, 0.0, 0.96}, 0.01, 1e-5);
  CHECK(std::abs(det - 1.0) <= 1e-6);
}

TEST_CASE("order-2 palindrome is self-adjoint") {
  std::mt19937_64 rng(41);
  for (const auto& f : {build_quad_stokes(0.1), build_cubic_stokes(1.0, 2.0, 0.4)}) {
    const auto scheme = build_scheme(f, 2);
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = sample_admissible_point("quad_stokes", 3, rng);
      const auto forward = scheme.step(x, 0.02);
      const auto back = scheme.step(forward, -0.02);
      for (std::size_t i = 0; i < 3; ++i)
        CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-10));
    }
  }
}

TEST_CASE("singular steps are reported with the analytic blow-up time") {
  const auto edfvfs = decompose_diagonal(diag_offdiag_split(build_laurent()).diag);
  const Edfvf& e = edfvfs[0];  // j = (-3,2), c = -5
  const std::vector<double> x{-0.4, 0.8};
  const double m0 = e.monomial_value(x);
  REQUIRE(e.c() * m0 > 0.0);
  const double t_star = 1.0 / (e.c() * m0);

  CHECK_NOTHROW(e.flow(x, 0.9 * t_star));
  try {
    e.flow(x, 1.1 * t_star);
    FAIL("expected SingularStepError");
  } catch (const SingularStepError& err) {
    CHECK(err.blow_up_time == doctest::Approx(t_star).epsilon(1e-12));
    CHECK(err.monomial == "(-3,2)");
  }
}

TEST_CASE("singular guard matches the analytic bound on randomized cases") {
  std::mt19937_64 rng(43);
  const auto edfvfs = decompose_diagonal(diag_offdiag_split(build_laurent()).diag);
  std::uniform_real_distribution<double> ratio(0.2, 2.0);
  int singular_seen = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Edfvf& e = edfvfs[trial % 2];
    const auto x = sample_admissible_point("laurent", 2, rng);
    const double m0 = e.monomial_value(x);
    if (e.c() * m0 <= 0.0) {
      CHECK_NOTHROW(e.flow(x, 10.0));  // no forward-time blow-up
      continue;
    }
    const double t_star = 1.0 / (e.c() * m0);
    const double h = ratio(rng) * t_star;
    if (h >= t_star) {
      ++singular_seen;
      CHECK_THROWS_AS(e.flow(x, h), SingularStepError);
    } else {
      CHECK_NOTHROW(e.flow(x, h));
    }
  }
  CHECK(singular_seen > 0);
}

TEST_CASE("opt-in substepping rides out a mid-composition singular trip") {
  // x1' = x1^2 - 8 x2, x2' = -2 x1 x2: the elementary flow alone blows up at
  // t* = 1/x1(0) = 1, but the shear pulls x1 back between substeps, so the
  // halved composition survives while the full step trips the guard.
  const VectorField f({
      SparsePolynomial::from_terms(2, {{ix2(2, 0), 1.0}, {ix2(0, 1), -8.0}}),
      monomial(ix2(1, 1), -2.0),
  });
  CHECK(divergence(f).is_zero());
  const auto scheme = build_scheme(f, 1);
  const std::vector<double> x{1.0, 8.0};
  const double h = 1.5;
  CHECK_THROWS_AS(scheme.step(x, h), SingularStepError);
  StepOptions opts;
  opts.substep_on_singular = true;
  std::vector<double> y;
  CHECK_NOTHROW(y = scheme.step(x, h, opts));
  for (double v : y) CHECK(std::isfinite(v));
}

TEST_CASE("substepping rethrows once the recursion depth is exhausted") {
  // In this octant of the Laurent problem the true solution reaches the
  // x1 = 0 pole inside the step, so no refinement can cross it.
  const auto scheme = build_scheme(build_laurent(), 2);
  const std::vector<double> x{-0.12, 0.9};
  StepOptions opts;
  opts.substep_on_singular = true;
  opts.max_substep_depth = 12;
  CHECK_THROWS_AS(scheme.step(x, 0.01, opts), SingularStepError);
}

TEST_CASE("split composition is exact when the elementary fields commute") {
  // Both Laurent elementary fields satisfy a'k = 0 against the other field's
  // index, so their flows commute and the composition carries no splitting
  // error: orders 1 and 2 agree to roundoff.
  const auto s1 = build_scheme(build_laurent(), 1);
  const auto s2 = build_scheme(build_laurent(), 2);
  std::vector<double> x1{-0.5689, 0.0437};
  auto x2 = x1;
  for (int k = 0; k < 100; ++k) {
    x1 = s1.step(x1, 0.01);
    x2 = s2.step(x2, 0.01);
  }
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(x1[i] == doctest::Approx(x2[i]).epsilon(1e-12));
}
