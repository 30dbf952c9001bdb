#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <set>

#include "hamsing/series.hpp"

using namespace hamsing;
using C = std::complex<double>;

namespace {

HamiltonianSpec make_spec(int M, int N, CRat L1 = CRat(1), CRat L2 = CRat(1)) {
  HamiltonianSpec s;
  s.M = M;
  s.N = N;
  s.leading1 = L1;
  s.leading2 = L2;
  return s;
}

// H = (1/3) y1^3 + (1/3) y2^3 + z y1 y2 + beta y1 + gamma y2 with constant
// beta, gamma: every derived condition holds.
HamiltonianSpec cubic_admissible() {
  auto s = make_spec(2, 2, CRat(Rat(1, 3)), CRat(Rat(1, 3)));
  s.alphas[{1, 1}] = CoeffPoly::z();
  s.alphas[{1, 0}] = CoeffPoly::constant(CRat(1));
  s.alphas[{0, 1}] = CoeffPoly::constant(CRat(2));
  return validate_spec(std::move(s));
}

std::set<std::string> condition_texts(const std::vector<ResonanceCondition>& cs) {
  std::set<std::string> out;
  for (const auto& c : cs) out.insert(c.text());
  return out;
}

}  // namespace

TEST_CASE("leading coefficient laws") {
  // Scaled cubic: c1^3 = -1 and c2 = c1^2 exactly.
  auto ring = make_leading_ring(make_spec(2, 2, CRat(Rat(1, 3)), CRat(Rat(1, 3))));
  CHECK(ring.rho() == 3);
  CHECK(ring.modulus() == CRat(-1));
  auto classes = leading_coefficients(make_spec(2, 2, CRat(Rat(1, 3)), CRat(Rat(1, 3))));
  CHECK(classes.size() == 3);
  CHECK(classes[0].c2 == ring.pow_c(2));

  // Normalized cubic: c1^3 = -1/27 and c2 = 3 c1^2.
  ring = make_leading_ring(make_spec(2, 2));
  CHECK(ring.modulus() == CRat(Rat(-1, 27)));
  classes = leading_coefficients(make_spec(2, 2));
  CHECK(classes[0].c2 == ring.scale(CRat(3), ring.pow_c(2)));

  // Quartic with leading coefficients 1/4: c1^8 = -1/16 and c2 = 2 c1^3.
  ring = make_leading_ring(make_spec(3, 3, CRat(Rat(1, 4)), CRat(Rat(1, 4))));
  CHECK(ring.rho() == 8);
  CHECK(ring.modulus() == CRat(Rat(-1, 16)));
  classes = leading_coefficients(make_spec(3, 3, CRat(Rat(1, 4)), CRat(Rat(1, 4))));
  CHECK(classes.size() == 4);
  CHECK(classes[0].c2 == ring.scale(CRat(2), ring.pow_c(3)));

  // Mixed degree (2,3), normalized: c1^5 = -1/625 and c2 = 5 c1^2.
  ring = make_leading_ring(make_spec(2, 3));
  CHECK(ring.rho() == 5);
  CHECK(ring.modulus() == CRat(Rat(-1, 625)));
  classes = leading_coefficients(make_spec(2, 3));
  CHECK(classes.size() == 1);
  CHECK(classes[0].c2 == ring.scale(CRat(5), ring.pow_c(2)));

  // Numeric roots satisfy the constraint and enumerate distinct classes.
  auto s23 = make_spec(2, 3);
  for (int n = 0; n < 5; ++n) {
    C r = leading_root<C>(s23, n);
    C p = r;
    for (int k = 1; k < 5; ++k) p *= r;
    CHECK(std::abs(p - C(-1.0 / 625.0)) < 1e-12);
  }
}

TEST_CASE("recursion matrix") {
  // (2,2): d = 3, r = 3k + 3. k = -1 is the leading index.
  auto s = make_spec(2, 2);
  auto m = recursion_matrix(s, -1);
  CHECK(m.leading_order);
  CHECK(m.det == 0);

  // Determinant vanishes exactly at the resonance index and nowhere else.
  // (2,2): r* = 9 -> k = 2;  (2,3): r = k + 4, r* = 12 -> k = 8;
  // (3,3): r = 4k + 4, r* = 16 -> k = 3.
  for (long k = 0; k <= 20; ++k) {
    CHECK((recursion_matrix(make_spec(2, 2), k).det == 0) == (k == 2));
    CHECK((recursion_matrix(make_spec(2, 3), k).det == 0) == (k == 8));
    CHECK((recursion_matrix(make_spec(3, 3), k).det == 0) == (k == 3));
  }

  // Spot value: (2,2) at r = 6 (k = 1): det = (1)(1) - 2*3*3*1/9... computed
  // as ((r-3)(r-3) - 36)/9 = (9 - 36)/9 = -3.
  CHECK(recursion_matrix(make_spec(2, 2), 1).det == Rat(-3));

  CHECK(resonance_offset(2, 2) == 9);
  CHECK(resonance_offset(2, 3) == 12);
  CHECK(resonance_offset(3, 3) == 16);
}

TEST_CASE("resonance conditions (2,2)") {
  auto conds = resonance_conditions(2, 2);
  CHECK(condition_texts(conds) ==
        std::set<std::string>{"a[1,1,2]", "a[1,0,1]", "a[0,1,1]"});
  for (const auto& c : conds) CHECK(c.order == 9 - 3);
}

TEST_CASE("resonance conditions (2,3)") {
  auto conds = resonance_conditions(2, 3);
  REQUIRE(conds.size() == 1);

  // Evaluate the symbolic condition on a concrete spec and compare against
  // the expected combination 3 a12'' - 2 (a21')^2 - 2 a21 a21'' up to the
  // canonical sign.
  auto s = make_spec(2, 3);
  s.alphas[{1, 2}] = CoeffPoly({CRat(2), CRat(-1), CRat(0), CRat(1)});  // 2 - z + z^3
  s.alphas[{2, 1}] = CoeffPoly({CRat(1), CRat(1), CRat(3)});            // 1 + z + 3z^2
  s.alphas[{1, 1}] = CoeffPoly::z();
  s = validate_spec(std::move(s));

  CoeffPoly a12 = s.alpha(1, 2), a21 = s.alpha(2, 1);
  CoeffPoly expect = CRat(3) * a12.derivative().derivative() -
                     CRat(2) * a21.derivative() * a21.derivative() -
                     CRat(2) * a21 * a21.derivative().derivative();
  CoeffPoly got = conds[0].expression.eval_on_spec(s);
  CHECK((got == expect || got == -expect));
}

TEST_CASE("resonance conditions (3,3)") {
  auto conds = resonance_conditions(3, 3);
  REQUIRE(conds.size() == 3);

  auto s = make_spec(3, 3);
  s.alphas[{2, 0}] = CoeffPoly({CRat(1), CRat(2), CRat(1)});
  s.alphas[{0, 2}] = CoeffPoly({CRat(-1), CRat(0), CRat(2)});
  s.alphas[{1, 2}] = CoeffPoly({CRat(0), CRat(1), CRat(1)});
  s.alphas[{2, 1}] = CoeffPoly({CRat(3), CRat(-2)});
  s.alphas[{1, 1}] = CoeffPoly({CRat(0), CRat(0), CRat(5)});
  s.alphas[{1, 0}] = CoeffPoly::z();
  s = validate_spec(std::move(s));

  CoeffPoly a20 = s.alpha(2, 0), a02 = s.alpha(0, 2);
  CoeffPoly a12 = s.alpha(1, 2), a21 = s.alpha(2, 1), a11 = s.alpha(1, 1);

  // Normalized leading coefficients: {4 a20' - a12 a12', a11', 4 a02' - a21 a21'}.
  std::vector<CoeffPoly> expected = {
      CRat(4) * a20.derivative() - a12 * a12.derivative(),
      a11.derivative(),
      CRat(4) * a02.derivative() - a21 * a21.derivative(),
  };
  // Each derived condition must match one expected polynomial up to sign.
  for (const auto& c : conds) {
    CoeffPoly got = c.expression.eval_on_spec(s);
    bool matched = false;
    for (const auto& e : expected) matched = matched || got == e || got == -e;
    CHECK(matched);
  }

  // With leading coefficients 1/4 the same derivation produces the classical
  // forms (2 a20 - a12^2)' = 0, a11' = 0, (2 a02 - a21^2)' = 0 (each divided
  // by its content of 2 under canonicalization).
  auto q = s;
  q.leading1 = q.leading2 = CRat(Rat(1, 4));
  q = validate_spec(std::move(q));
  auto [qs, qconds] = derive_formal_series(q, 0, resonance_offset(3, 3) - 4);
  (void)qs;
  REQUIRE(qconds.size() == 3);
  std::vector<CoeffPoly> classical = {
      a20.derivative() - a12 * a12.derivative(),
      a11.derivative(),
      a02.derivative() - a21 * a21.derivative(),
  };
  for (const auto& c : qconds) {
    CoeffPoly got = c.expression.eval_on_spec(q);
    bool matched = false;
    for (const auto& e : classical) matched = matched || got == e || got == -e;
    CHECK(matched);
  }
}

TEST_CASE("resonance conditions (1,2) are nonempty") {
  auto conds = resonance_conditions(1, 2);
  CHECK(!conds.empty());
}

TEST_CASE("violated conditions and numeric gate") {
  CHECK(violated_conditions(cubic_admissible()).empty());

  // z^2 coupling violates the second-derivative condition.
  auto bad = make_spec(2, 2);
  bad.alphas[{1, 1}] = CoeffPoly::z() * CoeffPoly::z();
  bad = validate_spec(std::move(bad));
  auto v = violated_conditions(bad);
  REQUIRE(v.size() == 1);
  CHECK(v[0].text() == "a[1,1,2]");

  CHECK_THROWS_WITH_AS(instantiate_numeric<C>(bad, C(0), 0, 8),
                       doctest::Contains("a[1,1,2]"), Error);
}

TEST_CASE("truncation must reach the resonance") {
  CHECK_THROWS_AS(derive_formal_series(make_spec(2, 2), 0, 5), Error);
  CHECK_NOTHROW(derive_formal_series(make_spec(2, 2), 0, 6));
}

TEST_CASE("autonomous cubic series terminates at the leading pair") {
  // H = y1^3 + y2^3: y1 = -1/(3(z - z0)), y2 = 1/(3(z - z0)) exactly.
  auto s = validate_spec(make_spec(2, 2));
  // Class 1 selects the real negative root c1 = -1/3 of c^3 = -1/27.
  CHECK(std::abs(leading_root<C>(s, 1) - C(-1.0 / 3.0)) < 1e-14);
  auto series = instantiate_numeric<C>(s, C(0), 1, 12);
  CHECK(std::abs(series.coeffs1[0] - C(-1.0 / 3.0)) < 1e-14);
  CHECK(std::abs(series.coeffs2[0] - C(1.0 / 3.0)) < 1e-14);
  for (size_t k = 1; k < series.coeffs1.size(); ++k) {
    CHECK(std::abs(series.coeffs1[k]) < 1e-12);
    CHECK(std::abs(series.coeffs2[k]) < 1e-12);
  }
  // Evaluation reproduces the closed form: ramification 3, z = t^3.
  C t(0.3, 0.2);
  C z = t * t * t;
  CHECK(std::abs(series.eval1(t) - (-1.0 / (3.0 * z))) < 1e-12);
  CHECK(std::abs(series.eval2(t) - (1.0 / (3.0 * z))) < 1e-12);
}

TEST_CASE("series residual decays at the predicted rate") {
  auto s = cubic_admissible();
  const long K = 10;
  // d = 3 for (2,2): the first dropped exponent numerator is 12, so both
  // residual components decay like t^9.
  auto [e1, e2] = predicted_residual_exponents(s, K);
  CHECK(e1 == 9);
  CHECK(e2 == 9);

  auto series = instantiate_numeric<C>(s, C(1.0, 0.5), 0, K, C(0.7, 0.2));
  auto rate = [&](double t1, double t2, bool first) {
    auto [ra, sa] = series_residual(s, series, C(t1));
    auto [rb, sb] = series_residual(s, series, C(t2));
    double na = std::abs(first ? ra : sa), nb = std::abs(first ? rb : sb);
    return std::log(na / nb) / std::log(t1 / t2);
  };
  // t small enough for the asymptotics but large enough that the residual
  // stays above double rounding noise (the evaluations are ~t^{-6}).
  CHECK(std::abs(rate(0.25, 0.125, true) - double(e1)) < 0.6);
  CHECK(std::abs(rate(0.25, 0.125, false) - double(e2)) < 0.6);
}

TEST_CASE("numeric series satisfies the equations near the singularity") {
  // Mixed-degree spec satisfying its conditions: alpha at (1,1) linear in z
  // keeps the single (2,3) condition identically zero.
  auto s = make_spec(2, 3);
  s.alphas[{1, 1}] = CoeffPoly::z();
  s = validate_spec(std::move(s));
  CHECK(violated_conditions(s).empty());

  // The absolute residual near the singularity is dominated by the size of
  // the balanced leading terms (~t^{-9} here), so check it relative to them.
  auto series = instantiate_numeric<C>(s, C(0.4, -0.3), 2, 9, C(0.1, -0.4));
  C t(0.05);
  auto [r1, r2] = series_residual(s, series, t);
  double scale1 = std::abs(series.eval1_dz(t)), scale2 = std::abs(series.eval2_dz(t));
  CHECK(std::abs(r1) / scale1 < 1e-12);
  CHECK(std::abs(r2) / scale2 < 1e-12);
}
