#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "hamsing/auxw.hpp"
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

HamiltonianSpec cubic_admissible() {
  auto s = make_spec(2, 2, CRat(Rat(1, 3)), CRat(Rat(1, 3)));
  s.alphas[{1, 1}] = CoeffPoly::z();
  s.alphas[{1, 0}] = CoeffPoly::constant(CRat(1));
  s.alphas[{0, 1}] = CoeffPoly::constant(CRat(2));
  return validate_spec(std::move(s));
}

LaurentPoly w_as_laurent(const AuxiliaryW& aux, const HamiltonianSpec& spec) {
  LaurentPoly W;
  W.add({spec.M + 1, 0}, CoeffPoly::constant(spec.leading1));
  W.add({0, spec.N + 1}, CoeffPoly::constant(spec.leading2));
  for (const auto& [ij, a] : spec.alphas) W.add({ij.first, ij.second}, a);
  for (const auto& [kl, b] : aux.betas) W.add({-kl.second, kl.first}, b);
  return W;
}

// The decomposition W' = P W + sum gamma_ij y1^i y2^j + gamma_{-1,N} y2^N/y1
// + Q + R' is an exact algebraic identity in (z, y1, y2); check it at an
// arbitrary point.
double identity_defect(const AuxiliaryW& aux, const HamiltonianSpec& spec,
                       const C& z, const C& y1, const C& y2) {
  auto [f1, f2] = rhs(spec, z, y1, y2);
  LaurentPoly W = w_as_laurent(aux, spec);
  C lhs = W.eval_total_derivative(z, y1, y2, f1, f2);
  C rhs_val = aux.P.eval(z, y1, y2) * W.eval(z, y1, y2) + aux.Q.eval(z, y1, y2) +
              aux.R.eval_total_derivative(z, y1, y2, f1, f2);
  for (const auto& [ij, g] : aux.gamma_report)
    rhs_val += g.eval(z) * LaurentPoly::pow_mono<C>({ij.first, ij.second}, y1, y2);
  double scale = std::max(1.0, std::abs(lhs));
  return std::abs(lhs - rhs_val) / scale;
}

}  // namespace

TEST_CASE("correction index set J") {
  auto J22 = build_J(2, 2);
  std::set<Mono> expect = {{1, 0}, {1, 1}, {2, 1}, {2, 2}, {3, 2}, {3, 3}};
  CHECK(J22 == expect);

  CHECK_THROWS_AS(build_J(1, 1), Error);

  // Brute-force agreement and the partner correspondence on a range.
  for (int M = 1; M <= 6; ++M)
    for (int N = std::max(M, 2); N <= 6; ++N) {
      auto J = build_J(M, N);
      std::set<Mono> ref;
      for (int k = 1; k <= N + 1; ++k)
        for (int l = 0; l <= 3 * (M + 1) * (N + 1); ++l) {
          long q = long(k) * (M + 1) - long(l) * (N + 1);
          if (1 - long(M) * N < q && q < M + N + 2) ref.insert({k, l});
        }
      CHECK(J == ref);
      // (k,l) = (j+1, M-i) embeds I \ {(0,0)} into J, and the partner of the
      // y2^N/y1 term, (N+1, M+1), is present too. (The containment can be
      // strict at higher degrees; the unmatched correction slots stay zero.)
      std::set<Mono> mapped;
      for (const auto& [i, j] : build_index_set(M, N))
        if (!(i == 0 && j == 0)) mapped.insert({j + 1, M - i});
      mapped.insert({N + 1, M + 1});
      for (const auto& m : mapped) CHECK(J.count(m) == 1);
    }
}

TEST_CASE("autonomous spec needs no correction") {
  auto s = validate_spec(make_spec(2, 2));
  auto aux = solve_betas(s);
  for (const auto& [kl, b] : aux.betas) {
    (void)kl;
    CHECK(b.is_zero());
  }
  for (const auto& [ij, g] : aux.gamma_report) {
    (void)ij;
    CHECK(g.is_zero());
  }
  CHECK(aux.P.terms.empty());
  CHECK(aux.Q.terms.empty());
  CHECK(aux.R.terms.empty());

  // W = H on the exact pole solution y1 = -1/(3z), y2 = 1/(3z).
  C z(0.01, 0.02);
  C y1 = -1.0 / (3.0 * z), y2 = 1.0 / (3.0 * z);
  CHECK(std::abs(eval_W(aux, s, z, y1, y2)) < 1e-10);
  CHECK(std::abs(eval_W(aux, s, C(0), C(1), C(1)) - C(2)) < 1e-15);
  CHECK_THROWS_AS(eval_W(aux, s, C(0), C(0), C(1)), Error);
}

TEST_CASE("admissible cubic: all residuals vanish") {
  auto s = cubic_admissible();
  auto aux = solve_betas(s);
  for (const auto& [ij, g] : aux.gamma_report) {
    (void)ij;
    CHECK(g.is_zero());
  }
  // The certificate is an exact identity everywhere, not only near a
  // singularity.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 8; ++t) {
    C z(u(rng), u(rng)), y1(u(rng) + 3.0, u(rng)), y2(u(rng), u(rng) + 2.5);
    CHECK(identity_defect(aux, s, z, y1, y2) < 1e-11);
  }
}

TEST_CASE("violating spec raises the residual signal") {
  auto bad = make_spec(2, 2);
  bad.alphas[{1, 1}] = CoeffPoly::z() * CoeffPoly::z();
  bad = validate_spec(std::move(bad));

  CHECK_THROWS_AS(solve_betas(bad), Error);
  try {
    solve_betas(bad);
  } catch (const Error& e) {
    CHECK(std::string(e.code()) == "GammaNonzero");
  }

  auto aux = solve_betas(bad, /*allow_nonzero_gamma=*/true);
  bool any = false;
  for (const auto& [ij, g] : aux.gamma_report) {
    (void)ij;
    any = any || !g.is_zero();
  }
  CHECK(any);
  // The decomposition including the nonzero residual terms is still exact.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 8; ++t) {
    C z(u(rng), u(rng)), y1(u(rng) + 3.0, u(rng)), y2(u(rng), u(rng) + 2.5);
    CHECK(identity_defect(aux, bad, z, y1, y2) < 1e-11);
  }
}

TEST_CASE("mixed degrees: certificate identity for a generic spec") {
  auto s = make_spec(2, 3);
  s.alphas[{1, 2}] = CoeffPoly({CRat(1), CRat(2)});
  s.alphas[{2, 1}] = CoeffPoly({CRat(0), CRat(1), CRat(1)});
  s.alphas[{1, 1}] = CoeffPoly::z();
  s.alphas[{0, 2}] = CoeffPoly::constant(CRat(Rat(1, 2)));
  s.alphas[{1, 0}] = CoeffPoly({CRat(3), CRat(0), CRat(-1)});
  s = validate_spec(std::move(s));

  auto aux = solve_betas(s, /*allow_nonzero_gamma=*/true);
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 8; ++t) {
    C z(u(rng), u(rng)), y1(u(rng) + 2.5, u(rng)), y2(u(rng), u(rng) + 2.0);
    CHECK(identity_defect(aux, s, z, y1, y2) < 1e-10);
  }
  // Betas at the resonance level stay pinned to zero.
  const long rho = 2L * 3 - 1;
  for (const auto& [ij, unused] : aux.gamma_report) {
    (void)unused;
    if (ij.first < 0) continue;
    long lvl = long(ij.first) * 4 + long(ij.second) * 3;
    if (lvl == rho) CHECK(aux.betas.at({ij.second + 1, 2 - ij.first}).is_zero());
  }
}

TEST_CASE("normalization precondition") {
  auto s = make_spec(2, 3);
  s.alphas[{0, 3}] = CoeffPoly::z();
  s = validate_spec(std::move(s));
  CHECK_THROWS_AS(solve_betas(s), Error);
}

TEST_CASE("serialization carries the full certificate") {
  auto aux = solve_betas(cubic_admissible());
  auto text = aux_to_json(aux);
  CHECK(text.find("gamma_report") != std::string::npos);
  CHECK(text.find("\"J\"") != std::string::npos);
}
