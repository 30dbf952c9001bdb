#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "hamsing/flow.hpp"
#include "hamsing/series.hpp"

using namespace hamsing;
using C = std::complex<double>;

namespace {

HamiltonianSpec autonomous22() {
  HamiltonianSpec s;
  s.M = s.N = 2;
  return validate_spec(std::move(s));
}

// For H = y1^3 + y2^3 an exact orbit is y1 = -1/(3(z-z0)), y2 = 1/(3(z-z0)).
C exact_y1(const C& z, const C& z0) { return -1.0 / (3.0 * (z - z0)); }
C exact_y2(const C& z, const C& z0) { return 1.0 / (3.0 * (z - z0)); }

HamiltonianSpec cubic_admissible() {
  HamiltonianSpec s;
  s.M = s.N = 2;
  s.leading1 = CRat(Rat(1, 3));
  s.leading2 = CRat(Rat(1, 3));
  s.alphas[{1, 1}] = CoeffPoly::z();
  s.alphas[{1, 0}] = CoeffPoly::constant(CRat(1));
  s.alphas[{0, 1}] = CoeffPoly::constant(CRat(2));
  return validate_spec(std::move(s));
}

}  // namespace

TEST_CASE("path validation and detours") {
  Path<C> bad{PathSeg<C>::line(C(0), C(1)), PathSeg<C>::line(C(2), C(3))};
  CHECK_THROWS_AS(validate_path(bad), Error);

  auto det = line_with_detours(C(0), C(2), {C(1.0, 0.0)}, 0.25);
  CHECK(det.size() == 3);
  validate_path(det);
  // The arc keeps its distance from the avoided point.
  for (double t = 0; t <= 1.0; t += 0.05)
    CHECK(std::abs(det[1].point(t) - C(1.0, 0.0)) == doctest::Approx(0.25));
  CHECK(std::abs(det.front().point(0.0) - C(0)) < 1e-15);
  CHECK(std::abs(det.back().point(1.0) - C(2)) < 1e-15);
}

TEST_CASE("continuation matches the exact autonomous orbit") {
  auto s = autonomous22();
  const C z0(0.3, 0.7);
  const C zs = z0 + C(1.0);
  FlowOptions opts;
  opts.rtol = 1e-11;
  opts.atol = 1e-13;
  Path<C> path{PathSeg<C>::line(zs, z0 + C(0.1))};
  auto tr = continue_along_path(s, zs, exact_y1(zs, z0), exact_y2(zs, z0), path, opts);
  CHECK(!tr.blew_up);
  CHECK(tr.samples.size() > 10);
  double sup = 0;
  for (const auto& smp : tr.samples) {
    sup = std::max(sup, std::abs(smp.y1 - exact_y1(smp.z, z0)));
    sup = std::max(sup, std::abs(smp.y2 - exact_y2(smp.z, z0)));
  }
  CHECK(sup < 1e-8);
  // The Hamiltonian is conserved for autonomous coefficients.
  const auto& e = tr.samples.back();
  C h0 = hamiltonian_value(s, zs, tr.samples.front().y1, tr.samples.front().y2);
  C h1 = hamiltonian_value(s, e.z, e.y1, e.y2);
  CHECK(std::abs(h1 - h0) < 1e-9);
}

TEST_CASE("blow-up, landing, and Puiseux data on the exact pole") {
  auto s = autonomous22();
  auto aux = solve_betas(s);
  const C z0(0.3, 0.7);
  const C zs = z0 + C(1.0);
  FlowOptions opts;
  opts.rtol = 1e-12;
  opts.atol = 1e-14;
  opts.r_switch = 100.0;
  Path<C> path{PathSeg<C>::line(zs, z0)};
  auto tr = continue_along_path(s, zs, exact_y1(zs, z0), exact_y2(zs, z0), path, opts);
  REQUIRE(tr.blew_up);
  CHECK(std::abs(tr.samples.back().y1) >= 100.0);

  auto land = land_on_singularity(s, aux, tr, opts);
  CHECK(land.reached);
  CHECK(std::abs(land.z_inf - z0) < 1e-8);
  // W = H vanishes identically on this orbit and must stay that way through
  // the chart, all the way to u = 0.
  for (const auto& p : land.chart) CHECK(std::abs(p.W) < 1e-8);
  CHECK(land.chart_defect < 1e-10);
  // rho/d = 1 here, so the leading datum is c1 itself: class 1, c1 = -1/3.
  CHECK(land.branch_class == 1);
  CHECK(std::abs(land.leading - C(-1.0 / 3.0)) < 1e-6);
  CHECK(std::abs(land.w0 - C(-1.0)) < 1e-9);
  // Puiseux exponents -(N+1)/rho = -(M+1)/rho = -1.
  CHECK(land.fit.points >= 20);
  CHECK(land.fit.exponent1 == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(land.fit.exponent2 == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(land.fit.residual < 1e-6);

  // Reconstruction from the chart agrees with the exact orbit.
  for (const auto& smp : land.reconstruct(1e6)) {
    CHECK(std::abs(smp.y1 - exact_y1(smp.z, z0)) < 1e-6 * std::abs(smp.y1));
    CHECK(std::abs(smp.y2 - exact_y2(smp.z, z0)) < 1e-6 * std::abs(smp.y2));
  }

  // Truncated local series at the located singularity matches the flow. Only
  // exponent numerators divisible by d carry coefficients, so any root of
  // z - z_inf = t^rho gives the same value; use the principal one.
  auto series = instantiate_numeric<C>(s, land.z_inf, land.branch_class, 10);
  for (const auto& smp : land.reconstruct(1e4)) {
    C dz = smp.z - land.z_inf;
    if (std::abs(dz) > 1e-2) continue;
    C t = std::pow(dz, 1.0 / double(series.ramification));
    CHECK(std::abs(series.eval1(t) - smp.y1) < 1e-4 * std::abs(smp.y1));
    CHECK(std::abs(series.eval2(t) - smp.y2) < 1e-4 * std::abs(smp.y2));
  }

  // Single-sheet monodromy: one loop closes.
  auto start = sample_near_abs_y1(tr, 15.0);
  auto mono = monodromy_loop(s, land.z_inf, start, 1, opts);
  REQUIRE(mono.defects.size() == 1);
  CHECK(mono.defects[0] < 1e-6);
  CHECK(mono.sheets == 1);

  // W stays near zero along the whole approach trace.
  for (const auto& wv : w_trace(aux, s, tr)) CHECK(std::abs(wv) < 1e-8);
}

TEST_CASE("zero crossing is reported") {
  auto s = autonomous22();
  auto aux = solve_betas(s);
  ContinuationTrace<C> tr;
  tr.samples.push_back({0.0, C(0), C(1e-12), C(1), 0.0});
  CHECK_THROWS_AS(w_trace(aux, s, tr), Error);
}

TEST_CASE("hunting on the admissible cubic family") {
  auto s = cubic_admissible();
  auto aux = solve_betas(s);
  FlowOptions opts;
  opts.rtol = 1e-11;
  opts.atol = 1e-13;
  opts.r_switch = 100.0;
  auto hunt = hunt_singularities(s, aux, C(0), C(1.0), C(1.0), C(0), 1.0, 4, opts);
  REQUIRE(!hunt.events.empty());
  for (const auto& ev : hunt.events) {
    CHECK(std::abs(ev.z_inf) <= 1.0 + 1e-9);
    CHECK(ev.sheets == 1);
    CHECK(ev.sheets_expected == 1);
    CHECK(!ev.closure_defects.empty());
    CHECK(ev.closure_defects.back() < 1e-6);
    // Leading law: c1^3 = -1/(L2 L1^2 rho^3) = -1.
    C cube = ev.leading * ev.leading * ev.leading;
    CHECK(std::abs(cube - C(-1.0)) < 1e-4);
    CHECK(ev.chart_defect < 1e-8);
    CHECK(ev.exponent1 == doctest::Approx(-1.0).epsilon(1e-3));
  }
}

TEST_CASE("violating coefficients: W grows on approach") {
  HamiltonianSpec bad;
  bad.M = bad.N = 2;
  bad.alphas[{1, 1}] = CoeffPoly::z() * CoeffPoly::z();
  bad = validate_spec(std::move(bad));
  auto aux = solve_betas(bad, /*allow_nonzero_gamma=*/true);

  FlowOptions opts;
  opts.rtol = 1e-11;
  opts.atol = 1e-13;
  opts.r_switch = 100.0;
  // Start from near-pole data (leading balance c1 = -1/3, c2 = 1/3 at
  // distance 0.01 ahead) so the trajectory runs into its singularity fast.
  // Near z = 0 the coefficient z^2 itself is tiny, so W starts small and the
  // logarithmic divergence driven by the violated condition stands out.
  const C zs(0.01, 0.005);
  const C y10 = C(-1.0) / C(3 * -0.01), y20 = C(1.0) / C(3 * -0.01);
  Path<C> path{PathSeg<C>::line(zs, zs + C(0.05))};
  auto tr = continue_along_path(bad, zs, y10, y20, path, opts);
  REQUIRE(tr.blew_up);

  // Landing to u = 0 is impossible while W diverges...
  CHECK_THROWS_AS(land_on_singularity(bad, aux, tr, opts), Error);
  // ... but a partial chart run is fine and shows the growth of W.
  double sigma_min = 1e-4;  // |y1| from 1e2 up to 1e6
  auto land = land_on_singularity(bad, aux, tr, opts, sigma_min);
  CHECK(!land.reached);
  REQUIRE(land.chart.size() > 5);
  double w_first = std::abs(land.chart.front().W);
  double w_last = std::abs(land.chart.back().W);
  CHECK(w_last > 2.0 * std::max(w_first, 1e-12));
  CHECK(land.chart_defect < 1e-8);
}

TEST_CASE("extended precision instantiation") {
  auto s = autonomous22();
  const CM z0(0.25, 0.5);
  const CM zs = z0 + CM(1.0);
  CM y1 = CM(-1) / (CM(3) * (zs - z0)), y2 = CM(1) / (CM(3) * (zs - z0));
  FlowOptions opts;
  opts.rtol = 1e-24;
  opts.atol = 1e-28;
  Path<CM> path{PathSeg<CM>::line(zs, z0 + CM(0.25))};
  auto tr = continue_along_path(s, zs, y1, y2, path, opts);
  CHECK(!tr.blew_up);
  const auto& e = tr.samples.back();
  CM ex = CM(-1) / (CM(3) * (e.z - z0));
  // The double-valued path parameter floors the attainable accuracy; the
  // extended scalar still beats plain double by several orders.
  CHECK(abs_d(e.y1 - ex) < 1e-12);
}
