#pragma once

// Template implementations for the numeric half of the series engine.

#include <cmath>

#include "hamsing/series_detail.hpp"

namespace hamsing {

template <class C>
C leading_root(const HamiltonianSpec& spec, int n) {
  using R = typename C::value_type;
  QuotientRing ring = make_leading_ring(spec);
  const long rho = ring.rho();
  C m = to_complex<C>(ring.modulus());
  using std::atan2;
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  R re(m.real()), im(m.imag());
  R mag = sqrt(re * re + im * im);
  R ang = atan2(im, re);
  R pi = atan2(R(0), R(-1));
  R r = exp(log(mag) / R(double(rho)));
  R th = (ang + R(2.0 * n) * pi) / R(double(rho));
  return C(r * cos(th), r * sin(th));
}

template <class C>
NumericPuiseux<C> instantiate_numeric(const HamiltonianSpec& spec, const C& z0,
                                      int branch_class, long K,
                                      const C& free_value, bool check_conditions) {
  if (check_conditions) {
    auto bad = violated_conditions(spec);
    if (!bad.empty())
      throw Error("ConditionsViolated",
                  "resonance condition fails: " + bad.front().text());
  }
  QuotientRing ring = make_leading_ring(spec);
  C root = leading_root<C>(spec, branch_class);
  detail::NumericField<C> f(&ring, &spec, z0, root, free_value);
  const long smax = K + spec.N + 1;
  auto rec = detail::run_recursion(spec, f, smax);
  NumericPuiseux<C> out;
  out.z0 = z0;
  out.root = root;
  out.ramification = long(spec.M) * spec.N - 1;
  out.k1 = -(spec.N + 1);
  out.k2 = -(spec.M + 1);
  out.K = K;
  out.coeffs1 = std::move(rec.A);
  out.coeffs2 = std::move(rec.B);
  return out;
}

template <class C>
std::pair<C, C> series_residual(const HamiltonianSpec& spec,
                                const NumericPuiseux<C>& series, const C& t) {
  C z = series.z0;
  C tp(1);
  for (long i = 0; i < series.ramification; ++i) tp *= t;
  z += tp;
  C y1 = series.eval1(t), y2 = series.eval2(t);
  auto [f1, f2] = rhs(spec, z, y1, y2);
  return {series.eval1_dz(t) - f1, series.eval2_dz(t) - f2};
}

}  // namespace hamsing
