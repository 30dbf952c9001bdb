#pragma once

// Embedded adaptive Dormand-Prince 5(4) pair over a complex scalar type.
// The independent variable is a real path parameter; the state is a fixed-size
// array of complex numbers. Accepted steps are reported through a callback,
// which may stop the integration early (e.g. on a blow-up threshold).

#include <algorithm>
#include <array>
#include <cmath>

#include "hamsing/errors.hpp"
#include "hamsing/mptypes.hpp"

namespace hamsing {

template <class C, std::size_t NS>
struct RkResult {
  bool reached_end = false;  // false when the callback stopped early
  double t = 0;
  std::array<C, NS> y{};
  long accepted = 0, rejected = 0;
};

/// Integrates y' = f(t, y) from t0 to t1 (t1 < t0 allowed).
/// f: (double t, const std::array<C,NS>&, std::array<C,NS>& out)
/// on_accept: (double t, const std::array<C,NS>&, double h_used) -> bool,
/// return false to stop. Throws StepUnderflow when the controller collapses.
template <class C, std::size_t NS, class F, class CB>
RkResult<C, NS> rk45(F&& f, double t0, double t1, std::array<C, NS> y,
                     double rtol, double atol, CB&& on_accept,
                     double h_init = 0.0) {
  // Dormand-Prince RK5(4)7M tableau, formed exactly in the working scalar so
  // the order conditions hold to full precision. (The path parameter itself
  // stays double, which floors the attainable trajectory accuracy near 1e-13
  // regardless of the scalar's precision; the extended-precision scalar is
  // for cancellation-heavy evaluations, not for tighter path tolerances.)
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  const C a21 = C(1) / C(5);
  const C a31 = C(3) / C(40), a32 = C(9) / C(40);
  const C a41 = C(44) / C(45), a42 = C(-56) / C(15), a43 = C(32) / C(9);
  const C a51 = C(19372) / C(6561), a52 = C(-25360) / C(2187),
          a53 = C(64448) / C(6561), a54 = C(-212) / C(729);
  const C a61 = C(9017) / C(3168), a62 = C(-355) / C(33),
          a63 = C(46732) / C(5247), a64 = C(49) / C(176),
          a65 = C(-5103) / C(18656);
  const C b1 = C(35) / C(384), b3 = C(500) / C(1113), b4 = C(125) / C(192),
          b5 = C(-2187) / C(6784), b6 = C(11) / C(84);
  // 5th-order minus embedded 4th-order weights.
  const C e1 = C(71) / C(57600), e3 = C(-71) / C(16695), e4 = C(71) / C(1920),
          e5 = C(-17253) / C(339200), e6 = C(22) / C(525), e7 = C(-1) / C(40);

  const double span = t1 - t0;
  if (span == 0.0) return {true, t0, y, 0, 0};
  const double dir = span > 0 ? 1.0 : -1.0;
  double h = h_init != 0.0 ? h_init : span / 100.0;
  if (h * dir <= 0) h = -h;
  const double hmin = std::abs(span) * 1e-14;

  RkResult<C, NS> res;
  res.t = t0;
  std::array<C, NS> k1, k2, k3, k4, k5, k6, k7, yt, y5;
  f(t0, y, k1);
  double t = t0;

  while (dir * (t1 - t) > 0) {
    if (dir * (t + h - t1) > 0) h = t1 - t;
    if (std::abs(h) < hmin)
      throw Error("StepUnderflow",
                  "step size collapsed at path parameter t = " + std::to_string(t));

    const C hc(h);
    for (std::size_t i = 0; i < NS; ++i) yt[i] = y[i] + hc * a21 * k1[i];
    f(t + c2 * h, yt, k2);
    for (std::size_t i = 0; i < NS; ++i)
      yt[i] = y[i] + hc * (a31 * k1[i] + a32 * k2[i]);
    f(t + c3 * h, yt, k3);
    for (std::size_t i = 0; i < NS; ++i)
      yt[i] = y[i] + hc * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(t + c4 * h, yt, k4);
    for (std::size_t i = 0; i < NS; ++i)
      yt[i] = y[i] + hc * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(t + c5 * h, yt, k5);
    for (std::size_t i = 0; i < NS; ++i)
      yt[i] = y[i] + hc * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
    f(t + h, yt, k6);
    for (std::size_t i = 0; i < NS; ++i)
      y5[i] = y[i] + hc * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                           b6 * k6[i]);
    f(t + h, y5, k7);  // FSAL stage, also the error estimator's last node

    double err = 0.0;
    for (std::size_t i = 0; i < NS; ++i) {
      C de = hc * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                   e6 * k6[i] + e7 * k7[i]);
      double sc = atol + rtol * std::max(abs_d(y[i]), abs_d(y5[i]));
      err = std::max(err, abs_d(de) / sc);
    }

    if (err <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // first-same-as-last
      ++res.accepted;
      double used = h;
      double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= grow;
      if (!on_accept(t, y, used)) {
        res.t = t;
        res.y = y;
        return res;
      }
    } else {
      ++res.rejected;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
      // k1 at (t, y) is unchanged and stays valid for the retry.
    }
  }
  res.reached_end = true;
  res.t = t;
  res.y = y;
  return res;
}

}  // namespace hamsing
