#pragma once

// Auxiliary function W = H + sum_J beta_kl(z) y2^k / y1^l, bounded along any
// approach to a movable singularity once the resonance conditions hold. The
// construction rewrites W' into
//   W' = P*W + sum gamma_ij y1^i y2^j + gamma_{-1,N} y2^N/y1 + Q + R'
// with P, Q, R supported on bounded monomials, and chooses the beta_kl to make
// every removable gamma vanish.

#include <map>
#include <set>
#include <string>

#include "hamsing/model.hpp"

namespace hamsing {

/// Monomial key (a, b) standing for y1^a * y2^b; a may be negative, b >= 0.
using Mono = std::pair<int, int>;

/// Laurent polynomial in (y1, y2) with polynomial-in-z coefficients.
struct LaurentPoly {
  std::map<Mono, CoeffPoly> terms;

  void add(Mono m, const CoeffPoly& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = terms.emplace(m, c);
    if (!fresh) {
      it->second += c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }

  template <class C>
  C eval(const C& z, const C& y1, const C& y2) const {
    C acc(0);
    for (const auto& [m, c] : terms) acc += c.template eval<C>(z) * pow_mono(m, y1, y2);
    return acc;
  }

  /// Total z-derivative along the flow: d/dz [c(z) y1^a y2^b] with y1' = f1,
  /// y2' = f2.
  template <class C>
  C eval_total_derivative(const C& z, const C& y1, const C& y2, const C& f1,
                          const C& f2) const {
    C acc(0);
    for (const auto& [m, c] : terms) {
      auto [a, b] = m;
      C cv = c.template eval<C>(z);
      C cd = c.derivative().template eval<C>(z);
      acc += cd * pow_mono(m, y1, y2);
      if (a != 0) acc += C(double(a)) * cv * pow_mono({a - 1, b}, y1, y2) * f1;
      if (b != 0) acc += C(double(b)) * cv * pow_mono({a, b - 1}, y1, y2) * f2;
    }
    return acc;
  }

  template <class C>
  static C pow_mono(Mono m, const C& y1, const C& y2) {
    auto ipow = [](const C& y, int e) {
      C r(1);
      for (int k = 0; k < (e >= 0 ? e : -e); ++k) r *= y;
      return e >= 0 ? r : C(1) / r;
    };
    return ipow(y1, m.first) * ipow(y2, m.second);
  }
};

/// Index set J of the correction terms: 1 <= k <= N+1 and
/// 1 - MN < k(M+1) - l(N+1) < M+N+2.
std::set<Mono> build_J(int M, int N);

struct AuxiliaryW {
  int M = 0, N = 0;
  std::set<Mono> J;                        // admissible (k, l) pairs
  std::map<Mono, CoeffPoly> betas;         // correction coefficients on J
  std::map<IndexPair, CoeffPoly> gamma_report;  // residual coefficients; the
  // key (-1, N) stands for the y2^N/y1 term. All entries are exactly zero for
  // admissible specs; resonance-level entries carry the violation otherwise.
  LaurentPoly P, Q, R;                     // bounded certificate of W'
};

/// Determines the beta_kl by the triangular level-by-level solve and verifies
/// the non-removable gamma coefficients vanish. With allow_nonzero_gamma the
/// (nonzero) residuals are kept in gamma_report instead of raising
/// GammaNonzero, which is the negative-control mode.
AuxiliaryW solve_betas(const HamiltonianSpec& spec, bool allow_nonzero_gamma = false);

std::string aux_to_json(const AuxiliaryW& aux);

/// Numeric value of W. The leading terms nearly cancel near a singularity, so
/// the sum is compensated (Neumaier-style).
template <class C>
C eval_W(const AuxiliaryW& aux, const HamiltonianSpec& spec, const C& z,
         const C& y1, const C& y2) {
  using std::abs;
  if (y1 == C(0)) throw Error("DivisionByZero", "eval_W requires y1 != 0");
  C sum(0), comp(0);
  auto accumulate = [&](const C& t) {
    C s = sum + t;
    if (abs(sum) >= abs(t))
      comp += (sum - s) + t;
    else
      comp += (t - s) + sum;
    sum = s;
  };
  auto ipow = [](const C& y, int e) {
    C r(1);
    for (int k = 0; k < (e >= 0 ? e : -e); ++k) r *= y;
    return e >= 0 ? r : C(1) / r;
  };
  accumulate(to_complex<C>(spec.leading1) * ipow(y1, spec.M + 1));
  accumulate(to_complex<C>(spec.leading2) * ipow(y2, spec.N + 1));
  for (const auto& [ij, poly] : spec.alphas)
    accumulate(poly.template eval<C>(z) * ipow(y1, ij.first) * ipow(y2, ij.second));
  for (const auto& [kl, poly] : aux.betas)
    accumulate(poly.template eval<C>(z) * ipow(y2, kl.first) * ipow(y1, -kl.second));
  return sum + comp;
}

}  // namespace hamsing
