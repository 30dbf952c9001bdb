#pragma once

#include <memory>
#include <vector>

#include "hamsing/model.hpp"
#include "hamsing/symbols.hpp"

namespace hamsing {

/// Ring carrying the leading-coefficient relation of the series ansatz:
/// c^rho = -(leading2 * leading1^N * rho^{N+1})^{-1}, rho = MN-1.
QuotientRing make_leading_ring(const HamiltonianSpec& spec);

/// One of the d inequivalent leading behaviors. The symbolic data is the same
/// for every class (c stands for any admissible root); classes differ by which
/// numeric root of the modulus is selected on instantiation.
struct LeadingClass {
  int class_index = 0;
  QuotientRing::Elem c1;  // = c
  QuotientRing::Elem c2;  // = (MN-1) * leading1 * c^M
};

std::vector<LeadingClass> leading_coefficients(const HamiltonianSpec& spec);

/// Linear system for the coefficient pair at collapsed series index k
/// (exponent k*d/(MN-1)); unknowns are (c_{1,k*d-?}) in offset form
/// r = k*d + N + 1. The diagonal entries are rational, the off-diagonal ones
/// live in the c-extension, but their product -- and hence the determinant --
/// reduces to a rational number; this is asserted.
struct RecursionMatrix {
  bool leading_order = false;  // k at the leading index: coefficients are
                               // constrained algebraically, not linearly
  QuotientRing::Elem a11, a12, a21, a22;
  Rat det;
};

RecursionMatrix recursion_matrix(const HamiltonianSpec& spec, long k);

/// Offset of the (unique) positive resonance: r* = (M+1)(N+1), i.e. the
/// integer root of the determinant polynomial.
long resonance_offset(int M, int N);

struct ResonanceCondition {
  SymPoly expression;
  long order = 0;  // series index k (numerator units) of c_{1,k} at which it arose
  std::string text() const { return expression.str(); }
};

/// Formal Puiseux series with DerivSymbolPoly coefficients, offset-indexed:
/// coeffs1[s] multiplies (z-z0)^{(k1+s)/ram}.
struct SymbolicPuiseux {
  std::shared_ptr<QuotientRing> ring;
  long ramification = 0;
  long k1 = 0, k2 = 0;  // start exponent numerators: -(N+1), -(M+1)
  long K = 0;           // truncation: exponent numerators <= K
  int branch_class = 0;
  std::vector<SymPoly> coeffs1, coeffs2;
  std::vector<long> free_param_offsets;  // offsets r with coeffs2[r] = lam_r
};

/// Order-by-order solve of the formal series. Records the compatibility
/// expression at the resonance and introduces a free parameter there.
/// Conditions are returned split into c-components and canonicalized.
/// Throws TruncationTooShort when K does not reach the resonance.
std::pair<SymbolicPuiseux, std::vector<ResonanceCondition>> derive_formal_series(
    const HamiltonianSpec& spec, int branch_class, long K);

/// Conditions for the fully generic normalized spec of bidegree (M, N):
/// leading coefficients 1, a generic coefficient function at every index of
/// I except (0,0), (0,N), and (M,0) when M == N. Derived once per branch
/// class and merged; a mismatch across classes raises BranchInconsistency.
std::vector<ResonanceCondition> resonance_conditions(int M, int N);

/// Raw (un-split) compatibility expression at the resonance for the given
/// spec, exposed for cross-checks.
SymPoly resonance_compatibility(const HamiltonianSpec& spec);

/// Checks the spec's own resonance conditions exactly; returns the offending
/// condition polynomials (empty = admissible).
std::vector<ResonanceCondition> violated_conditions(const HamiltonianSpec& spec);

/// Numeric Puiseux data at a concrete base point and branch root.
template <class C>
struct NumericPuiseux {
  C z0{}, root{};
  long ramification = 0;
  long k1 = 0, k2 = 0;
  long K = 0;
  std::vector<C> coeffs1, coeffs2;

  // Values at z = z0 + t^ramification.
  C eval1(const C& t) const { return eval(coeffs1, k1, t); }
  C eval2(const C& t) const { return eval(coeffs2, k2, t); }
  // d/dz along the same branch: (d/dt) / (ram * t^{ram-1}).
  C eval1_dz(const C& t) const { return eval_dz(coeffs1, k1, t); }
  C eval2_dz(const C& t) const { return eval_dz(coeffs2, k2, t); }

 private:
  C eval(const std::vector<C>& a, long k0, const C& t) const {
    C tp = pow_int(t, k0);
    C acc(0);
    for (long s = 0; s < long(a.size()); ++s) {
      if (k0 + s > K) break;
      acc += a[s] * tp;
      tp *= t;
    }
    return acc;
  }
  C eval_dz(const std::vector<C>& a, long k0, const C& t) const {
    C tp = pow_int(t, k0 - 1);
    C acc(0);
    for (long s = 0; s < long(a.size()); ++s) {
      if (k0 + s > K) break;
      acc += C(double(k0 + s)) * a[s] * tp;
      tp *= t;
    }
    C ram{double(ramification)};
    return acc / (ram * pow_int(t, ramification - 1));
  }
  static C pow_int(const C& t, long e) {
    C r(1);
    for (long i = 0; i < (e >= 0 ? e : -e); ++i) r *= t;
    return e >= 0 ? r : C(1) / r;
  }
};

/// Roots of c^rho = modulus, ordered by argument offset: class/root index n
/// selects exp(i(arg m + 2 pi n)/rho) * |m|^{1/rho}.
template <class C>
C leading_root(const HamiltonianSpec& spec, int n);

/// Residual of the Hamiltonian equations on the truncated numeric series at
/// z = z0 + t^{MN-1}.
template <class C>
std::pair<C, C> series_residual(const HamiltonianSpec& spec,
                                const NumericPuiseux<C>& series, const C& t);

/// Predicted residual decay exponents in |t| for truncation at exponent K.
/// With Kd the smallest multiple of d above K (the first dropped exponent),
/// component 1 decays like |t|^{Kd-rho-(N-M)}, component 2 like |t|^{Kd-rho}.
/// This is the generic prediction; sparse coefficient data can push the first
/// nonvanishing residual term higher (see truncation_residual_exponents).
std::pair<long, long> predicted_residual_exponents(const HamiltonianSpec& spec, long K);

/// Exact residual exponents for a concrete truncated series: the kept part is
/// a Laurent polynomial in t, hence so are both equation residuals, and their
/// lowest exponents can be read off after exact convolution. Coefficients
/// whose magnitude is below rel_tol times the largest one count as zero (the
/// kept levels cancel only to the working precision of C).
template <class C>
std::pair<long, long> truncation_residual_exponents(const HamiltonianSpec& spec,
                                                    const NumericPuiseux<C>& s,
                                                    double rel_tol = 1e-30) {
  const long rho = s.ramification;
  struct LP {
    long base = 0;
    std::vector<C> c;
  };
  auto mul = [](const LP& a, const LP& b) {
    LP r;
    if (a.c.empty() || b.c.empty()) return r;
    r.base = a.base + b.base;
    r.c.assign(a.c.size() + b.c.size() - 1, C(0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
  };
  auto add_scaled = [](LP& a, const LP& b, const C& scale) {
    if (b.c.empty()) return;
    long lo = a.c.empty() ? b.base : std::min(a.base, b.base);
    long hi = a.c.empty() ? b.base + long(b.c.size())
                          : std::max(a.base + long(a.c.size()), b.base + long(b.c.size()));
    std::vector<C> merged(hi - lo, C(0));
    for (std::size_t i = 0; i < a.c.size(); ++i) merged[a.base - lo + i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) merged[b.base - lo + i] += scale * b.c[i];
    a.base = lo;
    a.c = std::move(merged);
  };
  auto power = [&](const LP& x, int e) {
    LP r;
    r.c = {C(1)};
    for (int k = 0; k < e; ++k) r = mul(r, x);
    return r;
  };
  // The kept part mirrors the evaluation cut at exponent K.
  auto kept = [&](const std::vector<C>& a, long k0) {
    LP r;
    r.base = k0;
    for (long i = 0; i < long(a.size()) && k0 + i <= s.K; ++i) r.c.push_back(a[i]);
    return r;
  };
  // d/dz = t^{1-rho}/rho d/dt along z = z0 + t^rho.
  auto ddz = [&](const LP& a) {
    LP r;
    r.base = a.base - rho;
    for (std::size_t i = 0; i < a.c.size(); ++i)
      r.c.push_back(C(double(a.base + long(i))) / C(double(rho)) * a.c[i]);
    return r;
  };
  // alpha(z0 + t^rho) by the finite Taylor expansion about z0.
  auto coeff_lp = [&](const CoeffPoly& p) {
    LP r;
    CoeffPoly d = p;
    C fact(1);
    long m = 0;
    while (!d.is_zero()) {
      LP term;
      term.base = rho * m;
      term.c = {d.template eval<C>(s.z0) / fact};
      add_scaled(r, term, C(1));
      d = d.derivative();
      ++m;
      fact *= C(double(m));
    }
    return r;
  };

  LP y1 = kept(s.coeffs1, s.k1), y2 = kept(s.coeffs2, s.k2);
  LP r1 = ddz(y1), r2 = ddz(y2);
  // r1 = y1' - dH/dy2, r2 = y2' + dH/dy1.
  add_scaled(r1, power(y2, spec.N), -C(double(spec.N + 1)) * to_complex<C>(spec.leading2));
  add_scaled(r2, power(y1, spec.M), C(double(spec.M + 1)) * to_complex<C>(spec.leading1));
  for (const auto& [ij, poly] : spec.alphas) {
    auto [i, j] = ij;
    LP a = coeff_lp(poly);
    if (j >= 1)
      add_scaled(r1, mul(a, mul(power(y1, i), power(y2, j - 1))), -C(double(j)));
    if (i >= 1)
      add_scaled(r2, mul(a, mul(power(y1, i - 1), power(y2, j))), C(double(i)));
  }

  auto first_exponent = [&](const LP& r) {
    double top = 0;
    for (const auto& v : r.c) top = std::max(top, double(abs_d(v)));
    for (std::size_t i = 0; i < r.c.size(); ++i)
      if (double(abs_d(r.c[i])) > rel_tol * top) return r.base + long(i);
    throw Error("ZeroResidual", "truncated series solves the system exactly");
  };
  return {first_exponent(r1), first_exponent(r2)};
}

/// Re-runs the recursion numerically. check_conditions (default on) verifies
/// the spec's resonance conditions symbolically first and throws
/// ConditionsViolated if any fails; free_value is the resonance coefficient.
template <class C>
NumericPuiseux<C> instantiate_numeric(const HamiltonianSpec& spec, const C& z0,
                                      int branch_class, long K,
                                      const C& free_value = C(0),
                                      bool check_conditions = true);

}  // namespace hamsing

#include "hamsing/series_impl.hpp"
