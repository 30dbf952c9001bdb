#pragma once

// Order-by-order solver for the formal series ansatz
//   y1 = sum_{s>=0} A[s] t^{(-(N+1)+s)/rho},  y2 = sum_{s>=0} B[s] t^{(-(M+1)+s)/rho}
// shared by the symbolic and the numeric engines through a coefficient-field
// policy F providing the scalar type and its arithmetic.

#include <map>
#include <utility>
#include <vector>

#include "hamsing/errors.hpp"
#include "hamsing/model.hpp"
#include "hamsing/series.hpp"

namespace hamsing::detail {

template <class F>
struct RecResult {
  std::vector<typename F::S> A, B;  // offset-indexed
  // (offset r, compatibility expression a11*F2 - a21*F1) per resonance hit
  std::vector<std::pair<long, typename F::S>> resonances;
};

template <class F>
RecResult<F> run_recursion(const HamiltonianSpec& spec, F& f, long smax) {
  using S = typename F::S;
  const int M = spec.M, N = spec.N;
  const long rho = long(M) * N - 1;
  const long r_res = long(M + 1) * (N + 1);
  const QuotientRing& ring = f.ring();

  // Structure constants of the linearized step.
  const CRat L1 = spec.leading1, L2 = spec.leading2;
  QuotientRing::Elem b0 = ring.scale(CRat(Rat(rho)) * L1, ring.pow_c(M));
  QuotientRing::Elem a12e = ring.one();
  for (int i = 0; i < N - 1; ++i) a12e = ring.mul(a12e, b0);
  a12e = ring.scale(CRat(Rat(-long(N) * (N + 1))) * L2, a12e);
  QuotientRing::Elem a21e =
      ring.scale(CRat(Rat(long(M) * (M + 1))) * L1, ring.pow_c(M - 1));
  S a12s = f.from_elem(a12e), a21s = f.from_elem(a21e);

  RecResult<F> out;
  out.A.resize(smax + 1, f.zero());
  out.B.resize(smax + 1, f.zero());
  out.A[0] = f.from_elem(ring.c());
  out.B[0] = f.from_elem(b0);

  // Alpha term bookkeeping: for equation 1 we need y1^i y2^{j-1} (j >= 1),
  // for equation 2 y1^{i-1} y2^j (i >= 1).
  std::vector<std::pair<IndexPair, CRat>> keys;
  for (const auto& [ij, poly] : spec.alphas)
    if (ij != IndexPair{0, 0}) keys.push_back({ij, CRat(0)});

  auto trunc_mul = [&](const std::vector<S>& a, const std::vector<S>& b, long len) {
    std::vector<S> r(len, f.zero());
    for (long i = 0; i < long(a.size()) && i < len; ++i)
      for (long j = 0; j < long(b.size()) && i + j < len; ++j)
        r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    return r;
  };

  for (long r = 1; r <= smax; ++r) {
    const long len = r + 1;
    // Power tables from the known coefficients (offsets 0..r-1).
    std::vector<std::vector<S>> p1(M + 1), p2(N + 1);
    p1[0] = std::vector<S>(len, f.zero());
    p1[0][0] = f.one();
    p2[0] = p1[0];
    std::vector<S> a1(out.A.begin(), out.A.begin() + r), b1(out.B.begin(), out.B.begin() + r);
    for (int i = 1; i <= M; ++i) p1[i] = trunc_mul(p1[i - 1], a1, len);
    for (int j = 1; j <= N; ++j) p2[j] = trunc_mul(p2[j - 1], b1, len);
    std::map<IndexPair, std::vector<S>> prod;  // (i,j) -> y1^i * y2^j series
    auto product = [&](int i, int j) -> const std::vector<S>& {
      auto it = prod.find({i, j});
      if (it == prod.end())
        it = prod.emplace(IndexPair{i, j}, trunc_mul(p1[i], p2[j], len)).first;
      return it->second;
    };

    const long X1 = r - (N + 1) - rho;  // exponent numerator in equation 1
    const long X2 = r - (M + 1) - rho;

    S F1 = f.mul_crat(CRat(Rat(N + 1)) * L2, p2[N][r]);
    S F2 = f.mul_crat(CRat(Rat(-(M + 1))) * L1, p1[M][r]);
    for (const auto& [ij, unused] : keys) {
      auto [i, j] = ij;
      (void)unused;
      if (j >= 1) {
        const long base = -long(i) * (N + 1) - long(j - 1) * (M + 1);
        const auto& ser = product(i, j - 1);
        for (long u = 0; X1 - rho * u - base >= 0; ++u) {
          const long idx = X1 - rho * u - base;
          if (idx < len)
            F1 = f.add(F1, f.mul_crat(CRat(Rat(j)),
                                      f.mul(f.alpha_taylor(i, j, u), ser[idx])));
        }
      }
      if (i >= 1) {
        const long base = -long(i - 1) * (N + 1) - long(j) * (M + 1);
        const auto& ser = product(i - 1, j);
        for (long u = 0; X2 - rho * u - base >= 0; ++u) {
          const long idx = X2 - rho * u - base;
          if (idx < len)
            F2 = f.sub(F2, f.mul_crat(CRat(Rat(i)),
                                      f.mul(f.alpha_taylor(i, j, u), ser[idx])));
        }
      }
    }

    Rat a11(r - N - 1, rho), a22(r - M - 1, rho);
    a11.canonicalize();
    a22.canonicalize();
    Rat det = (Rat(r - N - 1) * Rat(r - M - 1) -
               Rat(long(M) * N) * Rat(long(M + 1) * (N + 1))) /
              Rat(rho * rho);
    det.canonicalize();
    if (det != 0) {
      Rat inv = 1 / det;
      S t1 = f.sub(f.mul_crat(CRat(a22), F1), f.mul(a12s, F2));
      S t2 = f.sub(f.mul_crat(CRat(a11), F2), f.mul(a21s, F1));
      out.A[r] = f.mul_crat(CRat(inv), t1);
      out.B[r] = f.mul_crat(CRat(inv), t2);
    } else {
      if (r != r_res || a11 == 0)
        throw Error("NonRationalDeterminant", "unexpected singular step");
      S G = f.sub(f.mul_crat(CRat(a11), F2), f.mul(a21s, F1));
      out.resonances.push_back({r, G});
      out.B[r] = f.free_param(r);
      out.A[r] = f.mul_crat(CRat(1 / a11), f.sub(F1, f.mul(a12s, out.B[r])));
    }
  }
  return out;
}

/// Coefficient field over DerivSymbolPoly values.
struct SymbolicField {
  using S = SymPoly;
  SymPoly::RingPtr ring_;
  explicit SymbolicField(SymPoly::RingPtr r) : ring_(std::move(r)) {}
  const QuotientRing& ring() const { return *ring_; }
  S zero() const { return SymPoly(ring_); }
  S one() const { return SymPoly::scalar(ring_, ring_->one()); }
  S from_elem(const QuotientRing::Elem& e) const { return SymPoly::scalar(ring_, e); }
  S add(const S& a, const S& b) const { return a + b; }
  S sub(const S& a, const S& b) const { return a - b; }
  S mul(const S& a, const S& b) const { return a * b; }
  S mul_crat(const CRat& s, const S& a) const { return a.scale_rat(s); }
  S alpha_taylor(int i, int j, int u) const {
    Rat fact = 1;
    for (int q = 2; q <= u; ++q) fact *= q;
    return SymPoly::symbol(ring_, SymKey::alpha(i, j, u)).scale_rat(CRat(1 / fact));
  }
  S free_param(long r) const { return SymPoly::symbol(ring_, SymKey::free_param(int(r))); }
  bool is_zero(const S& a) const { return a.is_zero(); }
};

/// Coefficient field over a concrete complex type.
template <class C>
struct NumericField {
  using S = C;
  const QuotientRing* ring_;
  const HamiltonianSpec* spec;
  C z0, croot, free_value;
  mutable std::map<std::pair<IndexPair, int>, C> taylor_cache;

  NumericField(const QuotientRing* r, const HamiltonianSpec* sp, C z0_, C root,
               C free_val)
      : ring_(r), spec(sp), z0(z0_), croot(root), free_value(free_val) {}

  const QuotientRing& ring() const { return *ring_; }
  S zero() const { return C(0); }
  S one() const { return C(1); }
  S from_elem(const QuotientRing::Elem& e) const { return ring_->template eval<C>(e, croot); }
  S add(const S& a, const S& b) const { return a + b; }
  S sub(const S& a, const S& b) const { return a - b; }
  S mul(const S& a, const S& b) const { return a * b; }
  S mul_crat(const CRat& s, const S& a) const { return to_complex<C>(s) * a; }
  S alpha_taylor(int i, int j, int u) const {
    auto key = std::make_pair(IndexPair{i, j}, u);
    auto it = taylor_cache.find(key);
    if (it != taylor_cache.end()) return it->second;
    CoeffPoly p = spec->alpha(i, j);
    Rat fact = 1;
    for (int q = 1; q <= u; ++q) {
      p = p.derivative();
      fact *= q;
    }
    C v = p.template eval<C>(z0) / to_complex<C>(CRat(fact));
    taylor_cache.emplace(key, v);
    return v;
  }
  S free_param(long) const { return free_value; }
};

}  // namespace hamsing::detail
