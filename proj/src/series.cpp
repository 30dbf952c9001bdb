#include "hamsing/series.hpp"

#include <algorithm>

#include "hamsing/series_detail.hpp"

namespace hamsing {

QuotientRing make_leading_ring(const HamiltonianSpec& spec) {
  const long rho = long(spec.M) * spec.N - 1;
  if (rho < 1) throw Error("DegenerateClass", "MN = 1 is outside the class");
  CRat denom = spec.leading2;
  for (int i = 0; i < spec.N; ++i) denom *= spec.leading1;
  for (int i = 0; i < spec.N + 1; ++i) denom *= CRat(Rat(rho));
  return QuotientRing(int(rho), CRat(-1) / denom);
}

std::vector<LeadingClass> leading_coefficients(const HamiltonianSpec& spec) {
  QuotientRing ring = make_leading_ring(spec);
  auto sc = structural_constants(spec.M, spec.N);
  const long rho = ring.rho();
  QuotientRing::Elem c1 = ring.c();
  QuotientRing::Elem c2 = ring.scale(CRat(Rat(rho)) * spec.leading1, ring.pow_c(spec.M));
  std::vector<LeadingClass> out;
  for (int n = 0; n < sc.d; ++n) out.push_back({n, c1, c2});
  return out;
}

long resonance_offset(int M, int N) { return long(M + 1) * (N + 1); }

RecursionMatrix recursion_matrix(const HamiltonianSpec& spec, long k) {
  const int M = spec.M, N = spec.N;
  QuotientRing ring = make_leading_ring(spec);
  auto sc = structural_constants(M, N);
  const long rho = ring.rho();
  const long r = k * sc.d + (N + 1);
  RecursionMatrix out;
  out.a11 = out.a12 = out.a21 = out.a22 = ring.zero();
  if (r == 0) {
    // Leading index: the pair is fixed by the algebraic leading-order balance,
    // not by a linear solve; reported as the conventional singular step.
    out.leading_order = true;
    out.det = 0;
    return out;
  }
  QuotientRing::Elem b0 =
      ring.scale(CRat(Rat(rho)) * spec.leading1, ring.pow_c(M));
  Rat d11(r - N - 1, rho), d22(r - M - 1, rho);
  d11.canonicalize();
  d22.canonicalize();
  out.a11 = ring.scalar(CRat(d11));
  out.a22 = ring.scalar(CRat(d22));
  out.a12 = ring.one();
  for (int i = 0; i < N - 1; ++i) out.a12 = ring.mul(out.a12, b0);
  out.a12 = ring.scale(CRat(Rat(-long(N) * (N + 1))) * spec.leading2, out.a12);
  out.a21 = ring.scale(CRat(Rat(long(M) * (M + 1))) * spec.leading1,
                       ring.pow_c(M - 1));
  QuotientRing::Elem det =
      ring.sub(ring.mul(out.a11, out.a22), ring.mul(out.a12, out.a21));
  if (!QuotientRing::is_rational(det) || !det[0].is_real())
    throw Error("NonRationalDeterminant",
                "determinant failed to reduce to a rational");
  out.det = det[0].re;
  return out;
}

std::pair<SymbolicPuiseux, std::vector<ResonanceCondition>> derive_formal_series(
    const HamiltonianSpec& spec, int branch_class, long K) {
  const long r_res = resonance_offset(spec.M, spec.N);
  const long smax = K + spec.N + 1;
  if (smax < r_res)
    throw Error("TruncationTooShort",
                "order K must reach the resonance exponent " +
                    std::to_string(r_res - spec.N - 1));
  SymbolicPuiseux series;
  series.ring = std::make_shared<QuotientRing>(make_leading_ring(spec));
  series.ramification = series.ring->rho();
  series.k1 = -(spec.N + 1);
  series.k2 = -(spec.M + 1);
  series.K = K;
  series.branch_class = branch_class;

  detail::SymbolicField f(series.ring);
  auto rec = detail::run_recursion(spec, f, smax);
  series.coeffs1 = std::move(rec.A);
  series.coeffs2 = std::move(rec.B);

  std::vector<ResonanceCondition> conditions;
  for (auto& [r, G] : rec.resonances) {
    series.free_param_offsets.push_back(r);
    for (auto& comp : G.split_c_components())
      if (!comp.is_zero())
        conditions.push_back({comp.canonicalized(), r + series.k1});
  }
  return {std::move(series), std::move(conditions)};
}

namespace {

HamiltonianSpec generic_spec(int M, int N) {
  HamiltonianSpec spec;
  spec.M = M;
  spec.N = N;
  spec.leading1 = spec.leading2 = CRat(1);
  for (const auto& ij : build_index_set(M, N)) {
    if (ij == IndexPair{0, 0} || ij == IndexPair{0, N}) continue;
    if (M == N && ij == IndexPair{M, 0}) continue;
    // Placeholder: the symbolic engine only reads which slots are occupied.
    spec.alphas[ij] = CoeffPoly::z();
  }
  return validate_spec(std::move(spec));
}

bool same_condition(const ResonanceCondition& a, const ResonanceCondition& b) {
  return a.order == b.order && a.expression == b.expression;
}

}  // namespace

std::vector<ResonanceCondition> resonance_conditions(int M, int N) {
  if (M < 1 || N < M) throw Error("DegreeOrder", "require 1 <= M <= N");
  if (long(M) * N == 1) throw Error("DegenerateClass", "MN = 1 is outside the class");
  HamiltonianSpec spec = generic_spec(M, N);
  auto sc = structural_constants(M, N);
  const long K = resonance_offset(M, N) - (N + 1);

  std::vector<ResonanceCondition> merged;
  for (int n = 0; n < sc.d; ++n) {
    auto [series, conds] = derive_formal_series(spec, n, K);
    (void)series;
    if (n == 0) {
      merged = std::move(conds);
      continue;
    }
    // The d branch classes share the symbolic derivation; the c-component
    // split realizes the union over classes, so the per-class lists must
    // agree exactly.
    bool equal = merged.size() == conds.size();
    for (size_t q = 0; equal && q < merged.size(); ++q)
      equal = same_condition(merged[q], conds[q]);
    if (!equal)
      throw Error("BranchInconsistency",
                  "resonance conditions differ across branch classes");
  }
  // Deduplicate up to the canonical representative.
  std::vector<ResonanceCondition> out;
  for (auto& c : merged) {
    bool dup = false;
    for (auto& o : out) dup = dup || same_condition(o, c);
    if (!dup) out.push_back(std::move(c));
  }
  return out;
}

SymPoly resonance_compatibility(const HamiltonianSpec& spec) {
  auto ring = std::make_shared<QuotientRing>(make_leading_ring(spec));
  detail::SymbolicField f(ring);
  auto rec = detail::run_recursion(spec, f, resonance_offset(spec.M, spec.N));
  if (rec.resonances.size() != 1)
    throw Error("NonRationalDeterminant", "expected exactly one resonance");
  return rec.resonances.front().second;
}

std::vector<ResonanceCondition> violated_conditions(const HamiltonianSpec& spec) {
  const long K = resonance_offset(spec.M, spec.N) - (spec.N + 1);
  auto [series, conds] = derive_formal_series(spec, 0, K);
  (void)series;
  std::vector<ResonanceCondition> bad;
  for (auto& c : conds)
    if (!c.expression.eval_on_spec(spec).is_zero()) bad.push_back(c);
  return bad;
}

std::pair<long, long> predicted_residual_exponents(const HamiltonianSpec& spec, long K) {
  const long rho = long(spec.M) * spec.N - 1;
  // Nonzero coefficients occur only at exponent numerators divisible by d,
  // so the first dropped term sits at the next multiple of d above K.
  const long d = structural_constants(spec.M, spec.N).d;
  const long kd = (K / d + 1) * d;
  return {kd - rho - (spec.N - spec.M), kd - rho};
}

}  // namespace hamsing
