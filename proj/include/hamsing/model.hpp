#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "hamsing/coeffpoly.hpp"
#include "hamsing/errors.hpp"

namespace hamsing {

using IndexPair = std::pair<int, int>;

/// Index set I: non-negative pairs with i(N+1) + j(M+1) < (N+1)(M+1).
std::set<IndexPair> build_index_set(int M, int N);

/// Two-variable polynomial Hamiltonian
///   H = leading1 * y1^{M+1} + leading2 * y2^{N+1} + sum_I alpha_ij(z) y1^i y2^j
/// with constant nonzero leading coefficients and polynomial alpha_ij.
struct HamiltonianSpec {
  int M = 0;
  int N = 0;
  CRat leading1{1};
  CRat leading2{1};
  std::map<IndexPair, CoeffPoly> alphas;
  bool normalized = false;  // computed by validate()
  bool validated = false;

  const CoeffPoly& alpha(int i, int j) const {
    static const CoeffPoly kZero;
    auto it = alphas.find({i, j});
    return it == alphas.end() ? kZero : it->second;
  }
};

/// Validates class membership, canonicalizes polynomials, computes the
/// normalized flag. Throws Error with codes NonpositiveDegrees,
/// ZeroLeadingCoefficient, IndexOutsideClass, DegreeOrder.
HamiltonianSpec validate_spec(HamiltonianSpec spec);

struct StructuralConstants {
  Rat p;             // leading exponent of y1: -(N+1)/(MN-1)
  Rat q;             // leading exponent of y2: -(M+1)/(MN-1)
  long d = 1;        // gcd{M+1, N+1, MN-1}
  long ramification = 1;  // (MN-1)/d: sheets around a movable singularity
};

StructuralConstants structural_constants(int M, int N);

/// Zeros of the leading coefficient functions. Always empty here because the
/// class is restricted to constant nonzero leading coefficients; kept as an
/// explicit operation so callers can treat the fixed set uniformly.
std::vector<std::complex<double>> fixed_singularities(const HamiltonianSpec& spec);

/// Right-hand side (dH/dy2, -dH/dy1) of the Hamiltonian system.
template <class C>
std::pair<C, C> rhs(const HamiltonianSpec& spec, const C& z, const C& y1, const C& y2) {
  const int M = spec.M, N = spec.N;
  // Power tables up to the needed degrees.
  std::vector<C> p1(M + 1), p2(N + 1);
  p1[0] = C(1);
  for (int i = 1; i <= M; ++i) p1[i] = p1[i - 1] * y1;
  p2[0] = C(1);
  for (int j = 1; j <= N; ++j) p2[j] = p2[j - 1] * y2;
  C f1 = C(double(N + 1)) * to_complex<C>(spec.leading2) * p2[N];
  C f2 = C(-double(M + 1)) * to_complex<C>(spec.leading1) * p1[M];
  for (const auto& [ij, poly] : spec.alphas) {
    auto [i, j] = ij;
    if (i == 0 && j == 0) continue;  // constant term drops out of the equations
    C a = poly.eval(z);
    if (j >= 1) f1 += C(double(j)) * a * p1[i] * p2[j - 1];
    if (i >= 1) f2 -= C(double(i)) * a * p1[i - 1] * p2[j];
  }
  return {f1, f2};
}

template <class C>
C hamiltonian_value(const HamiltonianSpec& spec, const C& z, const C& y1, const C& y2) {
  C h = to_complex<C>(spec.leading1);
  for (int i = 0; i <= spec.M; ++i) h *= y1;
  C h2 = to_complex<C>(spec.leading2);
  for (int j = 0; j <= spec.N; ++j) h2 *= y2;
  h += h2;
  for (const auto& [ij, poly] : spec.alphas) {
    C t = poly.eval(z);
    for (int i = 0; i < ij.first; ++i) t *= y1;
    for (int j = 0; j < ij.second; ++j) t *= y2;
    h += t;
  }
  return h;
}

// JSON spec format, see README: rationals as [num, den], complex rationals as
// {"re": [n,d], "im": [n,d]}, polynomials as coefficient lists by ascending
// power of z.
HamiltonianSpec spec_from_json(const std::string& text);
HamiltonianSpec spec_from_file(const std::string& path);
std::string spec_to_json(const HamiltonianSpec& spec);

}  // namespace hamsing
