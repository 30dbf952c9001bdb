#pragma once

#include <compare>
#include <memory>
#include <map>
#include <string>
#include <vector>

#include "hamsing/algebraic.hpp"
#include "hamsing/coeffpoly.hpp"
#include "hamsing/model.hpp"

namespace hamsing {

/// Formal symbol: either a[i,j,r] (the r-th z-derivative of alpha_ij at the
/// expansion point) or lam_r (the free coefficient introduced at a resonance).
struct SymKey {
  int kind = 0;  // 0 = alpha derivative, 1 = free parameter
  int i = 0, j = 0, r = 0;
  auto operator<=>(const SymKey&) const = default;

  static SymKey alpha(int i, int j, int r) { return SymKey{0, i, j, r}; }
  static SymKey free_param(int order) { return SymKey{1, 0, 0, order}; }
  std::string str() const;
};

using SymMono = std::map<SymKey, int>;  // symbol -> exponent, all exponents > 0

/// Multivariate polynomial in the formal symbols with coefficients in the
/// quotient ring Q(i)[c]/(c^rho - m). Immutable value semantics; the ring is
/// held by shared ownership.
class SymPoly {
 public:
  using RingPtr = std::shared_ptr<const QuotientRing>;

  SymPoly() = default;
  explicit SymPoly(RingPtr ring) : ring_(std::move(ring)) {}

  static SymPoly scalar(RingPtr ring, QuotientRing::Elem v);
  static SymPoly symbol(RingPtr ring, SymKey k);

  const RingPtr& ring() const { return ring_; }
  bool is_zero() const { return t_.empty(); }
  const std::map<SymMono, QuotientRing::Elem>& terms() const { return t_; }

  SymPoly operator-() const;
  friend SymPoly operator+(const SymPoly& a, const SymPoly& b);
  friend SymPoly operator-(const SymPoly& a, const SymPoly& b);
  friend SymPoly operator*(const SymPoly& a, const SymPoly& b);
  SymPoly& operator+=(const SymPoly& o) { return *this = *this + o; }
  SymPoly& operator-=(const SymPoly& o) { return *this = *this - o; }
  SymPoly scale(const QuotientRing::Elem& s) const;
  SymPoly scale_rat(const CRat& s) const;
  friend bool operator==(const SymPoly& a, const SymPoly& b) { return a.t_ == b.t_; }

  /// Formal d/dz: product rule, a[i,j,r] -> a[i,j,r+1]; free parameters are
  /// constants. Ring coefficients are unchanged (c is a number, not a function).
  SymPoly dz() const;

  /// True when every coefficient is free of residual c-dependence.
  bool coefficients_rational() const;

  /// Splits by powers of c: result[k] collects the c^k component of every
  /// coefficient, as a polynomial with plain scalar coefficients. The sum of
  /// result[k] * c^k reproduces the original polynomial.
  std::vector<SymPoly> split_c_components() const;

  /// Canonical representative up to a nonzero constant multiple: divides by
  /// the rational content and fixes the sign of the leading monomial.
  /// Requires rational (c-free) coefficients.
  SymPoly canonicalized() const;

  /// Substitutes a[i,j,r] -> the r-th derivative of spec.alpha(i,j) as a
  /// polynomial in z. Requires c-free coefficients and no free parameters.
  CoeffPoly eval_on_spec(const HamiltonianSpec& spec) const;

  std::string str() const;

 private:
  void insert(SymMono m, QuotientRing::Elem v);
  RingPtr ring_;
  std::map<SymMono, QuotientRing::Elem> t_;
};

}  // namespace hamsing
