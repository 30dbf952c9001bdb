#pragma once

#include <memory>
#include <vector>

#include "hamsing/errors.hpp"
#include "hamsing/rational.hpp"

namespace hamsing {

/// Quotient ring Q(i)[c] / (c^rho - modulus). Elements are dense coefficient
/// vectors of length rho. The symbol c stands for the leading Puiseux
/// coefficient c_{1,-N-1}, the modulus for its (MN-1)-th power constraint.
class QuotientRing {
 public:
  using Elem = std::vector<CRat>;

  QuotientRing(int rho, CRat modulus) : rho_(rho), mod_(std::move(modulus)) {
    if (rho_ < 1) throw Error("DegenerateClass", "quotient ring needs rho >= 1");
  }

  int rho() const { return rho_; }
  const CRat& modulus() const { return mod_; }

  Elem zero() const { return Elem(rho_); }
  Elem one() const { return scalar(CRat(1)); }
  Elem scalar(CRat v) const {
    Elem e(rho_);
    e[0] = std::move(v);
    return e;
  }
  Elem c() const {
    Elem e(rho_);
    if (rho_ == 1) {
      e[0] = mod_;  // c itself reduces to the modulus when rho = 1
    } else {
      e[1] = CRat(1);
    }
    return e;
  }

  static bool is_zero(const Elem& e) {
    for (const auto& v : e)
      if (!v.is_zero()) return false;
    return true;
  }

  Elem add(const Elem& a, const Elem& b) const {
    Elem r = a;
    for (int k = 0; k < rho_; ++k) r[k] += b[k];
    return r;
  }
  Elem sub(const Elem& a, const Elem& b) const {
    Elem r = a;
    for (int k = 0; k < rho_; ++k) r[k] -= b[k];
    return r;
  }
  Elem neg(const Elem& a) const {
    Elem r = a;
    for (auto& v : r) v = -v;
    return r;
  }
  Elem scale(const CRat& s, const Elem& a) const {
    Elem r = a;
    for (auto& v : r) v = s * v;
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const {
    Elem r(rho_);
    for (int i = 0; i < rho_; ++i) {
      if (a[i].is_zero()) continue;
      for (int j = 0; j < rho_; ++j) {
        if (b[j].is_zero()) continue;
        int k = i + j;
        CRat t = a[i] * b[j];
        if (k >= rho_) {
          k -= rho_;
          t *= mod_;  // reduce by c^rho = modulus
        }
        r[k] += t;
      }
    }
    return r;
  }
  Elem pow_c(long e) const {  // c^e reduced
    Elem r = one();
    Elem base = c();
    for (long k = 0; k < e; ++k) r = mul(r, base);
    return r;
  }

  /// True when the element has no residual c-dependence.
  static bool is_rational(const Elem& e) {
    for (size_t k = 1; k < e.size(); ++k)
      if (!e[k].is_zero()) return false;
    return true;
  }

  /// Division by an exact Gaussian-rational scalar (the only division the
  /// recursion needs on its expected path; the determinants are rational).
  Elem div_scalar(const Elem& a, const CRat& s) const {
    if (s.is_zero()) throw std::domain_error("QuotientRing: division by zero scalar");
    return scale(CRat(1) / s, a);
  }

  /// Numeric evaluation at a concrete root of c^rho = modulus.
  template <class C>
  C eval(const Elem& e, const C& croot) const {
    C acc(0);
    for (int k = rho_ - 1; k >= 0; --k) acc = acc * croot + to_complex<C>(e[k]);
    return acc;
  }

 private:
  int rho_;
  CRat mod_;
};

}  // namespace hamsing
