#pragma once

#include <vector>

#include "hamsing/rational.hpp"

namespace hamsing {

/// Polynomial in z with exact Gaussian-rational coefficients, ascending
/// powers, trailing zeros stripped. The zero polynomial is the empty vector.
class CoeffPoly {
 public:
  CoeffPoly() = default;
  explicit CoeffPoly(std::vector<CRat> coeffs) : c_(std::move(coeffs)) { strip(); }
  static CoeffPoly constant(CRat v) {
    return v.is_zero() ? CoeffPoly{} : CoeffPoly{std::vector<CRat>{std::move(v)}};
  }
  static CoeffPoly z() { return CoeffPoly{{CRat(0), CRat(1)}}; }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero poly
  const std::vector<CRat>& coeffs() const { return c_; }
  CRat coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : CRat(0);
  }

  CoeffPoly operator-() const {
    CoeffPoly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  friend CoeffPoly operator+(const CoeffPoly& a, const CoeffPoly& b) {
    std::vector<CRat> r(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(int(i)) + b.coeff(int(i));
    return CoeffPoly(std::move(r));
  }
  friend CoeffPoly operator-(const CoeffPoly& a, const CoeffPoly& b) { return a + (-b); }
  friend CoeffPoly operator*(const CoeffPoly& a, const CoeffPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<CRat> r(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return CoeffPoly(std::move(r));
  }
  CoeffPoly& operator+=(const CoeffPoly& o) { return *this = *this + o; }
  CoeffPoly& operator-=(const CoeffPoly& o) { return *this = *this - o; }
  CoeffPoly& operator*=(const CoeffPoly& o) { return *this = *this * o; }
  friend CoeffPoly operator*(const CRat& s, const CoeffPoly& p) {
    if (s.is_zero()) return {};
    CoeffPoly r = p;
    for (auto& v : r.c_) v = s * v;
    return r;
  }
  friend bool operator==(const CoeffPoly& a, const CoeffPoly& b) { return a.c_ == b.c_; }

  CoeffPoly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<CRat> r(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) r[k - 1] = CRat(Rat(long(k))) * c_[k];
    return CoeffPoly(std::move(r));
  }

  /// k-th derivative evaluated exactly at an exact point.
  CRat derivative_at(int k, const CRat& z0) const {
    CoeffPoly p = *this;
    for (int i = 0; i < k; ++i) p = p.derivative();
    return p.eval_exact(z0);
  }

  CRat eval_exact(const CRat& z0) const {
    CRat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z0 + *it;
    return acc;
  }

  template <class C>
  C eval(const C& z) const {
    C acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + to_complex<C>(*it);
    return acc;
  }

  std::string str(const std::string& var = "z") const;

 private:
  void strip() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<CRat> c_;
};

}  // namespace hamsing
