#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hamsing {

using Rat = mpq_class;

/// Gaussian rational: exact complex number with rational real/imaginary parts.
/// The coefficient field for every symbolic computation in this project.
struct CRat {
  Rat re{0};
  Rat im{0};

  CRat() = default;
  CRat(long r) : re(r) {}  // NOLINT(google-explicit-constructor)
  CRat(Rat r) : re(std::move(r)) {}
  CRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  static CRat of(long num, long den) { return CRat(Rat(num, den)); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  CRat operator-() const { return CRat(-re, -im); }
  CRat& operator+=(const CRat& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  CRat& operator-=(const CRat& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend CRat operator+(CRat a, const CRat& b) { return a += b; }
  friend CRat operator-(CRat a, const CRat& b) { return a -= b; }
  friend CRat operator*(const CRat& a, const CRat& b) {
    return CRat(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
  }
  CRat& operator*=(const CRat& o) { return *this = *this * o; }
  friend CRat operator/(const CRat& a, const CRat& b) {
    Rat n = b.re * b.re + b.im * b.im;
    if (n == 0) throw std::domain_error("CRat: division by zero");
    return CRat((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
  }
  CRat& operator/=(const CRat& o) { return *this = *this / o; }
  friend bool operator==(const CRat& a, const CRat& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const CRat& a, const CRat& b) { return !(a == b); }

  CRat conj() const { return CRat(re, -im); }

  std::string str() const;
};

CRat pow(const CRat& base, long e);

/// Lossy conversion into a floating complex type. `C` must be constructible
/// from two reals of its value type (std::complex or boost cpp_complex).
template <class C>
C to_complex(const CRat& q) {
  using R = typename C::value_type;
  auto cvt = [](const Rat& r) {
    // Exact integer path keeps small rationals exact; otherwise go through
    // num/den division in the target precision.
    R num(r.get_num().get_str());
    R den(r.get_den().get_str());
    return num / den;
  };
  return C(cvt(q.re), cvt(q.im));
}

template <>
inline std::complex<double> to_complex<std::complex<double>>(const CRat& q) {
  return {q.re.get_d(), q.im.get_d()};
}

}  // namespace hamsing
