#pragma once

#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>
#include <type_traits>

namespace hamsing {

/// Default double-precision complex type.
using CD = std::complex<double>;
/// Extended-precision complex type (50 significant decimal digits).
using CM = boost::multiprecision::cpp_complex_50;

/// |x| as a double, for step control and diagnostics in generic code.
template <class C>
double abs_d(const C& x) {
  if constexpr (std::is_same_v<C, std::complex<double>>) {
    return std::abs(x);
  } else {
    return abs(x).template convert_to<double>();
  }
}

template <class C>
double real_d(const C& x) {
  if constexpr (std::is_same_v<C, std::complex<double>>) {
    return x.real();
  } else {
    return x.real().template convert_to<double>();
  }
}

template <class C>
double imag_d(const C& x) {
  if constexpr (std::is_same_v<C, std::complex<double>>) {
    return x.imag();
  } else {
    return x.imag().template convert_to<double>();
  }
}

/// Principal argument as a double.
template <class C>
double arg_d(const C& x) {
  return std::atan2(imag_d(x), real_d(x));
}

/// x^e for integer e (e may be negative).
template <class C>
C ipow(const C& x, long e) {
  C r(1);
  C base = x;
  long n = e >= 0 ? e : -e;
  while (n > 0) {
    if (n & 1) r *= base;
    base *= base;
    n >>= 1;
  }
  return e >= 0 ? r : C(1) / r;
}

/// exp(c * log(x)) on the principal branch (for real rational exponents).
template <class C>
C rpow(const C& x, double p) {
  using std::exp;
  using std::log;
  double m = abs_d(x), a = arg_d(x);
  double lr = std::log(m) * p, th = a * p;
  return C(std::exp(lr) * std::cos(th), std::exp(lr) * std::sin(th));
}

}  // namespace hamsing
