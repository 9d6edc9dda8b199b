#pragma once

#include <cmath>

namespace qudex {

// Compensated double-double scalar: value = hi + lo with |lo| <= ulp(hi)/2.
// Used where a residual must be measured below the noise floor of plain
// double evaluation. Only the operations needed by the residual path are
// provided.
struct DD {
  double hi = 0.0;
  double lo = 0.0;

  DD() = default;
  constexpr DD(double h, double l) : hi(h), lo(l) {}
  constexpr DD(double x) : hi(x), lo(0.0) {}

  double value() const { return hi + lo; }
};

namespace detail {

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return DD(s, err);
}

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  double err = b - (s - a);
  return DD(s, err);
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  double err = std::fma(a, b, -p);
  return DD(p, err);
}

}  // namespace detail

inline DD operator+(DD a, DD b) {
  DD s = detail::two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  return detail::quick_two_sum(s.hi, lo);
}

inline DD operator-(DD a) { return DD(-a.hi, -a.lo); }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, DD b) {
  DD p = detail::two_prod(a.hi, b.hi);
  double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
  return detail::quick_two_sum(p.hi, lo);
}

inline DD operator*(DD a, double b) { return a * DD(b); }
inline DD operator*(double a, DD b) { return DD(a) * b; }
inline DD operator+(DD a, double b) { return a + DD(b); }
inline DD operator-(DD a, double b) { return a - DD(b); }

inline DD operator/(DD a, DD b) {
  double q1 = a.hi / b.hi;
  DD r = a - DD(q1) * b;
  double q2 = r.hi / b.hi;
  r = r - DD(q2) * b;
  double q3 = r.hi / b.hi;
  DD q = detail::quick_two_sum(q1, q2);
  return q + DD(q3);
}

inline DD operator/(DD a, double b) { return a / DD(b); }

inline bool dd_less(DD a, DD b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}

inline DD dd_abs(DD a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

// Complex double-double, enough for Hermitian matrix products and traces.
struct DDC {
  DD re;
  DD im;

  DDC() = default;
  DDC(DD r, DD i) : re(r), im(i) {}
  DDC(double r, double i) : re(r), im(i) {}
};

inline DDC operator+(DDC a, DDC b) { return DDC(a.re + b.re, a.im + b.im); }
inline DDC operator-(DDC a, DDC b) { return DDC(a.re - b.re, a.im - b.im); }
inline DDC operator*(DDC a, DDC b) {
  return DDC(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}
inline DDC dd_conj(DDC a) { return DDC(a.re, -a.im); }

}  // namespace qudex
