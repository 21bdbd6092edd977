#pragma once

#include <cmath>
#include <complex>
#include <quadmath.h>

namespace nhcycle {

// 113-bit mantissa; used where the one-period propagator is too
// ill-conditioned for double precision.
using ExtReal = __float128;

template <class R>
using Complex = std::complex<R>;

using cplx = Complex<double>;
using xcplx = Complex<ExtReal>;

namespace sm {

inline double sqrt(double x) { return std::sqrt(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double atan2(double y, double x) { return std::atan2(y, x); }
inline double hypot(double x, double y) { return std::hypot(x, y); }
inline double fabs(double x) { return std::fabs(x); }
inline bool isfinite(double x) { return std::isfinite(x); }

inline ExtReal sqrt(ExtReal x) { return sqrtq(x); }
inline ExtReal sin(ExtReal x) { return sinq(x); }
inline ExtReal cos(ExtReal x) { return cosq(x); }
inline ExtReal exp(ExtReal x) { return expq(x); }
inline ExtReal log(ExtReal x) { return logq(x); }
inline ExtReal atan2(ExtReal y, ExtReal x) { return atan2q(y, x); }
inline ExtReal hypot(ExtReal x, ExtReal y) { return hypotq(x, y); }
inline ExtReal fabs(ExtReal x) { return fabsq(x); }
inline bool isfinite(ExtReal x) { return finiteq(x) != 0; }

template <class R>
inline R pi() {
  return R(4) * atan2(R(1), R(1));
}

template <class R>
inline R cabs(const Complex<R>& z) {
  return hypot(z.real(), z.imag());
}

template <class R>
inline R carg(const Complex<R>& z) {
  return atan2(z.imag(), z.real());
}

template <class R>
inline R cnorm(const Complex<R>& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

template <class R>
inline Complex<R> cexp(const Complex<R>& z) {
  R m = exp(z.real());
  return {m * cos(z.imag()), m * sin(z.imag())};
}

template <class R>
inline Complex<R> clog(const Complex<R>& z) {
  return {log(cabs(z)), carg(z)};
}

template <class R>
inline Complex<R> cpolar(R mod, R ang) {
  return {mod * cos(ang), mod * sin(ang)};
}

// Principal square root, cut along the negative real axis.
template <class R>
inline Complex<R> csqrt(const Complex<R>& z) {
  R x = z.real(), y = z.imag();
  if (x == R(0) && y == R(0)) return {R(0), R(0)};
  R m = cabs(z);
  R t = sqrt((m + fabs(x)) / R(2));
  if (x >= R(0)) return {t, y / (R(2) * t)};
  R im = y < R(0) ? -t : t;
  if (y == R(0)) im = t;
  return {fabs(y) / (R(2) * t), im};
}

template <class R>
inline bool cfinite(const Complex<R>& z) {
  return isfinite(z.real()) && isfinite(z.imag());
}

}  // namespace sm

template <class R>
struct Vec2 {
  Complex<R> a{};
  Complex<R> b{};

  Vec2& operator+=(const Vec2& o) {
    a += o.a;
    b += o.b;
    return *this;
  }
  Vec2& operator-=(const Vec2& o) {
    a -= o.a;
    b -= o.b;
    return *this;
  }
  Vec2& operator*=(const Complex<R>& s) {
    a *= s;
    b *= s;
    return *this;
  }
};

template <class R>
inline Vec2<R> operator+(Vec2<R> x, const Vec2<R>& y) {
  return x += y;
}
template <class R>
inline Vec2<R> operator-(Vec2<R> x, const Vec2<R>& y) {
  return x -= y;
}
template <class R>
inline Vec2<R> operator*(const Complex<R>& s, Vec2<R> x) {
  return x *= s;
}
template <class R>
inline Vec2<R> operator*(R s, Vec2<R> x) {
  return x *= Complex<R>(s);
}

// <x|y>, conjugate-linear in the first slot.
template <class R>
inline Complex<R> inner(const Vec2<R>& x, const Vec2<R>& y) {
  return std::conj(x.a) * y.a + std::conj(x.b) * y.b;
}

template <class R>
inline R norm(const Vec2<R>& x) {
  return sm::sqrt(sm::cnorm(x.a) + sm::cnorm(x.b));
}

template <class R>
inline Vec2<R> normalized(const Vec2<R>& x) {
  R n = norm(x);
  return {x.a / n, x.b / n};
}

template <class R>
inline bool finite(const Vec2<R>& x) {
  return sm::cfinite(x.a) && sm::cfinite(x.b);
}

template <class R>
struct Mat2 {
  Complex<R> m00{}, m01{}, m10{}, m11{};

  static Mat2 identity() { return {R(1), R(0), R(0), R(1)}; }

  Complex<R> trace() const { return m00 + m11; }
  Complex<R> det() const { return m00 * m11 - m01 * m10; }

  Vec2<R> col0() const { return {m00, m10}; }
  Vec2<R> col1() const { return {m01, m11}; }

  Mat2 adjoint() const {
    return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
  }
  Mat2 transpose() const { return {m00, m10, m01, m11}; }
};

template <class R>
inline Vec2<R> operator*(const Mat2<R>& M, const Vec2<R>& v) {
  return {M.m00 * v.a + M.m01 * v.b, M.m10 * v.a + M.m11 * v.b};
}

template <class R>
inline Mat2<R> operator*(const Mat2<R>& A, const Mat2<R>& B) {
  return {A.m00 * B.m00 + A.m01 * B.m10, A.m00 * B.m01 + A.m01 * B.m11,
          A.m10 * B.m00 + A.m11 * B.m10, A.m10 * B.m01 + A.m11 * B.m11};
}

template <class R>
inline Mat2<R> operator+(const Mat2<R>& A, const Mat2<R>& B) {
  return {A.m00 + B.m00, A.m01 + B.m01, A.m10 + B.m10, A.m11 + B.m11};
}

template <class R>
inline Mat2<R> operator-(const Mat2<R>& A, const Mat2<R>& B) {
  return {A.m00 - B.m00, A.m01 - B.m01, A.m10 - B.m10, A.m11 - B.m11};
}

template <class R>
inline Mat2<R> operator*(const Complex<R>& s, const Mat2<R>& A) {
  return {s * A.m00, s * A.m01, s * A.m10, s * A.m11};
}

// Frobenius norm.
template <class R>
inline R norm(const Mat2<R>& A) {
  return sm::sqrt(sm::cnorm(A.m00) + sm::cnorm(A.m01) + sm::cnorm(A.m10) +
                  sm::cnorm(A.m11));
}

template <class R>
inline bool finite(const Mat2<R>& A) {
  return sm::cfinite(A.m00) && sm::cfinite(A.m01) && sm::cfinite(A.m10) &&
         sm::cfinite(A.m11);
}

using CVec2 = Vec2<double>;
using CMat2 = Mat2<double>;
using XVec2 = Vec2<ExtReal>;
using XMat2 = Mat2<ExtReal>;

inline xcplx to_ext(const cplx& z) { return {ExtReal(z.real()), ExtReal(z.imag())}; }
inline cplx to_double(const xcplx& z) {
  return {double(z.real()), double(z.imag())};
}
inline XVec2 to_ext(const CVec2& v) { return {to_ext(v.a), to_ext(v.b)}; }
inline CVec2 to_double(const XVec2& v) { return {to_double(v.a), to_double(v.b)}; }
inline XMat2 to_ext(const CMat2& M) {
  return {to_ext(M.m00), to_ext(M.m01), to_ext(M.m10), to_ext(M.m11)};
}
inline CMat2 to_double(const XMat2& M) {
  return {to_double(M.m00), to_double(M.m01), to_double(M.m10), to_double(M.m11)};
}

}  // namespace nhcycle
