#include "nhcycle/asymptotics.hpp"

#include <cmath>
#include <string>
#include <type_traits>

#include "nhcycle/errors.hpp"

namespace nhcycle {

namespace {

const double kPi = std::acos(-1.0);

double lgamma_signed(double x, int* sign) {
  // lgamma_r is reentrant, unlike lgamma + signgam.
  return ::lgamma_r(x, sign);
}

ExtReal lgamma_signed(ExtReal x, int* sign) {
  *sign = 1;
  if (x < ExtReal(0)) *sign = (long long)(floorq(-x)) % 2 == 0 ? -1 : 1;
  return lgammaq(x);
}

template <class R>
BesselValueT<R> series_core(R nu, Complex<R> z, Complex<R> log_half_z, int k_max) {
  using C = Complex<R>;
  C J(0), dJ(0);
  const R tiny = std::is_same_v<R, double> ? R(1e-17) : R(1e-36);
  int small_run = 0;
  const R zabs = sm::cabs(z);
  for (int k = 0; k <= k_max; ++k) {
    const R g_arg = R(k) + nu + R(1);
    // 1/Gamma vanishes at non-positive integers.
    if (g_arg <= R(0) && g_arg == R((long long)(g_arg))) continue;
    int sgn = 1, unused = 1;
    const R lg = lgamma_signed(g_arg, &sgn) + lgamma_signed(R(k + 1), &unused);
    C term = sm::cexp(C(nu + R(2 * k)) * log_half_z - C(lg)) * C(R(sgn));
    if (k % 2 == 1) term = -term;
    const C dterm = term * C(nu + R(2 * k)) / z;
    J += term;
    dJ += dterm;
    const bool small = sm::cabs(term) <= tiny * sm::cabs(J) &&
                       sm::cabs(dterm) <= tiny * sm::cabs(dJ);
    small_run = small ? small_run + 1 : 0;
    if (small_run >= 2 && R(k) > zabs) return {J, dJ};
  }
  throw Error(ErrorKind::NonConvergence, "Bessel series tail not converged within k_max");
}

cplx sqrt_w(double rho, double r, double theta) {
  // Re(r - rho e^{i theta}) > 0 for rho < r, so the principal root is
  // continuous along the whole loop.
  return std::sqrt(r - rho * std::polar(1.0, theta));
}

void check_domain(double rho, double r) {
  if (!(rho > 0.0 && r > 0.0 && rho < r))
    throw Error(ErrorKind::DomainError, "requires 0 < rho < r");
}

template <class R>
BesselValueT<R> series_polar(R nu, R modulus, R arg, double envelope, int k_max) {
  using C = Complex<R>;
  if (!(modulus <= R(envelope)))
    throw Error(ErrorKind::SeriesDomain,
                "|z| = " + std::to_string(double(modulus)) + " exceeds series envelope");
  if (modulus == R(0)) {
    if (nu == R(0)) return {C(1), C(0)};
    if (nu == R(1)) return {C(0), C(R(1) / R(2))};
    if (nu > R(1)) return {C(0), C(0)};
    throw Error(ErrorKind::SeriesDomain, "J_nu' or J_nu singular at z = 0");
  }
  const C z = sm::cpolar(modulus, arg);
  const C log_half_z(sm::log(modulus / R(2)), arg);
  return series_core<R>(nu, z, log_half_z, k_max);
}

}  // namespace

BesselValue bessel_series_polar(double nu, double modulus, double arg, double envelope,
                                int k_max) {
  return series_polar<double>(nu, modulus, arg, envelope, k_max);
}

XBesselValue bessel_series_polar(ExtReal nu, ExtReal modulus, ExtReal arg, double envelope,
                                 int k_max) {
  return series_polar<ExtReal>(nu, modulus, arg, envelope, k_max);
}

const char* to_string(Wedge w) {
  switch (w) {
    case Wedge::Plus: return "plus";
    case Wedge::Minus: return "minus";
    case Wedge::Boundary: return "boundary";
  }
  return "boundary";
}

BesselValue bessel_series(double nu, cplx z, double envelope, int k_max) {
  return bessel_series_polar(nu, std::abs(z), std::arg(z), envelope, k_max);
}

cplx xi_exponent(double rho, double r, double theta) {
  check_domain(rho, r);
  const cplx w = sqrt_w(rho, r, theta);
  const double sr = std::sqrt(r);
  // sqrt r + sqrt w lies in the right half-plane: principal log is continuous.
  return std::log(sr + w) - std::log(std::sqrt(rho)) - cplx(0.0, theta / 2.0) - w / sr;
}

StokesPoint stokes_point(double rho, double r, double theta, double boundary_tol) {
  StokesPoint s;
  s.theta = theta;
  s.exponent = xi_exponent(rho, r, theta);
  const double re = s.exponent.real();
  s.wedge = std::abs(re) < boundary_tol ? Wedge::Boundary : (re > 0 ? Wedge::Plus : Wedge::Minus);
  return s;
}

cplx r_plus_asymptotic(double rho, double r, double T, double theta) {
  check_domain(rho, r);
  if (!(T > 0.0)) throw Error(ErrorKind::DomainError, "T must be positive");
  return r_minus_small_branch(rho, r, T, theta);
}

cplx r_minus_small_branch(double rho, double r, double T, double theta) {
  check_domain(rho, r);
  const cplx w = sqrt_w(rho, r, theta);
  return (kPi / (4.0 * T)) * rho * std::polar(1.0, theta) / (w * w * w);
}

cplx r_minus_large_branch(double rho, double r, double T, double theta) {
  check_domain(rho, r);
  const cplx w = sqrt_w(rho, r, theta);
  return -(4.0 * T / kPi) * (w * w * w) / (rho * std::polar(1.0, theta));
}

WedgeValue r_minus_asymptotic(double rho, double r, double T, double theta,
                              double boundary_tol) {
  if (!(T > 0.0)) throw Error(ErrorKind::DomainError, "T must be positive");
  const StokesPoint s = stokes_point(rho, r, theta, boundary_tol);
  if (s.wedge == Wedge::Boundary)
    throw Error(ErrorKind::OnStokesLine, "theta on a Stokes wedge boundary");
  if (s.wedge == Wedge::Plus) return {r_minus_small_branch(rho, r, T, theta), Wedge::Plus};
  return {r_minus_large_branch(rho, r, T, theta), Wedge::Minus};
}

double critical_equation(double c) {
  const double s = std::sqrt(1.0 + c);
  return std::log((1.0 + s) / std::sqrt(c)) - s;
}

CriticalSolve critical_ratio(double tol, double lo, double hi) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  double flo = critical_equation(lo);
  double fhi = critical_equation(hi);
  if (!(flo * fhi < 0.0)) throw Error(ErrorKind::NoRootInBracket, "g does not change sign");
  int it = 0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = critical_equation(mid);
    ++it;
    if (fm == 0.0) {
      lo = hi = mid;
      flo = fhi = 0.0;
      break;
    }
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  double x0 = lo, x1 = hi, f0 = flo, f1 = fhi;
  for (int k = 0; k < 3 && f1 != f0; ++k) {
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = critical_equation(x1);
    ++it;
  }
  CriticalSolve out;
  out.c = x1;
  out.residual = std::abs(f1);
  out.iterations = it;
  return out;
}

std::pair<double, double> hop_theta_estimate(double rho, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "requires r > 0");
  const double c = critical_ratio().c;
  const double q = rho / r;
  if (!(q > c)) throw Error(ErrorKind::DomainError, "rho/r must exceed the critical ratio");
  const double half = 2.0 * std::sqrt(1.0 + c) / c * std::sqrt(q - c);
  return {kPi - half, kPi + half};
}

double hop_window_width(double r, double T) {
  if (!(r > 0.0 && T > 0.0)) throw Error(ErrorKind::DomainError, "requires r > 0, T > 0");
  return kPi / (T * std::sqrt(r));
}

UniformBessel uniform_bessel(double nu, cplx x, double nu_min) {
  if (!(std::abs(x) < 1.0)) throw Error(ErrorKind::DomainError, "requires |x| < 1");
  if (std::abs(x) == 0.0) throw Error(ErrorKind::DomainError, "requires x != 0");
  UniformBessel u;
  u.below_validity_floor = nu < nu_min;
  const cplx w = std::sqrt(1.0 - x * x);  // (1 - x^2)^{1/2}, Re > 0
  const cplx eps = std::log(1.0 + w) - std::log(x) - w;
  const cplx q = std::sqrt(w);  // (1 - x^2)^{1/4}
  const double n = std::sqrt(2.0 * kPi * nu);
  const cplx dec = std::exp(-nu * eps);
  const cplx grow = std::exp(nu * eps);
  const double cs = std::cos(nu * kPi), sn = std::sin(nu * kPi);
  u.J_plus = dec / (n * q);
  u.dJ_plus = dec * q / (x * n);
  u.J_minus = (cs * dec + 2.0 * sn * grow) / (n * q);
  u.dJ_minus = q / (x * n) * (cs * dec - 2.0 * sn * grow);
  return u;
}

}  // namespace nhcycle
