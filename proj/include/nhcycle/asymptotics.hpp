#pragma once

#include <utility>

#include "nhcycle/linalg.hpp"

namespace nhcycle {

template <class R>
struct BesselValueT {
  Complex<R> J;
  Complex<R> dJ;  // derivative with respect to the argument
};
using BesselValue = BesselValueT<double>;
using XBesselValue = BesselValueT<ExtReal>;

// Power series for J_nu(z) and J_nu'(z), any real non-integer-negative nu.
// z^nu is taken on the principal branch.
BesselValue bessel_series(double nu, cplx z, double envelope = 25.0, int k_max = 200);

// Same series with z = modulus * e^{i arg}; arg may leave (-pi, pi] so that
// z^nu can be continued along a path.
BesselValue bessel_series_polar(double nu, double modulus, double arg,
                                double envelope = 25.0, int k_max = 200);
// Extended-precision variant for large orders, where the alternating series
// cancels far beyond double precision.
XBesselValue bessel_series_polar(ExtReal nu, ExtReal modulus, ExtReal arg,
                                 double envelope = 25.0, int k_max = 200);

enum class Wedge { Plus, Minus, Boundary };

const char* to_string(Wedge w);

struct StokesPoint {
  double theta = 0.0;
  cplx exponent;
  Wedge wedge = Wedge::Boundary;
};

// (2/3) xi^{3/2} = ln[(sqrt r + sqrt(r - rho e^{i th})) / (sqrt rho e^{i th/2})]
//                  - sqrt(r - rho e^{i th}) / sqrt r
cplx xi_exponent(double rho, double r, double theta);
StokesPoint stokes_point(double rho, double r, double theta, double boundary_tol = 1e-10);

cplx r_plus_asymptotic(double rho, double r, double T, double theta);

struct WedgeValue {
  cplx value;
  Wedge wedge = Wedge::Boundary;
};

// Small branch in the Plus wedge, large branch in the Minus wedge.
WedgeValue r_minus_asymptotic(double rho, double r, double T, double theta,
                              double boundary_tol = 1e-10);
cplx r_minus_small_branch(double rho, double r, double T, double theta);
cplx r_minus_large_branch(double rho, double r, double T, double theta);

struct CriticalSolve {
  double c = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// g(c) = ln((1 + sqrt(1+c)) / sqrt c) - sqrt(1+c)
double critical_equation(double c);
CriticalSolve critical_ratio(double tol = 1e-8, double lo = 0.01, double hi = 0.99);

std::pair<double, double> hop_theta_estimate(double rho, double r);
double hop_window_width(double r, double T);

struct UniformBessel {
  cplx J_plus, dJ_plus;    // J_nu(nu x), J_nu'(nu x)
  cplx J_minus, dJ_minus;  // J_{-nu}(nu x), J_{-nu}'(nu x)
  bool below_validity_floor = false;
};

// Leading-order large-order forms at argument nu * x, |x| < 1.
UniformBessel uniform_bessel(double nu, cplx x, double nu_min = 10.0);

}  // namespace nhcycle
