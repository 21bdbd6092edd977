#pragma once

#include <utility>
#include <vector>

#include "nhcycle/eigenpath.hpp"
#include "nhcycle/linalg.hpp"
#include "nhcycle/numerics.hpp"

namespace nhcycle {

// H1 = [[eps, e^{-i w t}], [e^{i w t}, -eps]]
struct Model1Params {
  cplx epsilon{0.0, 0.0};
  double omega = 1.0;
};

struct Model1ClosedForm {
  cplx Omega;                 // sqrt(1 + (eps - w/2)^2)
  cplx D_plus, D_minus;       // eps - w/2 +/- Omega
  double Theta_plus = 0.0, Theta_minus = 0.0;
  double gamma_plus = 0.0, gamma_minus = 0.0;
};

Model1ClosedForm h1_closed_form(const Model1Params& p, double tol = 1e-12);

CMat2 h1(const Model1Params& p, double t);
XMat2 h1(const Model1Params& p, ExtReal t);

CVec2 h1_cyclic_exact(const Model1Params& p, Branch branch, double t, double tol = 1e-12);
double h1_aa_exact(const Model1Params& p, Branch branch, double tol = 1e-12);
double h1_aa_slow_limit(cplx epsilon, Branch branch, double tol = 1e-12);
cplx gw_phase(cplx epsilon);

// H2 = [[1, i mu (cos wt + i)], [i mu (cos wt + i), -1]]
struct Model2Params {
  double mu = 0.0;
  double omega = 1.0;
  double period() const;
};

CMat2 h2(const Model2Params& p, double t);
XMat2 h2(const Model2Params& p, ExtReal t);

// H_BU = i [[0, 1], [z, 0]], z = rho e^{i theta} - r, theta = 2 pi t / T.
struct BUParams {
  double rho = 0.5;
  double r = 1.0;
  double T = 1.0;
  double nu() const;              // T sqrt(r) / pi, r > 0
  cplx x(double theta) const;     // sqrt(rho/r) e^{i theta/2}
  cplx z(double theta) const;
};

CMat2 hbu(const BUParams& p, double t);
XMat2 hbu(const BUParams& p, ExtReal t);

// Analytic eigenpaths over theta: E+/- = +/- i sqrt(z), eigenvectors
// (z^{-1/4}, +/- z^{1/4}) normalized, roots continued from theta = 0.
std::pair<EigenPath, EigenPath> bu_instantaneous(const BUParams& p,
                                                 const std::vector<double>& theta_grid,
                                                 double tol = 1e-12);

// Instantaneous eigenvectors at one theta, first = +. Uses
// z^{1/4} = e^{i pi/4} (r - rho e^{i theta})^{1/4}, continuous for rho < r and
// equal to the tracked branch of bu_instantaneous.
std::pair<CVec2, CVec2> bu_eigenbasis(const BUParams& p, double theta);

struct BesselOptions {
  double nu_max = 30.0;
  double envelope = 25.0;  // cap on |nu x| for the series
  int k_max = 200;
  bool extended = false;  // sum the series in __float128
};

// (J_{+/-nu}(nu x), d/dt J_{+/-nu}(nu x)) at time t.
CVec2 bu_floquet_bessel(const BUParams& p, Branch branch, double t, const BesselOptions& opt = {});
XVec2 bu_floquet_bessel_ext(const BUParams& p, Branch branch, double t,
                            const BesselOptions& opt = {});

}  // namespace nhcycle
