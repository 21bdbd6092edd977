#include "nhcycle/models.hpp"

#include <cmath>

#include "nhcycle/asymptotics.hpp"

namespace nhcycle {

namespace {

const double kPi = std::acos(-1.0);

template <class R>
Mat2<R> h1_impl(const Model1Params& p, R t) {
  const Complex<R> eps(R(p.epsilon.real()), R(p.epsilon.imag()));
  const R ph = R(p.omega) * t;
  const Complex<R> e_minus(sm::cos(ph), -sm::sin(ph));
  return {eps, e_minus, std::conj(e_minus), -eps};
}

template <class R>
Mat2<R> h2_impl(const Model2Params& p, R t) {
  const R mu(p.mu);
  // i mu (cos wt + i) = -mu + i mu cos wt
  const Complex<R> off(-mu, mu * sm::cos(R(p.omega) * t));
  return {Complex<R>(R(1)), off, off, Complex<R>(R(-1))};
}

template <class R>
Mat2<R> hbu_impl(const BUParams& p, R t) {
  const R theta = R(2) * sm::pi<R>() * t / R(p.T);
  const Complex<R> z(R(p.rho) * sm::cos(theta) - R(p.r), R(p.rho) * sm::sin(theta));
  const Complex<R> i(R(0), R(1));
  return {Complex<R>(R(0)), i, i * z, Complex<R>(R(0))};
}

double arccot_nonneg(double y) { return std::atan2(1.0, y); }

}  // namespace

Model1ClosedForm h1_closed_form(const Model1Params& p, double tol) {
  if (!(p.omega > 0.0)) throw Error(ErrorKind::InvalidArgument, "omega must be positive");
  Model1ClosedForm f;
  const cplx s = p.epsilon - p.omega / 2.0;
  f.Omega = std::sqrt(1.0 + s * s);
  if (std::abs(f.Omega) < tol)
    throw Error(ErrorKind::ExceptionalPoint, "h1: Omega vanishes");
  f.D_plus = s + f.Omega;
  f.D_minus = s - f.Omega;
  f.Theta_plus = 2.0 * arccot_nonneg(std::abs(f.D_plus));
  f.Theta_minus = 2.0 * arccot_nonneg(std::abs(f.D_minus));
  f.gamma_plus = std::arg(f.D_plus);
  f.gamma_minus = std::arg(f.D_minus);
  return f;
}

CMat2 h1(const Model1Params& p, double t) { return h1_impl(p, t); }
XMat2 h1(const Model1Params& p, ExtReal t) { return h1_impl(p, t); }

CVec2 h1_cyclic_exact(const Model1Params& p, Branch branch, double t, double tol) {
  const Model1ClosedForm f = h1_closed_form(p, tol);
  const bool plus = branch == Branch::Plus;
  const double Theta = plus ? f.Theta_plus : f.Theta_minus;
  const double gamma = plus ? f.gamma_plus : f.gamma_minus;
  const double Phi = p.omega * t - gamma;
  const cplx i(0.0, 1.0);
  const cplx pre = std::exp((plus ? -1.0 : 1.0) * i * f.Omega * t - i * p.omega * t / 2.0 +
                            i * gamma);
  return {pre * std::cos(Theta / 2.0), pre * std::sin(Theta / 2.0) * std::polar(1.0, Phi)};
}

double h1_aa_exact(const Model1Params& p, Branch branch, double tol) {
  const Model1ClosedForm f = h1_closed_form(p, tol);
  const double d2 = std::norm(branch == Branch::Plus ? f.D_plus : f.D_minus);
  return 2.0 * kPi * d2 / (d2 + 1.0);
}

double h1_aa_slow_limit(cplx epsilon, Branch branch, double tol) {
  const cplx q = 1.0 + epsilon * epsilon;
  if (std::abs(q) < tol) throw Error(ErrorKind::ExceptionalPoint, "1 + eps^2 vanishes");
  const cplx D = epsilon + (branch == Branch::Plus ? 1.0 : -1.0) * std::sqrt(q);
  const double d2 = std::norm(D);
  return 2.0 * kPi * d2 / (d2 + 1.0);
}

cplx gw_phase(cplx epsilon) { return kPi * (1.0 - epsilon / std::sqrt(1.0 + epsilon * epsilon)); }

double Model2Params::period() const { return 2.0 * kPi / omega; }

CMat2 h2(const Model2Params& p, double t) { return h2_impl(p, t); }
XMat2 h2(const Model2Params& p, ExtReal t) { return h2_impl(p, t); }

double BUParams::nu() const {
  if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "nu requires r > 0");
  return T * std::sqrt(r) / kPi;
}

cplx BUParams::x(double theta) const {
  return std::sqrt(rho / r) * std::polar(1.0, theta / 2.0);
}

cplx BUParams::z(double theta) const { return rho * std::polar(1.0, theta) - r; }

CMat2 hbu(const BUParams& p, double t) { return hbu_impl(p, t); }
XMat2 hbu(const BUParams& p, ExtReal t) { return hbu_impl(p, t); }

std::pair<EigenPath, EigenPath> bu_instantaneous(const BUParams& p,
                                                 const std::vector<double>& theta_grid,
                                                 double tol) {
  std::vector<cplx> zs;
  zs.reserve(theta_grid.size());
  for (double th : theta_grid) {
    const cplx z = p.z(th);
    if (std::abs(z) < tol) throw Error(ErrorKind::DegeneracyOnPath, "z vanishes on the loop");
    zs.push_back(z);
  }
  const std::vector<cplx> q = track_root(zs, 4);

  EigenPath plus, minus;
  plus.label = Branch::Plus;
  minus.label = Branch::Minus;
  for (EigenPath* e : {&plus, &minus}) {
    e->grid = theta_grid;
    e->values.reserve(q.size());
    e->vectors.reserve(q.size());
  }
  const cplx i(0.0, 1.0);
  for (const cplx& w : q) {
    const cplx sq = w * w;
    plus.values.push_back(i * sq);
    minus.values.push_back(-i * sq);
    plus.vectors.push_back(normalized(CVec2{1.0 / w, w}));
    minus.vectors.push_back(normalized(CVec2{1.0 / w, -w}));
  }
  const bool full_loop = !theta_grid.empty() && std::abs(theta_grid.front()) < 1e-12 &&
                         std::abs(theta_grid.back() - 2.0 * kPi) < 1e-12;
  for (EigenPath* e : {&plus, &minus}) {
    e->closed = full_loop && norm(e->vectors.back() - e->vectors.front()) < 1e-8;
  }
  return {plus, minus};
}

std::pair<CVec2, CVec2> bu_eigenbasis(const BUParams& p, double theta) {
  if (!(p.r > 0.0 && p.rho >= 0.0 && p.rho < p.r))
    throw Error(ErrorKind::DomainError, "bu_eigenbasis requires 0 <= rho < r");
  const cplx w = std::sqrt(p.r - p.rho * std::polar(1.0, theta));
  const cplx q = std::polar(1.0, kPi / 4.0) * std::sqrt(w);
  return {normalized(CVec2{1.0 / q, q}), normalized(CVec2{1.0 / q, -q})};
}

XVec2 bu_floquet_bessel_ext(const BUParams& p, Branch branch, double t,
                            const BesselOptions& opt) {
  const double nu = p.nu();
  if (std::abs(nu - std::round(nu)) < 1e-9)
    throw Error(ErrorKind::IntegerOrder, "nu is an integer; J_nu and J_-nu are dependent");
  if (nu > opt.nu_max) throw Error(ErrorKind::SeriesDomain, "nu above series cap");
  if (!(p.rho > 0.0)) throw Error(ErrorKind::SeriesDomain, "zero Bessel argument (rho = 0)");
  using X = ExtReal;
  const X xnu = X(p.T) * sm::sqrt(X(p.r)) / sm::pi<X>();
  const X half_theta = sm::pi<X>() * X(t) / X(p.T);
  const X mod_x = sm::sqrt(X(p.rho) / X(p.r));
  const X order = branch == Branch::Plus ? xnu : -xnu;
  XBesselValue bv;
  if (opt.extended) {
    bv = bessel_series_polar(order, xnu * mod_x, half_theta, opt.envelope, opt.k_max);
  } else {
    const BesselValue d =
        bessel_series_polar(double(order), double(xnu * mod_x), double(half_theta),
                                                opt.envelope, opt.k_max);
    bv = {to_ext(d.J), to_ext(d.dJ)};
  }
  const xcplx x = sm::cpolar(mod_x, half_theta);
  const xcplx dt = xcplx(X(0), sm::sqrt(X(p.r))) * x * bv.dJ;
  return {bv.J, dt};
}

CVec2 bu_floquet_bessel(const BUParams& p, Branch branch, double t, const BesselOptions& opt) {
  return to_double(bu_floquet_bessel_ext(p, branch, t, opt));
}

}  // namespace nhcycle
