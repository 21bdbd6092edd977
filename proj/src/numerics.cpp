#include "nhcycle/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nhcycle {

namespace {

template <class R>
Vec2<R> unit(int i) {
  Vec2<R> v;
  (i == 0 ? v.a : v.b) = Complex<R>(R(1));
  return v;
}

template <class R>
std::array<EigenPairT<R>, 2> eig2_impl(const Mat2<R>& M, double tol) {
  if (!finite(M)) throw Error(ErrorKind::InvalidArgument, "eig2: non-finite matrix");
  const R scale = norm(M);
  if (scale == R(0)) return {{{Complex<R>(0), unit<R>(0)}, {Complex<R>(0), unit<R>(1)}}};

  const Complex<R> h = (M.m00 + M.m11) / Complex<R>(R(2));
  const Complex<R> d = (M.m00 - M.m11) / Complex<R>(R(2));
  const Complex<R> s = sm::csqrt(d * d + M.m01 * M.m10);
  Complex<R> l1 = (sm::cabs(h + s) >= sm::cabs(h - s)) ? h + s : h - s;
  Complex<R> l2 = (sm::cabs(l1) > R(0)) ? M.det() / l1 : h - (l1 - h);

  const R tolR = R(tol);
  if (sm::cabs(l1 - l2) < tolR * scale) {
    // Coincident eigenvalues: diagonalizable only if M is a multiple of I.
    Mat2<R> dev = M - h * Mat2<R>::identity();
    if (norm(dev) < R(std::sqrt(tol)) * scale) {
      return {{{l1, unit<R>(0)}, {l2, unit<R>(1)}}};
    }
    throw Error(ErrorKind::DegenerateMatrix, "eig2: defective matrix (exceptional point)");
  }

  auto vec_for = [&](const Complex<R>& l) {
    Vec2<R> v1{M.m01, l - M.m00};
    Vec2<R> v2{l - M.m11, M.m10};
    Vec2<R> v = norm(v1) >= norm(v2) ? v1 : v2;
    if (norm(v) == R(0)) {
      // M is diagonal with l on the diagonal entry that matches.
      v = sm::cabs(M.m00 - l) <= sm::cabs(M.m11 - l) ? unit<R>(0) : unit<R>(1);
    }
    return canonical_phase(v);
  };

  std::array<EigenPairT<R>, 2> out{{{l1, vec_for(l1)}, {l2, vec_for(l2)}}};
  for (const auto& p : out) {
    const R res = norm(M * p.vector - p.value * p.vector);
    if (!(res <= tolR * scale)) {
      throw Error(ErrorKind::NonConvergence, "eig2: eigen-residual above tolerance");
    }
  }
  return out;
}

// One RK4 step for S in {Vec2, Mat2}; h0/hm/h1 are H at t, t+dt/2, t+dt.
template <class R, class S>
S rk4_step(const Mat2<R>& h0, const Mat2<R>& hm, const Mat2<R>& h1, const S& y, R dt) {
  const Complex<R> mi(R(0), R(-1));
  const Complex<R> half(dt / R(2));
  const Complex<R> full(dt);
  auto f = [&](const Mat2<R>& H, const S& x) {
    S r = H * x;
    return mi * r;
  };
  S k1 = f(h0, y);
  S k2 = f(hm, y + half * k1);
  S k3 = f(hm, y + half * k2);
  S k4 = f(h1, y + full * k3);
  return y + Complex<R>(dt / R(6)) * (k1 + Complex<R>(R(2)) * k2 +
                                      Complex<R>(R(2)) * k3 + k4);
}

template <class R>
R max_component(const Vec2<R>& v) {
  return std::max(sm::cabs(v.a), sm::cabs(v.b));
}

template <class R>
R max_component(const Mat2<R>& M) {
  return std::max({sm::cabs(M.m00), sm::cabs(M.m01), sm::cabs(M.m10), sm::cabs(M.m11)});
}

void check_grid(double T, int steps) {
  if (!(T > 0.0) || !std::isfinite(T))
    throw Error(ErrorKind::InvalidArgument, "period must be positive and finite");
  if (steps < 16) throw Error(ErrorKind::InvalidArgument, "steps must be >= 16");
}

template <class R>
Trajectory propagate_impl(const Generator& H, const Vec2<R>& psi0, double T, int steps,
                          const PropagateOptions& opt) {
  check_grid(T, steps);
  if (!finite(psi0)) throw Error(ErrorKind::InvalidArgument, "non-finite initial state");
  Trajectory tr;
  tr.period = T;
  tr.steps = steps;
  tr.model = opt.model;
  tr.times.resize(steps + 1);
  tr.states.resize(steps + 1);

  const R TR(T);
  const R dt = TR / R(steps);
  const R cap(opt.overflow_cap);
  Vec2<R> y = psi0;
  Mat2<R> h0 = H(R(0));
  tr.times[0] = 0.0;
  if constexpr (std::is_same_v<R, double>) tr.states[0] = y;
  else tr.states[0] = to_double(y);

  for (int k = 0; k < steps; ++k) {
    const R t0 = TR * R(k) / R(steps);
    const R t1 = (k + 1 == steps) ? TR : TR * R(k + 1) / R(steps);
    const Mat2<R> hm = H(t0 + dt / R(2));
    const Mat2<R> h1 = H(t1);
    y = rk4_step(h0, hm, h1, y, dt);
    h0 = h1;
    const R mc = max_component(y);
    if (!(mc <= cap)) {
      throw Error(ErrorKind::Overflow, "state component exceeded cap at t=" +
                                           std::to_string(double(t1)));
    }
    tr.times[k + 1] = (k + 1 == steps) ? T : T * double(k + 1) / double(steps);
    if constexpr (std::is_same_v<R, double>) tr.states[k + 1] = y;
    else tr.states[k + 1] = to_double(y);
  }
  return tr;
}

}  // namespace

template <class R>
Vec2<R> canonical_phase(const Vec2<R>& v) {
  const R n = norm(v);
  if (n == R(0)) return v;
  const Complex<R>& lead = sm::cabs(v.a) > R(0) ? v.a : v.b;
  const Complex<R> ph = std::conj(lead) / Complex<R>(sm::cabs(lead) * n);
  return {v.a * ph, v.b * ph};
}

template Vec2<double> canonical_phase(const Vec2<double>&);
template Vec2<ExtReal> canonical_phase(const Vec2<ExtReal>&);

std::array<EigenPair, 2> eig2(const CMat2& M, double tol) { return eig2_impl(M, tol); }

std::array<EigenPairT<ExtReal>, 2> eig2(const XMat2& M, double tol) {
  return eig2_impl(M, tol);
}

Trajectory propagate(const Generator& H, const CVec2& psi0, double T, int steps,
                     const PropagateOptions& opt) {
  if (opt.precision == Precision::Extended)
    return propagate_impl<ExtReal>(H, to_ext(psi0), T, steps, opt);
  return propagate_impl<double>(H, psi0, T, steps, opt);
}

Trajectory propagate(const Generator& H, const XVec2& psi0, double T, int steps,
                     const PropagateOptions& opt) {
  return propagate_impl<ExtReal>(H, psi0, T, steps, opt);
}

FloquetResult floquet(const Generator& H, double T, int steps, double overflow_cap) {
  check_grid(T, steps);
  using R = ExtReal;
  const R TR(T);
  const R dt = TR / R(steps);
  const R cap(overflow_cap);
  XMat2 U = XMat2::identity();
  XMat2 h0 = H(R(0));
  // Simpson on the RK4 nodes for the trace integral.
  xcplx tr_int(0);
  for (int k = 0; k < steps; ++k) {
    const R t0 = TR * R(k) / R(steps);
    const R t1 = (k + 1 == steps) ? TR : TR * R(k + 1) / R(steps);
    const XMat2 hm = H(t0 + dt / R(2));
    const XMat2 h1 = H(t1);
    U = rk4_step(h0, hm, h1, U, dt);
    tr_int += xcplx(dt / R(6)) * (h0.trace() + xcplx(R(4)) * hm.trace() + h1.trace());
    h0 = h1;
    if (!(max_component(U) <= cap)) {
      throw Error(ErrorKind::Overflow, "propagator entry exceeded cap at t=" +
                                           std::to_string(double(t1)));
    }
  }
  FloquetResult out;
  out.U = U;
  out.liouville_target = sm::cexp(xcplx(tr_int.imag(), -tr_int.real()));
  const R denom = std::max(R(1), sm::cabs(out.liouville_target));
  out.liouville_residual = double(sm::cabs(U.det() - out.liouville_target) / denom);
  return out;
}

XMat2 floquet_operator_ext(const Generator& H, double T, int steps, double liouville_tol,
                           double overflow_cap) {
  FloquetResult f = floquet(H, T, steps, overflow_cap);
  if (!(f.liouville_residual < liouville_tol)) {
    throw Error(ErrorKind::LiouvilleViolation,
                "det U(T) deviates from exp(-i int tr H) by " +
                    std::to_string(f.liouville_residual));
  }
  return f.U;
}

CMat2 floquet_operator(const Generator& H, double T, int steps, double liouville_tol,
                       double overflow_cap) {
  return to_double(floquet_operator_ext(H, T, steps, liouville_tol, overflow_cap));
}

CyclicState to_double(const XCyclicState& s) {
  return {to_double(s.u), to_double(s.alpha), s.label, to_double(s.multiplier)};
}

namespace {

template <class R>
std::pair<CyclicStateT<R>, CyclicStateT<R>> cyclic_impl(const Mat2<R>& U, double tol) {
  if (sm::cabs(U.det()) == R(0)) throw Error(ErrorKind::InvalidArgument, "U(T) is singular");
  auto pairs = eig2(U, tol);
  std::array<CyclicStateT<R>, 2> cs;
  for (int i = 0; i < 2; ++i) {
    const Complex<R> lg = sm::clog(pairs[i].value);
    cs[i].alpha = Complex<R>(lg.imag(), -lg.real());
    cs[i].u = pairs[i].vector;
    cs[i].multiplier = pairs[i].value;
  }
  const auto& a0 = cs[0].alpha;
  const auto& a1 = cs[1].alpha;
  const bool first_plus =
      a0.real() > a1.real() || (a0.real() == a1.real() && a0.imag() >= a1.imag());
  if (!first_plus) std::swap(cs[0], cs[1]);
  cs[0].label = Branch::Plus;
  cs[1].label = Branch::Minus;
  return {cs[0], cs[1]};
}

template <class R>
StabilityClass stability_impl(const Mat2<R>& U, double tol) {
  StabilityClass out;
  std::array<EigenPairT<R>, 2> pairs;
  try {
    pairs = eig2(U, std::is_same_v<R, double> ? 1e-10 : 1e-20);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateMatrix) throw;
    out.kind = Stability::Marginal;
    const double m = std::sqrt(std::abs(double(sm::cabs(U.det()))));
    out.moduli = {m, m};
    return out;
  }
  out.moduli = {double(sm::cabs(pairs[0].value)), double(sm::cabs(pairs[1].value))};
  const bool unit0 = std::abs(out.moduli[0] - 1.0) <= tol;
  const bool unit1 = std::abs(out.moduli[1] - 1.0) <= tol;
  out.kind = (unit0 && unit1) ? Stability::Stable : Stability::Unstable;
  return out;
}

}  // namespace

std::pair<CyclicState, CyclicState> cyclic_states(const CMat2& U, double tol) {
  return cyclic_impl(U, tol);
}

std::pair<XCyclicState, XCyclicState> cyclic_states(const XMat2& U, double tol) {
  return cyclic_impl(U, tol);
}

StabilityClass classify_stability(const CMat2& U, double tol) {
  return stability_impl(U, tol);
}

StabilityClass classify_stability(const XMat2& U, double tol) {
  return stability_impl(U, tol);
}

std::vector<cplx> track_root(const std::vector<cplx>& values, int k) {
  if (k != 2 && k != 4) throw Error(ErrorKind::InvalidArgument, "track_root: k must be 2 or 4");
  std::vector<cplx> out;
  out.reserve(values.size());
  if (values.empty()) return out;
  const double pi = std::acos(-1.0);
  auto principal = [k](cplx z) { return std::exp(std::log(z) / double(k)); };
  if (std::abs(values[0]) == 0.0)
    throw Error(ErrorKind::BranchAmbiguity, "track_root: sample at branch point");
  out.push_back(principal(values[0]));
  for (size_t n = 1; n < values.size(); ++n) {
    const cplx z = values[n];
    if (std::abs(z) == 0.0)
      throw Error(ErrorKind::BranchAmbiguity, "track_root: sample at branch point");
    const double jump = std::arg(z / values[n - 1]);
    if (std::abs(jump) >= pi / k) {
      throw Error(ErrorKind::BranchAmbiguity,
                  "track_root: phase jump " + std::to_string(jump) + " at sample " +
                      std::to_string(n));
    }
    // Nearest of the k candidate roots to the previous output.
    const cplx w0 = principal(z);
    cplx best = w0;
    double best_d = std::abs(w0 - out.back());
    for (int j = 1; j < k; ++j) {
      const cplx w = w0 * std::polar(1.0, 2.0 * pi * j / k);
      const double d = std::abs(w - out.back());
      if (d < best_d) {
        best_d = d;
        best = w;
      }
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace nhcycle
