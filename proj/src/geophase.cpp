#include "nhcycle/geophase.hpp"

#include <cmath>
#include <string>

namespace nhcycle {

namespace {

const double kPi = std::acos(-1.0);
const double kTwoPi = 2.0 * kPi;

struct Pancharatnam {
  double beta_raw = 0.0;     // arg<0|N> - sum arg<k|k+1>, unreduced
  double log_growth = 0.0;   // ln |psi_N| / |psi_0|
  double sum_args = 0.0;
};

Pancharatnam pancharatnam(const std::vector<CVec2>& states, double overlap_tol) {
  Pancharatnam p;
  double sum = 0.0;
  for (size_t k = 0; k + 1 < states.size(); ++k) {
    const cplx ov = inner(states[k], states[k + 1]);
    const double scale = norm(states[k]) * norm(states[k + 1]);
    if (!(std::abs(ov) >= overlap_tol * scale)) {
      throw Error(ErrorKind::ZeroOverlap,
                  "consecutive overlap vanishes at sample " + std::to_string(k));
    }
    sum += std::arg(ov);
  }
  p.sum_args = sum;
  p.beta_raw = std::arg(inner(states.front(), states.back())) - sum;
  p.log_growth = std::log(norm(states.back()) / norm(states.front()));
  return p;
}

void check_cyclic(const Trajectory& traj, double tol) {
  if (traj.states.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "trajectory needs at least two samples");
  const double dev = closure_deviation(traj.states.front(), traj.states.back());
  if (!(dev < tol)) {
    throw Error(ErrorKind::NotCyclic,
                "final state deviates from a multiple of the initial one by " +
                    std::to_string(dev));
  }
}

// alpha with psi_N = e^{i alpha} psi_0 (projected), principal log.
cplx overall_phase(const CVec2& first, const CVec2& last) {
  const cplx lambda = inner(first, last) / inner(first, first).real();
  const cplx lg = std::log(lambda);
  return {lg.imag(), -lg.real()};
}

}  // namespace

double wrap_2pi(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  if (y >= kTwoPi) y -= kTwoPi;
  return y;
}

double circular_distance(double a, double b) {
  const double d = wrap_2pi(a - b);
  return d > kPi ? kTwoPi - d : d;
}

double closure_deviation(const CVec2& first, const CVec2& last) {
  const double n0 = inner(first, first).real();
  const double nl = norm(last);
  if (n0 == 0.0 || nl == 0.0) throw Error(ErrorKind::ZeroState, "zero state in closure test");
  const cplx c = inner(first, last) / n0;
  return norm(last - c * first) / nl;
}

PhaseResult aa_phase(const Trajectory& traj, const PhaseOptions& opt) {
  check_cyclic(traj, opt.closure_tol);
  const Pancharatnam p = pancharatnam(traj.states, opt.overlap_tol);
  PhaseResult out;
  out.alpha = overall_phase(traj.states.front(), traj.states.back());
  // Discrete connection: ln|psi_{k+1}|/|psi_k| + i arg<psi_k|psi_{k+1}>.
  out.dynamical_integral = cplx(p.log_growth, p.sum_args);
  const cplx raw = out.alpha + cplx(0.0, 1.0) * out.dynamical_integral;
  out.beta = wrap_2pi(raw.real());
  out.imag_residual = std::abs(raw.imag());
  return out;
}

PhaseResult aa_phase_energy_form(const Trajectory& traj, const Generator& H,
                                 const PhaseOptions& opt, double agreement_tol) {
  check_cyclic(traj, opt.closure_tol);
  const size_t n = traj.states.size();
  std::vector<cplx> e(n);
  for (size_t k = 0; k < n; ++k) {
    const CVec2& s = traj.states[k];
    e[k] = inner(s, H(traj.times[k]) * s) / inner(s, s).real();
  }
  // Trapezoid; the integrand is periodic for a cyclic state, so the rule is
  // already spectrally accurate on the uniform grid.
  cplx integral(0.0);
  for (size_t k = 0; k + 1 < n; ++k)
    integral += 0.5 * (traj.times[k + 1] - traj.times[k]) * (e[k] + e[k + 1]);
  PhaseResult out;
  out.alpha = overall_phase(traj.states.front(), traj.states.back());
  // <psi|psi'> = -i <psi|H|psi> under Schroedinger dynamics.
  out.dynamical_integral = cplx(0.0, -1.0) * integral;
  const cplx raw = out.alpha + integral;
  out.beta = wrap_2pi(raw.real());
  out.imag_residual = std::abs(raw.imag());

  const PhaseResult ref = aa_phase(traj, opt);
  const double gap = circular_distance(out.beta, ref.beta);
  if (gap > 100.0 * agreement_tol) {
    throw Error(ErrorKind::InconsistentDynamics,
                "energy form disagrees with the connection form by " + std::to_string(gap));
  }
  return out;
}

double berry_phase(const EigenPath& path, double closure_tol) {
  if (path.vectors.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "eigenpath needs at least two samples");
  const CVec2 a = normalized(path.vectors.front());
  const CVec2 b = normalized(path.vectors.back());
  if (!(1.0 - std::abs(inner(a, b)) < closure_tol))
    throw Error(ErrorKind::NotClosed, "eigenpath endpoints differ");
  std::vector<CVec2> unit;
  unit.reserve(path.vectors.size());
  for (const auto& v : path.vectors) unit.push_back(normalized(v));
  return wrap_2pi(pancharatnam(unit, 1e-12).beta_raw);
}

BlochPoint bloch_coords(const CVec2& state) {
  const double ma = std::abs(state.a), mb = std::abs(state.b);
  if (ma == 0.0 && mb == 0.0) throw Error(ErrorKind::ZeroState, "bloch_coords of zero state");
  BlochPoint p;
  p.Theta = 2.0 * std::atan2(mb, ma);
  p.Phi = (ma == 0.0 || mb == 0.0) ? 0.0 : wrap_2pi(std::arg(state.b) - std::arg(state.a));
  return p;
}

double solid_angle_phase(double Theta) { return kPi * (1.0 + std::cos(Theta)); }

}  // namespace nhcycle
