#include "nhcycle/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nhcycle/geophase.hpp"

namespace nhcycle {

namespace {

CVec2 phase_aligned(const CVec2& v, const CVec2& ref) {
  const cplx ov = inner(ref, v);
  const double m = std::abs(ov);
  if (m == 0.0) return v;
  return (std::conj(ov) / m) * v;
}

double unit_overlap(const CVec2& x, const CVec2& y) {
  return std::abs(inner(x, y)) / (norm(x) * norm(y));
}

void check_shared_grid(const Trajectory& traj, const EigenPaths& paths) {
  const size_t n = traj.states.size();
  if (paths.first.vectors.size() != n || paths.second.vectors.size() != n)
    throw Error(ErrorKind::InvalidArgument, "trajectory and eigenpaths must share the grid");
}

}  // namespace

EigenPaths eigen_track(const Generator& H, double T, int samples, double tol) {
  if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "period must be positive");
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "need at least two samples");
  EigenPath plus, minus;
  plus.label = Branch::Plus;
  minus.label = Branch::Minus;

  for (int k = 0; k <= samples; ++k) {
    const double t = (k == samples) ? T : T * double(k) / double(samples);
    const CMat2 M = H(t);
    std::array<EigenPair, 2> ep;
    try {
      ep = eig2(M, tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateMatrix) throw;
      throw Error(ErrorKind::DegeneracyOnPath, "defective H at t=" + std::to_string(t));
    }
    if (std::abs(ep[0].value - ep[1].value) < tol * std::max(norm(M), 1e-300))
      throw Error(ErrorKind::DegeneracyOnPath, "degenerate eigenvalues at t=" + std::to_string(t));

    if (k == 0) {
      const cplx a = ep[0].value, b = ep[1].value;
      const bool first_plus = a.real() > b.real() || (a.real() == b.real() && a.imag() >= b.imag());
      if (!first_plus) std::swap(ep[0], ep[1]);
    } else {
      const CVec2& pp = plus.vectors.back();
      const CVec2& pm = minus.vectors.back();
      const double keep = unit_overlap(pp, ep[0].vector) + unit_overlap(pm, ep[1].vector);
      const double swap = unit_overlap(pp, ep[1].vector) + unit_overlap(pm, ep[0].vector);
      if (swap > keep) std::swap(ep[0], ep[1]);
      ep[0].vector = phase_aligned(ep[0].vector, pp);
      ep[1].vector = phase_aligned(ep[1].vector, pm);
      if (unit_overlap(pp, ep[0].vector) < 0.99 || unit_overlap(pm, ep[1].vector) < 0.99)
        throw Error(ErrorKind::DiscontinuousPath,
                    "eigenvector jump at t=" + std::to_string(t) + "; refine the grid");
    }
    plus.grid.push_back(t);
    minus.grid.push_back(t);
    plus.values.push_back(ep[0].value);
    minus.values.push_back(ep[1].value);
    plus.vectors.push_back(ep[0].vector);
    minus.vectors.push_back(ep[1].vector);
  }
  for (EigenPath* e : {&plus, &minus}) {
    e->closed = closure_deviation(e->vectors.front(), e->vectors.back()) < 1e-8;
  }
  return {plus, minus};
}

std::pair<cplx, cplx> project(const CVec2& state, const CVec2& e_plus, const CVec2& e_minus,
                              double tol) {
  const cplx det = e_plus.a * e_minus.b - e_minus.a * e_plus.b;
  if (!(std::abs(det) >= tol * norm(e_plus) * norm(e_minus)))
    throw Error(ErrorKind::DegenerateBasis, "eigenvectors are (nearly) parallel");
  const cplx ap = (state.a * e_minus.b - e_minus.a * state.b) / det;
  const cplx am = (e_plus.a * state.b - state.a * e_plus.b) / det;
  return {ap, am};
}

ProjectionSeries ratio_series(const Trajectory& traj, const EigenPaths& paths,
                              Branch reference_label) {
  check_shared_grid(traj, paths);
  ProjectionSeries s;
  s.grid = traj.times;
  s.reference_label = reference_label;
  const size_t n = traj.states.size();
  s.a_plus.resize(n);
  s.a_minus.resize(n);
  s.R.resize(n);
  const double inf = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < n; ++k) {
    const auto [ap, am] = project(traj.states[k], paths.first.vectors[k], paths.second.vectors[k]);
    s.a_plus[k] = ap;
    s.a_minus[k] = am;
    const cplx own = reference_label == Branch::Plus ? ap : am;
    const cplx oth = reference_label == Branch::Plus ? am : ap;
    s.R[k] = own == cplx(0.0) ? cplx(inf, 0.0) : oth / own;
  }
  return s;
}

cplx component_ratio(const CVec2& state, double tol) {
  auto r = try_component_ratio(state, tol);
  if (!r) throw Error(ErrorKind::PoleCrossing, "first component vanishes");
  return *r;
}

std::optional<cplx> try_component_ratio(const CVec2& state, double tol) {
  const double n = norm(state);
  if (!(std::abs(state.a) >= tol * n) || n == 0.0) return std::nullopt;
  return state.b / state.a;
}

const char* to_string(CrossingKind k) {
  return k == CrossingKind::ImZero ? "im_zero" : "dominance_switch";
}

std::vector<std::pair<size_t, Branch>> dominance_switches(const Trajectory& traj,
                                                          const EigenPaths& paths,
                                                          double pole_tol) {
  check_shared_grid(traj, paths);
  std::vector<std::pair<size_t, Branch>> out;
  std::optional<Branch> prev;
  for (size_t k = 0; k < traj.states.size(); ++k) {
    const auto psi = try_component_ratio(traj.states[k], pole_tol);
    const auto pp = try_component_ratio(paths.first.vectors[k], pole_tol);
    const auto pm = try_component_ratio(paths.second.vectors[k], pole_tol);
    if (!psi || !pp || !pm) continue;
    const Branch s = std::abs(*psi - *pp) <= std::abs(*psi - *pm) ? Branch::Plus : Branch::Minus;
    if (prev && *prev != s) out.emplace_back(k, s);
    prev = s;
  }
  return out;
}

std::vector<HopEvent> detect_hops(const Trajectory& traj, const EigenPaths& paths,
                                  const HopOptions& opt) {
  check_shared_grid(traj, paths);
  const size_t n = traj.states.size();
  const double T = traj.period;
  const long W = std::max<long>(1, std::lround(opt.window_fraction * double(n - 1)));

  // Linear-interpolated zero crossings of Im psi between consecutive valid samples.
  struct Crossing {
    size_t index;
    double t;
    bool used;
  };
  std::vector<Crossing> crossings;
  std::optional<size_t> last;
  double last_im = 0.0;
  for (size_t k = 0; k < n; ++k) {
    const auto psi = try_component_ratio(traj.states[k], opt.pole_tol);
    if (!psi) continue;
    const double im = psi->imag();
    if (last && ((last_im < 0.0 && im >= 0.0) || (last_im > 0.0 && im <= 0.0))) {
      if (!(im == 0.0 && k + 1 < n)) {
        const double t0 = traj.times[*last], t1 = traj.times[k];
        const double t = t0 + (t1 - t0) * last_im / (last_im - im);
        crossings.push_back({k, t, false});
      }
    }
    // A sample sitting exactly on zero is attributed to the next interval.
    if (im != 0.0 || !last) {
      last = k;
      last_im = im;
    }
  }

  std::vector<HopEvent> events;
  for (const auto& [j, to] : dominance_switches(traj, paths, opt.pole_tol)) {
    const double t_switch = traj.times[j];
    Crossing* best = nullptr;
    for (auto& c : crossings) {
      if (c.used) continue;
      if (std::labs(long(c.index) - long(j)) > W) continue;
      if (!best || std::abs(c.t - t_switch) < std::abs(best->t - t_switch)) best = &c;
    }
    HopEvent e;
    e.from = other(to);
    e.to = to;
    if (best) {
      best->used = true;
      e.t_star = best->t;
      e.crossing_kind = CrossingKind::ImZero;
    } else if (!opt.require_im_zero) {
      e.t_star = 0.5 * (traj.times[j - 1] + t_switch);
      e.crossing_kind = CrossingKind::DominanceSwitch;
    } else {
      continue;
    }
    if (!(e.t_star > 0.0 && e.t_star < T)) continue;
    e.relative = e.t_star / T;
    events.push_back(e);
  }
  std::sort(events.begin(), events.end(),
            [](const HopEvent& a, const HopEvent& b) { return a.t_star < b.t_star; });
  return events;
}

}  // namespace nhcycle
