#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nhcycle/eigenpath.hpp"
#include "nhcycle/numerics.hpp"

namespace nhcycle {

// first: + path, second: - path
using EigenPaths = std::pair<EigenPath, EigenPath>;

// Eigenpairs on t_k = k T / samples, k = 0..samples. At t = 0 the + label
// goes to the larger Re(E) (then larger Im(E)); afterwards labels follow
// maximal overlap and each eigenvector is phase-aligned to its predecessor.
EigenPaths eigen_track(const Generator& H, double T, int samples, double tol = 1e-10);

// Solves a_plus e_plus + a_minus e_minus = state.
std::pair<cplx, cplx> project(const CVec2& state, const CVec2& e_plus, const CVec2& e_minus,
                              double tol = 1e-12);

struct ProjectionSeries {
  std::vector<double> grid;
  std::vector<cplx> a_plus;
  std::vector<cplx> a_minus;
  Branch reference_label = Branch::Plus;
  std::vector<cplx> R;  // a_other / a_own
};

ProjectionSeries ratio_series(const Trajectory& traj, const EigenPaths& paths,
                              Branch reference_label);

// b / a; throws PoleCrossing when |a| < tol * |state|.
cplx component_ratio(const CVec2& state, double tol = 1e-12);
std::optional<cplx> try_component_ratio(const CVec2& state, double tol = 1e-12);

enum class CrossingKind { ImZero, DominanceSwitch };

const char* to_string(CrossingKind k);

struct HopEvent {
  double t_star = 0.0;
  double relative = 0.0;
  Branch from = Branch::Minus;
  Branch to = Branch::Plus;
  CrossingKind crossing_kind = CrossingKind::ImZero;
};

struct HopOptions {
  double window_fraction = 0.02;  // W as a fraction of the samples per period
  bool require_im_zero = true;
  double pole_tol = 1e-12;
};

// Sample indices j where the nearest-eigenpath assignment of psi = b/a
// differs from the previous valid sample, with the new assignment.
std::vector<std::pair<size_t, Branch>> dominance_switches(const Trajectory& traj,
                                                          const EigenPaths& paths,
                                                          double pole_tol = 1e-12);

std::vector<HopEvent> detect_hops(const Trajectory& traj, const EigenPaths& paths,
                                  const HopOptions& opt = {});

}  // namespace nhcycle
