#pragma once

#include "nhcycle/eigenpath.hpp"
#include "nhcycle/numerics.hpp"

namespace nhcycle {

struct PhaseResult {
  double beta = 0.0;          // reported in [0, 2 pi)
  cplx alpha;                 // overall phase, psi(T) = e^{i alpha} psi(0)
  cplx dynamical_integral;    // int <psi|psi'> / <psi|psi> dt
  double imag_residual = 0.0; // |Im(alpha + i * dynamical_integral)|
};

struct BlochPoint {
  double Theta = 0.0;  // [0, pi]
  double Phi = 0.0;    // [0, 2 pi)
};

struct PhaseOptions {
  double closure_tol = 1e-6;
  double overlap_tol = 1e-12;
};

double wrap_2pi(double x);
// Distance between two angles on the circle, in [0, pi].
double circular_distance(double a, double b);

// Relative deviation of `last` from the best complex multiple of `first`.
double closure_deviation(const CVec2& first, const CVec2& last);

// Pancharatnam form:
//   beta = arg<phi_0|phi_N> - sum_k arg<phi_k|phi_{k+1}>  (mod 2 pi)
PhaseResult aa_phase(const Trajectory& traj, const PhaseOptions& opt = {});

// beta = Re(alpha) + Re int <psi|H|psi>/<psi|psi> dt (trapezoid on the
// trajectory grid). Throws InconsistentDynamics when it disagrees with
// aa_phase by more than 100 * agreement_tol.
PhaseResult aa_phase_energy_form(const Trajectory& traj, const Generator& H,
                                 const PhaseOptions& opt = {}, double agreement_tol = 1e-5);

double berry_phase(const EigenPath& path, double closure_tol = 1e-8);

BlochPoint bloch_coords(const CVec2& state);
double solid_angle_phase(double Theta);

}  // namespace nhcycle
