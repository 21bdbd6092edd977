#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nhcycle/adiabatic.hpp"
#include "nhcycle/geophase.hpp"
#include "nhcycle/models.hpp"

using namespace nhcycle;

namespace {

const double kPi = std::acos(-1.0);
const cplx I(0.0, 1.0);

struct H1Case {
  Model1Params p;
  double T;
  Generator H;
};

H1Case h1_case(cplx eps, double T) {
  const Model1Params p{eps, 2.0 * kPi / T};
  return {p, T, [p](auto t) { return h1(p, t); }};
}

Trajectory h1_cyclic_traj(const H1Case& c, Branch b, int steps = kDefaultSteps) {
  return propagate(c.H, h1_cyclic_exact(c.p, b, 0.0), c.T, steps);
}

Trajectory h2_cyclic_traj(double mu, double T, const Generator& H, bool plus) {
  const auto cs = cyclic_states(floquet_operator_ext(H, T, kDefaultSteps));
  return propagate(H, plus ? cs.first.u : cs.second.u, T, kDefaultSteps);
}

}  // namespace

TEST_CASE("aa_phase of h1 matches the closed form") {
  const H1Case c = h1_case(0.5, 2.0 * kPi);
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const PhaseResult r = aa_phase(h1_cyclic_traj(c, b));
    CHECK(circular_distance(r.beta, h1_aa_exact(c.p, b)) < 1e-6);
    CHECK(r.imag_residual < 1e-8);
  }
  const H1Case nh = h1_case(cplx(0.5, 0.3), 2.0 * kPi / 1.3);
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const PhaseResult r = aa_phase(h1_cyclic_traj(nh, b));
    CHECK(circular_distance(r.beta, h1_aa_exact(nh.p, b)) < 1e-6);
    CHECK(r.imag_residual < 1e-8);
  }
}

TEST_CASE("aa_phase of a constant trajectory is zero") {
  const Generator H;
  const Trajectory tr = propagate(H, CVec2{cplx(0.6, 0.1), 0.8}, 3.0, 256);
  const PhaseResult r = aa_phase(tr);
  CHECK(circular_distance(r.beta, 0.0) < 1e-14);
  CHECK(circular_distance(aa_phase_energy_form(tr, H).beta, 0.0) < 1e-14);
}

TEST_CASE("aa_phase is invariant under a time-dependent complex gauge") {
  const H1Case c = h1_case(cplx(0.5, 0.3), 2.0 * kPi / 1.3);
  const Trajectory tr = h1_cyclic_traj(c, Branch::Plus);
  const double beta = aa_phase(tr).beta;
  Trajectory g = tr;
  for (size_t k = 0; k < g.states.size(); ++k) {
    const cplx f = std::exp((3.0 + 2.0 * I) * std::sin(2.0 * kPi * g.times[k] / g.period));
    g.states[k] = f * g.states[k];
  }
  CHECK(circular_distance(aa_phase(g).beta, beta) < 1e-8);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 10; ++trial) {
    const cplx a(n(rng), n(rng)), b(n(rng), n(rng));
    const int m = 1 + trial % 3;
    Trajectory h = tr;
    for (size_t k = 0; k < h.states.size(); ++k) {
      const double s = 2.0 * kPi * m * h.times[k] / h.period;
      h.states[k] = std::exp(a * std::sin(s) + b * (1.0 - std::cos(s)) + I * 0.3 * double(m) * s) *
                    h.states[k];
    }
    CHECK(circular_distance(aa_phase(h).beta, beta) < 1e-8);
  }
}

TEST_CASE("aa_phase rejects non-cyclic trajectories") {
  const Model2Params p{0.2, 2.0 * kPi / 50.0};
  const Generator H = [p](auto t) { return h2(p, t); };
  const Trajectory tr = propagate(H, normalized(CVec2{1.0, 1.0}), p.period(), 1024);
  try {
    aa_phase(tr);
    FAIL("expected NotCyclic");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotCyclic);
  }
}

TEST_CASE("energy form agrees with the connection form") {
  const H1Case c = h1_case(0.5, 2.0 * kPi);
  const PhaseResult e = aa_phase_energy_form(h1_cyclic_traj(c, Branch::Plus), c.H);
  CHECK(circular_distance(e.beta, aa_phase(h1_cyclic_traj(c, Branch::Plus)).beta) < 1e-5);

  const Model2Params z{0.0, 1.0};
  const Generator Hz = [z](auto t) { return h2(z, t); };
  const Trajectory pole = propagate(Hz, CVec2{1.0, 0.0}, z.period(), 1024);
  CHECK(circular_distance(aa_phase_energy_form(pole, Hz).beta, 0.0) < 1e-9);

  for (double T : {50.0, 100.0, 400.0}) {
    const Model2Params p{0.2, 2.0 * kPi / T};
    const Generator H = [p](auto t) { return h2(p, t); };
    for (bool plus : {true, false}) {
      const Trajectory tr = h2_cyclic_traj(0.2, T, H, plus);
      const PhaseResult a = aa_phase(tr);
      const PhaseResult b = aa_phase_energy_form(tr, H);
      CHECK(circular_distance(a.beta, b.beta) < 1e-5);
      CHECK(a.imag_residual < 1e-8);
    }
  }
}

TEST_CASE("energy-form imaginary residual tracks the integrator's norm drift") {
  // The connection form is consistent with the sampled states by construction;
  // the energy form compares them with H and so sees the O(h^4) RK4 error.
  const double T = 400.0;
  const Model2Params p{0.2, 2.0 * kPi / T};
  const Generator H = [p](auto t) { return h2(p, t); };
  const auto cs = cyclic_states(floquet_operator_ext(H, T, kDefaultSteps));
  std::vector<double> res;
  for (int n : {1 << 13, 1 << 14, 1 << 15}) {
    const Trajectory tr = propagate(H, cs.first.u, T, n);
    CHECK(aa_phase(tr).imag_residual < 1e-12);
    res.push_back(aa_phase_energy_form(tr, H).imag_residual);
  }
  CHECK(res[0] / res[1] > 16.0);
  CHECK(res[1] / res[2] > 16.0);
  CHECK(res[2] < 1e-8);
}

TEST_CASE("energy form detects a mismatched generator") {
  const H1Case c = h1_case(cplx(0.5, 0.3), 2.0 * kPi / 1.3);
  const Generator wrong;
  try {
    aa_phase_energy_form(h1_cyclic_traj(c, Branch::Plus), wrong);
    FAIL("expected InconsistentDynamics");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InconsistentDynamics);
  }
}

TEST_CASE("berry_phase") {
  SUBCASE("h2 eigenpaths carry no Berry phase") {
    const Model2Params p{0.2, 2.0 * kPi / 100.0};
    const Generator H = [p](auto t) { return h2(p, t); };
    const EigenPaths paths = eigen_track(H, p.period(), 4096);
    CHECK(circular_distance(berry_phase(paths.first), 0.0) < 1e-8);
    CHECK(circular_distance(berry_phase(paths.second), 0.0) < 1e-8);
  }
  SUBCASE("h1 eigenpaths reproduce the slow-driving limit") {
    for (double eps : {0.5, -0.3, 1.2}) {
      const H1Case c = h1_case(eps, 100.0);
      const EigenPaths paths = eigen_track(c.H, c.T, 4096);
      CHECK(circular_distance(berry_phase(paths.first), h1_aa_slow_limit(eps, Branch::Plus)) < 1e-4);
      CHECK(circular_distance(berry_phase(paths.second), h1_aa_slow_limit(eps, Branch::Minus)) <
            1e-4);
    }
  }
  SUBCASE("constant path") {
    EigenPath e;
    e.vectors.assign(10, normalized(CVec2{1.0, I}));
    CHECK(berry_phase(e) == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("open path") {
    EigenPath e;
    e.vectors = {CVec2{1.0, 0.0}, normalized(CVec2{1.0, 1.0}), CVec2{0.0, 1.0}};
    CHECK_THROWS_AS(berry_phase(e), Error);
  }
}

TEST_CASE("bloch_coords") {
  BlochPoint p = bloch_coords(CVec2{1.0, 0.0});
  CHECK(p.Theta == 0.0);
  CHECK(p.Phi == 0.0);
  p = bloch_coords(normalized(CVec2{1.0, 1.0}));
  CHECK(std::abs(p.Theta - kPi / 2.0) < 1e-15);
  CHECK(std::abs(p.Phi) < 1e-15);
  p = bloch_coords(CVec2{1.0, I});
  CHECK(std::abs(p.Theta - kPi / 2.0) < 1e-15);
  CHECK(std::abs(p.Phi - kPi / 2.0) < 1e-15);
  CHECK_THROWS_AS(bloch_coords(CVec2{}), Error);
}

TEST_CASE("solid_angle_phase") {
  CHECK(std::abs(solid_angle_phase(kPi / 2.0) - kPi) < 1e-15);
  CHECK(std::abs(wrap_2pi(solid_angle_phase(0.0))) < 1e-15);
  const Model1Params p{0.5, 1.0};
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const double Theta = bloch_coords(h1_cyclic_exact(p, b, 0.0)).Theta;
    CHECK(std::abs(solid_angle_phase(Theta) - h1_aa_exact(p, b)) < 1e-12);
  }
}

TEST_CASE("grid convergence on a smooth trajectory") {
  const H1Case c = h1_case(cplx(0.4, 0.2), 10.0);
  std::vector<double> betas;
  for (int n : {1 << 12, 1 << 13, 1 << 14, 1 << 15})
    betas.push_back(aa_phase(h1_cyclic_traj(c, Branch::Minus, n)).beta);
  double prev = 1e9;
  for (size_t k = 0; k + 1 < betas.size(); ++k) {
    const double d = circular_distance(betas[k], betas[k + 1]);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("AA phase approaches the Berry phase as T grows") {
  SUBCASE("h2 at mu = 0.2") {
    double prev = 1e9;
    for (double T : {50.0, 100.0, 200.0, 400.0}) {
      const Model2Params p{0.2, 2.0 * kPi / T};
      const Generator H = [p](auto t) { return h2(p, t); };
      const EigenPaths paths = eigen_track(H, T, 4096);
      const double berry = berry_phase(paths.first);
      double worst = 0.0;
      for (bool plus : {true, false})
        worst = std::max(worst, circular_distance(aa_phase(h2_cyclic_traj(0.2, T, H, plus)).beta, berry));
      CHECK(worst < prev);
      prev = worst;
    }
    CHECK(prev < 1e-2);
  }
  SUBCASE("h1 at eps = 0.5, both branches") {
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      double prev = 1e9;
      for (double T : {50.0, 100.0, 200.0, 400.0}) {
        const H1Case c = h1_case(0.5, T);
        const EigenPaths paths = eigen_track(c.H, T, 4096);
        const double berry = berry_phase(b == Branch::Plus ? paths.first : paths.second);
        const double d = circular_distance(aa_phase(h1_cyclic_traj(c, b)).beta, berry);
        CHECK(d < prev);
        prev = d;
      }
    }
  }
}

TEST_CASE("phase helpers") {
  CHECK(wrap_2pi(-0.1) == doctest::Approx(2.0 * kPi - 0.1));
  CHECK(wrap_2pi(2.0 * kPi) == doctest::Approx(0.0));
  CHECK(circular_distance(0.1, 2.0 * kPi - 0.1) == doctest::Approx(0.2));
  CHECK(closure_deviation(CVec2{1.0, I}, CVec2{2.0 * I, -2.0}) < 1e-15);
}
