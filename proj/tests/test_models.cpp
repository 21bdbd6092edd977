#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nhcycle/geophase.hpp"
#include "nhcycle/models.hpp"

using namespace nhcycle;

namespace {

const double kPi = std::acos(-1.0);
const cplx I(0.0, 1.0);

bool is_multiple(const CVec2& x, const CVec2& y, double tol) {
  const double ov = std::abs(inner(x, y)) / (norm(x) * norm(y));
  return 1.0 - ov < tol;
}

// Central-difference residual of i dpsi/dt = H psi.
template <class F, class G>
double schroedinger_residual(F state, G H, double t, double dt) {
  const CVec2 d = (1.0 / (2.0 * dt)) * (state(t + dt) - state(t - dt));
  const CVec2 lhs = I * d;
  const CVec2 rhs = H(t) * state(t);
  return norm(lhs - rhs) / norm(rhs);
}

}  // namespace

TEST_CASE("h1 entries") {
  const CMat2 a = h1({0.0, 1.0}, 0.0);
  CHECK(norm(a - CMat2{0.0, 1.0, 1.0, 0.0}) < 1e-15);
  const CMat2 b = h1({0.5, 1.0}, kPi);
  CHECK(norm(b - CMat2{0.5, -1.0, -1.0, -0.5}) < 1e-15);
  const Model1Params real_eps{0.8, 1.7};
  for (double t : {0.0, 0.4, 2.2}) {
    const CMat2 H = h1(real_eps, t);
    CHECK(norm(H - H.adjoint()) < 1e-15);
  }
}

TEST_CASE("h1 closed-form cyclic states") {
  const Model1Params p{cplx(0.5, 0.3), 1.3};
  const double T = 2.0 * kPi / p.omega;
  const Generator H = [p](auto t) { return h1(p, t); };
  const CMat2 U = floquet_operator(H, T, kDefaultSteps);
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    const CVec2 u0 = h1_cyclic_exact(p, b, 0.0);
    CHECK(is_multiple(U * u0, u0, 1e-10));
    // Cyclic up to the stated factor e^{-+ i Omega T - i pi}.
    const Model1ClosedForm f = h1_closed_form(p);
    const cplx factor = std::exp((b == Branch::Plus ? -1.0 : 1.0) * I * f.Omega * T - I * kPi);
    CHECK(norm(h1_cyclic_exact(p, b, T) - factor * u0) < 1e-12 * norm(u0));
    CHECK(schroedinger_residual([&](double t) { return h1_cyclic_exact(p, b, t); },
                                [&](double t) { return h1(p, t); }, 0.7, 1e-4) < 1e-7);
  }
  const Model1ClosedForm slow = h1_closed_form({0.0, 1e-9});
  CHECK(std::abs(slow.Theta_plus - kPi / 2.0) < 1e-8);
  CHECK(std::abs(slow.Theta_minus - kPi / 2.0) < 1e-8);
}

TEST_CASE("h1 exceptional point") {
  // (eps - omega/2)^2 = -1 at eps = omega/2 + i.
  try {
    h1_closed_form({cplx(0.5, 1.0), 1.0});
    FAIL("expected ExceptionalPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ExceptionalPoint);
  }
}

TEST_CASE("h1_aa_exact values") {
  CHECK(std::abs(h1_aa_exact({0.0, 1e-9}, Branch::Plus) - kPi) < 1e-8);
  const double want = 2.0 * kPi * (3.0 - 2.0 * std::sqrt(2.0)) / (4.0 - 2.0 * std::sqrt(2.0));
  CHECK(std::abs(h1_aa_exact({0.0, 2.0}, Branch::Plus) - want) < 1e-14);
  CHECK(std::abs(want - 0.9201) < 1e-4);
}

TEST_CASE("h1_aa_exact solid-angle identity and real-epsilon sum rule") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5), w(0.2, 3.0);
  int checked = 0;
  while (checked < 50) {
    const Model1Params p{cplx(u(rng), 0.5 * u(rng)), w(rng)};
    const Model1ClosedForm f = h1_closed_form(p);
    if (std::abs(f.Omega) < 0.2) continue;
    CHECK(std::abs(h1_aa_exact(p, Branch::Plus) - solid_angle_phase(f.Theta_plus)) < 1e-12);
    CHECK(std::abs(h1_aa_exact(p, Branch::Minus) - solid_angle_phase(f.Theta_minus)) < 1e-12);
    CHECK(f.Theta_plus > 0.0);
    CHECK(f.Theta_plus < kPi);
    const Model1Params real_p{cplx(p.epsilon.real(), 0.0), p.omega};
    CHECK(std::abs(h1_aa_exact(real_p, Branch::Plus) + h1_aa_exact(real_p, Branch::Minus) -
                   2.0 * kPi) < 1e-10);
    ++checked;
  }
}

TEST_CASE("h1_aa_slow_limit") {
  CHECK(std::abs(h1_aa_slow_limit(0.0, Branch::Plus) - kPi) < 1e-15);
  CHECK(std::abs(h1_aa_slow_limit(0.0, Branch::Minus) - kPi) < 1e-15);
  const double eps = 0.7;
  const double d = std::sqrt(1.0 + eps * eps) - eps;
  const double want = 2.0 * kPi * d * d / (d * d + 1.0);
  const double got = h1_aa_slow_limit(eps, Branch::Minus);
  CHECK(std::abs(got - want) < 1e-14);
  CHECK(got > 0.0);
  CHECK(got < 2.0 * kPi);
  // The exact phase approaches the slow limit as T grows.
  double prev = 1e9;
  for (double T : {50.0, 100.0, 200.0, 400.0, 800.0}) {
    const double gap = std::abs(h1_aa_exact({eps, 2.0 * kPi / T}, Branch::Plus) -
                                h1_aa_slow_limit(eps, Branch::Plus));
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-2);
  CHECK_THROWS_AS(h1_aa_slow_limit(I, Branch::Plus), Error);
}

TEST_CASE("gw_phase") {
  CHECK(std::abs(gw_phase(0.0) - kPi) < 1e-15);
  const cplx v = gw_phase(0.5 * I);
  CHECK(std::abs(v - kPi * (1.0 - 0.5 * I / std::sqrt(0.75))) < 1e-14);
  CHECK(std::abs(v.imag()) > 0.1);
  CHECK(std::abs(gw_phase(1e8)) < 1e-7);
}

TEST_CASE("h2 entries") {
  for (double t : {0.0, 1.0, 3.3}) {
    const CMat2 zero_mu = h2({0.0, 0.8}, t);
    CHECK(norm(zero_mu - CMat2{1.0, 0.0, 0.0, -1.0}) < 1e-15);
    const CMat2 H = h2({0.6, 0.8}, t);
    CHECK(norm(H - H.transpose()) < 1e-15);
  }
  const Model2Params p{0.3, 0.8};
  const CMat2 quarter = h2(p, p.period() / 4.0);
  CHECK(std::abs(quarter.m01 + 0.3) < 1e-15);
  CHECK(std::abs(quarter.m01.imag()) < 1e-15);
}

TEST_CASE("hbu entries") {
  for (double t : {0.0, 3.0, 7.0}) {
    const CMat2 H = hbu({0.0, 1.0, 10.0}, t);
    CHECK(norm(H - CMat2{0.0, I, -I, 0.0}) < 1e-15);
  }
  const BUParams p{0.5, 1.0, 10.0};
  CHECK(norm(hbu(p, 0.0) - CMat2{0.0, I, -0.5 * I, 0.0}) < 1e-15);
  for (double t : {0.3, 4.1, 8.8}) CHECK(norm(hbu(p, t + p.T) - hbu(p, t)) < 1e-14);
}

TEST_CASE("bu_instantaneous") {
  const BUParams p{0.5, 1.0, 10.0};
  std::vector<double> grid;
  for (int k = 0; k <= 2048; ++k) grid.push_back(2.0 * kPi * k / 2048);
  const auto [plus, minus] = bu_instantaneous(p, grid);
  CHECK(std::abs(plus.values[0] + std::sqrt(0.5)) < 1e-15);
  CHECK(plus.closed);
  CHECK(minus.closed);
  CHECK(norm(plus.vectors.back() - plus.vectors.front()) < 1e-10);
  CHECK(norm(minus.vectors.back() - minus.vectors.front()) < 1e-10);
  for (size_t k = 0; k < grid.size(); k += 16) {
    const double t = grid[k] / (2.0 * kPi) * p.T;
    const CMat2 H = hbu(p, t);
    for (const EigenPath* e : {&plus, &minus})
      CHECK(norm(H * e->vectors[k] - e->values[k] * e->vectors[k]) < 1e-10);
    const auto [ep, em] = bu_eigenbasis(p, grid[k]);
    CHECK(norm(ep - plus.vectors[k]) < 1e-12);
    CHECK(norm(em - minus.vectors[k]) < 1e-12);
  }
  const auto flat = bu_instantaneous({0.0, 2.0, 10.0}, {0.0, 1.0, 2.0});
  for (const cplx& v : flat.first.values) CHECK(std::abs(v + std::sqrt(2.0)) < 1e-14);
  for (const cplx& v : flat.second.values) CHECK(std::abs(v - std::sqrt(2.0)) < 1e-14);
}

TEST_CASE("bu_floquet_bessel") {
  SUBCASE("cyclicity and eigenvector of the ODE Floquet operator") {
    const BUParams p{0.5, 1.0, 8.0};
    const Generator H = [p](auto t) { return hbu(p, t); };
    const CMat2 U = floquet_operator(H, p.T, kDefaultSteps);
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      const double s = b == Branch::Plus ? 1.0 : -1.0;
      const CVec2 f0 = bu_floquet_bessel(p, b, 0.0);
      const CVec2 fT = bu_floquet_bessel(p, b, p.T);
      CHECK(norm(fT - std::exp(s * I * p.T) * f0) < 1e-12 * norm(f0));
      CHECK(norm(U * f0 - std::exp(s * I * p.T) * f0) < 1e-9 * norm(f0));
      CHECK(schroedinger_residual([&](double t) { return bu_floquet_bessel(p, b, t); },
                                  [&](double t) { return hbu(p, t); }, 2.9, 1e-4) < 1e-7);
    }
  }
  SUBCASE("domain errors") {
    auto kind_of = [](auto fn) {
      try {
        fn();
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::InvalidArgument;
    };
    CHECK(kind_of([] { bu_floquet_bessel({0.5, 1.0, 3.0 * kPi}, Branch::Plus, 0.0); }) ==
          ErrorKind::IntegerOrder);
    CHECK(kind_of([] { bu_floquet_bessel({0.5, 1.0, 250.0}, Branch::Plus, 0.0); }) ==
          ErrorKind::SeriesDomain);
    CHECK(kind_of([] { bu_floquet_bessel({0.0, 1.0, 8.0}, Branch::Plus, 0.0); }) ==
          ErrorKind::SeriesDomain);
  }
  SUBCASE("extended-precision series at large order") {
    // Reference values from a 60-digit evaluation of the same series.
    const BUParams p{0.9, 1.0, 250.0};
    BesselOptions o;
    o.nu_max = 1000.0;
    o.envelope = 100.0;
    o.k_max = 400;
    o.extended = true;
    const CVec2 a = bu_floquet_bessel(p, Branch::Plus, 0.0, o);
    CHECK(std::abs(a.a - 0.03081762790217) < 1e-13);
    CHECK(std::abs(a.b - cplx(0.0, 0.01103444510647)) < 1e-13);
    const CVec2 b = bu_floquet_bessel(p, Branch::Minus, 0.25 * p.T, o);
    CHECK(std::abs(b.a - cplx(-134925412.1876, 75882007.9334)) < 1e-3);
    const CVec2 c = bu_floquet_bessel(p, Branch::Plus, 0.99 * p.T, o);
    CHECK(std::abs(c.a - cplx(-0.02056779430647, -0.02661272101541)) < 1e-13);
    CHECK(std::abs(c.b - cplx(0.01115349794816, -0.005668257840716)) < 1e-13);
  }
}
