#pragma once

#include <array>
#include <functional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "nhcycle/errors.hpp"
#include "nhcycle/linalg.hpp"

namespace nhcycle {

enum class Branch { Plus, Minus };

inline const char* to_string(Branch b) { return b == Branch::Plus ? "+" : "-"; }
inline Branch other(Branch b) { return b == Branch::Plus ? Branch::Minus : Branch::Plus; }

template <class R>
struct EigenPairT {
  Complex<R> value;
  Vec2<R> vector;
};
using EigenPair = EigenPairT<double>;

// Unit norm, first nonzero component real and positive.
template <class R>
Vec2<R> canonical_phase(const Vec2<R>& v);

// Eigenvalues via the cancellation-safe root pair (larger-modulus root from
// the quadratic formula, the other from det/root). Throws DegenerateMatrix
// for a defective (Jordan) matrix.
std::array<EigenPair, 2> eig2(const CMat2& M, double tol = 1e-10);
std::array<EigenPairT<ExtReal>, 2> eig2(const XMat2& M, double tol = 1e-20);

// Time-dependent Hamiltonian H(t) evaluable in double and extended precision.
// Callables that only accept double are promoted for extended evaluation.
class Generator {
 public:
  // H = 0.
  Generator() : Generator([](double) { return CMat2{}; }) {}

  template <class F,
            class = std::enable_if_t<!std::is_same_v<std::decay_t<F>, Generator>>>
  Generator(F f) {
    if constexpr (std::is_same_v<std::invoke_result_t<F, ExtReal>, XMat2>) {
      ext_ = [f](ExtReal t) { return f(t); };
      dbl_ = [f](double t) {
        if constexpr (std::is_same_v<std::invoke_result_t<F, double>, CMat2>) {
          return f(t);
        } else {
          return to_double(f(ExtReal(t)));
        }
      };
    } else {
      dbl_ = [f](double t) { return CMat2(f(t)); };
      ext_ = [f](ExtReal t) { return to_ext(CMat2(f(double(t)))); };
    }
  }

  CMat2 operator()(double t) const { return dbl_(t); }
  XMat2 operator()(ExtReal t) const { return ext_(t); }

 private:
  std::function<CMat2(double)> dbl_;
  std::function<XMat2(ExtReal)> ext_;
};

struct ModelRecord {
  std::string id;
  std::vector<std::pair<std::string, double>> params;
};

enum class Precision { Double, Extended };

struct PropagateOptions {
  Precision precision = Precision::Double;
  double overflow_cap = 1e15;
  ModelRecord model{};
};

inline constexpr int kDefaultSteps = 1 << 14;

struct Trajectory {
  std::vector<double> times;
  std::vector<CVec2> states;
  double period = 0.0;
  int steps = 0;
  ModelRecord model;
};

// Fixed-step classical RK4 for i dpsi/dt = H(t) psi on a uniform grid.
// No renormalization is applied.
Trajectory propagate(const Generator& H, const CVec2& psi0, double T, int steps,
                     const PropagateOptions& opt = {});
// Integrates in extended precision regardless of opt.precision.
Trajectory propagate(const Generator& H, const XVec2& psi0, double T, int steps,
                     const PropagateOptions& opt = {});

struct FloquetResult {
  XMat2 U;
  xcplx liouville_target;  // exp(-i * int tr H dt)
  double liouville_residual = 0.0;
};

// One-period propagator in extended precision. The Liouville residual is
// relative to max(1, |target|).
FloquetResult floquet(const Generator& H, double T, int steps,
                      double overflow_cap = 1e15);

// Rounded U(T); throws LiouvilleViolation when the determinant check fails.
CMat2 floquet_operator(const Generator& H, double T, int steps,
                       double liouville_tol = 1e-6, double overflow_cap = 1e15);
XMat2 floquet_operator_ext(const Generator& H, double T, int steps,
                           double liouville_tol = 1e-6, double overflow_cap = 1e15);

template <class R>
struct CyclicStateT {
  Vec2<R> u;
  Complex<R> alpha;
  Branch label = Branch::Plus;
  Complex<R> multiplier;  // e^{i alpha}
};
using CyclicState = CyclicStateT<double>;
using XCyclicState = CyclicStateT<ExtReal>;

CyclicState to_double(const XCyclicState& s);

// alpha = -i log(lambda), principal branch. First element is the + branch:
// larger Re(alpha), ties broken by larger Im(alpha).
std::pair<CyclicState, CyclicState> cyclic_states(const CMat2& U, double tol = 1e-10);
std::pair<XCyclicState, XCyclicState> cyclic_states(const XMat2& U, double tol = 1e-20);

enum class Stability { Stable, Unstable, Marginal };

struct StabilityClass {
  Stability kind = Stability::Marginal;
  std::array<double, 2> moduli{0.0, 0.0};
};

StabilityClass classify_stability(const CMat2& U, double tol = 1e-6);
StabilityClass classify_stability(const XMat2& U, double tol = 1e-6);

// Branch-continuous k-th root along an ordered sample sequence, principal
// at the first sample.
std::vector<cplx> track_root(const std::vector<cplx>& values, int k);

}  // namespace nhcycle
