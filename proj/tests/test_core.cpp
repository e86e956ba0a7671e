#include <doctest.h>

#include <cmath>

#include <mphs/core/integrate.hpp>
#include <mphs/core/ph_system.hpp>

using namespace mphs;
using core::Matrix;
using core::PhSystem;
using core::Vector;

namespace {

// Canonical lossless oscillator: J = [[0,1],[-1,0]], H = (x1^2 + x2^2)/2.
PhSystem lc_oscillator(int n_input = 0) {
  PhSystem s;
  s.n_state = 2;
  s.n_input = n_input;
  s.J = Matrix{{0.0, 1.0}, {-1.0, 0.0}};
  if (n_input > 0) s.B = Matrix::Identity(2, n_input);
  s.hamiltonian = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  s.grad_H = [](const Vector& x) { return x; };
  s.effort_linear = Matrix::Identity(2, 2);
  return core::build_ph_system(std::move(s));
}

}  // namespace

TEST_CASE("construction accepts the lossless oscillator") {
  PhSystem s = lc_oscillator();
  CHECK(s.n_state == 2);
  CHECK(s.hamiltonian(Vector{{3.0, 4.0}}) == doctest::Approx(12.5));
}

TEST_CASE("construction rejects a symmetric structure matrix") {
  PhSystem s;
  s.n_state = 2;
  s.J = Matrix{{0.0, 1.0}, {1.0, 0.0}};
  s.hamiltonian = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  s.grad_H = [](const Vector& x) { return x; };
  CHECK_THROWS_WITH_AS(core::build_ph_system(std::move(s)),
                       doctest::Contains("StructureError(skew)"), StructureError);
}

TEST_CASE("construction rejects an indefinite dissipation matrix") {
  PhSystem s;
  s.n_state = 2;
  s.R = Matrix{{-1.0, 0.0}, {0.0, 0.0}};
  s.hamiltonian = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  s.grad_H = [](const Vector& x) { return x; };
  CHECK_THROWS_WITH_AS(core::build_ph_system(std::move(s)),
                       doctest::Contains("StructureError(psd)"), StructureError);
}

TEST_CASE("construction rejects an effort incompatible with the energy gradient") {
  PhSystem s;
  s.n_state = 2;
  s.hamiltonian = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  s.effort = [](const Vector& x) { return Vector(2.0 * x); };  // wrong scale
  CHECK_THROWS_WITH_AS(core::build_ph_system(std::move(s)),
                       doctest::Contains("StructureError(effort)"), StructureError);
}

TEST_CASE("midpoint step reproduces the closed-form scalar decay update") {
  // x' = -x as a pH system: E = 1, J = 0, R = 1, H = x^2/2.
  PhSystem s;
  s.n_state = 1;
  s.R = Matrix{{1.0}};
  s.hamiltonian = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  s.grad_H = [](const Vector& x) { return x; };
  s.effort_linear = Matrix::Identity(1, 1);
  s = core::build_ph_system(std::move(s));

  const Vector x1 = core::step_implicit_midpoint(s, Vector{{1.0}}, Vector(), 0.1);
  // (1 - dt/2) / (1 + dt/2) at dt = 0.1.
  CHECK(x1[0] == doctest::Approx(0.9047619047619048).epsilon(1e-14));
}

TEST_CASE("midpoint step conserves a quadratic energy over 1000 steps") {
  PhSystem s = lc_oscillator();
  Vector x{{1.0, 0.0}};
  const double h0 = s.hamiltonian(x);
  for (int k = 0; k < 1000; ++k) x = core::step_implicit_midpoint(s, x, Vector(), 0.01);
  CHECK(std::abs(s.hamiltonian(x) - h0) <= 1e-12 * h0);
}

TEST_CASE("damped oscillator energy decreases every step") {
  PhSystem s;
  s.n_state = 2;
  s.J = Matrix{{0.0, 1.0}, {-1.0, 0.0}};
  s.R = Matrix{{0.0, 0.0}, {0.0, 0.5}};
  s.hamiltonian = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  s.grad_H = [](const Vector& x) { return x; };
  s.effort_linear = Matrix::Identity(2, 2);
  s = core::build_ph_system(std::move(s));

  Vector x{{1.0, 1.0}};
  double h = s.hamiltonian(x);
  for (int k = 0; k < 200; ++k) {
    x = core::step_implicit_midpoint(s, x, Vector(), 0.05);
    const double h_next = s.hamiltonian(x);
    CHECK(h_next < h);
    h = h_next;
  }
}

TEST_CASE("simulate records an exact balance for quadratic energies") {
  PhSystem s = lc_oscillator();
  auto res = core::simulate(s, Vector{{1.0, 0.0}}, Vector(), 10.0, 0.01);
  CHECK(res.states.size() == 1001);
  CHECK(res.trace.times.size() == 1001);
  CHECK(res.trace.max_abs_residual() <= 1e-12);
}

TEST_CASE("simulate rejects a non-positive step size") {
  PhSystem s = lc_oscillator();
  CHECK_THROWS_AS(core::simulate(s, Vector{{1.0, 0.0}}, Vector(), 1.0, 0.0), InvalidArgument);
}

TEST_CASE("energy trace serializes with the documented header") {
  PhSystem s = lc_oscillator();
  auto res = core::simulate(s, Vector{{1.0, 0.0}}, Vector(), 0.02, 0.01);
  const std::string csv = res.trace.to_csv();
  CHECK(csv.rfind("t,H,P_diss,P_supplied,residual\n", 0) == 0);
}

TEST_CASE("midpoint trajectories converge with order two") {
  PhSystem s = lc_oscillator();
  const double t_end = 1.0;
  auto end_state = [&](double dt) {
    return core::simulate(s, Vector{{1.0, 0.0}}, Vector(), t_end, dt).states.back();
  };
  const Vector ref = end_state(0.1 / 8.0);
  const double e1 = (end_state(0.1) - ref).norm();
  const double e2 = (end_state(0.05) - ref).norm();
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.20));
}

TEST_CASE("interconnected lossless oscillators conserve total energy") {
  PhSystem a = lc_oscillator(1);
  PhSystem b = lc_oscillator(1);
  PhSystem c = core::interconnect(a, b, {0}, {0});
  CHECK(c.n_state == 4);
  CHECK(c.n_input == 0);

  Vector x0{{1.0, 0.0, 0.0, 0.5}};
  auto res = core::simulate(c, x0, Vector(), 10.0, 0.01);
  const double h0 = res.trace.hamiltonian.front();
  for (double h : res.trace.hamiltonian) CHECK(std::abs(h - h0) <= 1e-12 * h0);
}

TEST_CASE("oscillator coupled to a damper dissipates monotonically") {
  PhSystem a = lc_oscillator(1);

  PhSystem d;  // pure damper: H = x^2/2, R = 0.8, one port
  d.n_state = 1;
  d.n_input = 1;
  d.R = Matrix{{0.8}};
  d.B = Matrix::Identity(1, 1);
  d.hamiltonian = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  d.grad_H = [](const Vector& x) { return x; };
  d.effort_linear = Matrix::Identity(1, 1);
  d = core::build_ph_system(std::move(d));

  PhSystem c = core::interconnect(a, d, {0}, {0});
  auto res = core::simulate(c, Vector{{1.0, 0.0, 0.2}}, Vector(), 5.0, 0.01);
  for (std::size_t k = 1; k < res.trace.hamiltonian.size(); ++k)
    CHECK(res.trace.hamiltonian[k] <= res.trace.hamiltonian[k - 1] + 1e-12);
}

TEST_CASE("interconnect rejects mismatched port lists") {
  PhSystem a = lc_oscillator(1);
  PhSystem b = lc_oscillator(1);
  CHECK_THROWS_AS(core::interconnect(a, b, {0}, {}), PortMismatch);
}

TEST_CASE("algebraic rows of a singular flow map must be consistent") {
  auto make = [](double x2) {
    PhSystem s;
    s.n_state = 2;
    s.E = Matrix{{1.0, 0.0}, {0.0, 0.0}};  // second row algebraic
    s.J = Matrix{{0.0, 1.0}, {-1.0, 0.0}};
    s.hamiltonian = [](const Vector& x) { return 0.5 * x[0] * x[0] + 0.5 * x[1] * x[1]; };
    s.grad_H = [](const Vector& x) { return x; };
    s.effort = [](const Vector& x) {
      return Vector{{x[0], 0.0}};  // Eᵀe = (x1, 0); constraint row enforces x1 = 0... at x0
    };
    s.hamiltonian = [](const Vector& x) { return 0.5 * x[0] * x[0]; };
    s.grad_H = [](const Vector& x) { return Vector{{x[0], 0.0}}; };
    s.validation_states = {Vector{{0.3, 0.7}}};
    s.consistent_x0 = Vector{{0.0, x2}};
    return s;
  };
  CHECK_NOTHROW(core::build_ph_system(make(0.4)));  // -x1 = 0 at x0 with x1 = 0
  PhSystem bad = make(0.4);
  bad.consistent_x0 = Vector{{0.5, 0.4}};  // algebraic row -x1 != 0
  CHECK_THROWS_WITH_AS(core::build_ph_system(std::move(bad)),
                       doctest::Contains("StructureError(consistency)"), StructureError);
}

TEST_CASE("newton iteration reports non-convergence when starved of iterations") {
  PhSystem s;  // strongly nonlinear effort: H = x^4/4
  s.n_state = 1;
  s.R = Matrix{{1.0}};
  s.hamiltonian = [](const Vector& x) { return 0.25 * std::pow(x[0], 4); };
  s.grad_H = [](const Vector& x) { return Vector{{std::pow(x[0], 3)}}; };
  s.effort = [](const Vector& x) { return Vector{{std::pow(x[0], 3)}}; };
  s.validation_states = {Vector{{0.7}}};
  s = core::build_ph_system(std::move(s));

  core::NewtonOptions opts;
  opts.max_iter = 1;
  CHECK_THROWS_AS(core::step_implicit_midpoint(s, Vector{{2.0}}, Vector(), 5.0, opts),
                  NonConvergence);
  // With the default budget the same step succeeds.
  CHECK_NOTHROW(core::step_implicit_midpoint(s, Vector{{2.0}}, Vector(), 5.0));
}

TEST_CASE("dissipation inequality holds for unforced quadratic systems") {
  PhSystem s;
  s.n_state = 3;
  s.J = Matrix{{0.0, 1.0, 0.0}, {-1.0, 0.0, 2.0}, {0.0, -2.0, 0.0}};
  s.R = Matrix{{0.1, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.3}};
  s.hamiltonian = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  s.grad_H = [](const Vector& x) { return x; };
  s.effort_linear = Matrix::Identity(3, 3);
  s = core::build_ph_system(std::move(s));

  auto res = core::simulate(s, Vector{{1.0, -0.4, 0.7}}, Vector(), 5.0, 0.02);
  for (std::size_t k = 1; k < res.trace.hamiltonian.size(); ++k) {
    CHECK(res.trace.hamiltonian[k] <=
          res.trace.hamiltonian[k - 1] + 1e-10 * std::max(1.0, res.trace.hamiltonian[k - 1]));
    CHECK(res.trace.dissipated_power[k] >= -1e-12);
  }
}
