#pragma once

#include <functional>
#include <string>
#include <vector>

#include <mphs/core/ph_system.hpp>

namespace mphs::core {

// Per-step energy bookkeeping for a simulation. Row 0 describes the initial
// state (powers and residual zero); row k >= 1 describes step k with powers
// evaluated at the step midpoint and
//   balance_residual[k] = H(x_k) - H(x_{k-1}) - dt (supplied - dissipated).
// For quadratic Hamiltonians the implicit midpoint rule makes the residual
// vanish to round-off.
struct EnergyTrace {
  std::vector<double> times;             // s
  std::vector<double> hamiltonian;       // J
  std::vector<double> dissipated_power;  // W
  std::vector<double> supplied_power;    // W
  std::vector<double> balance_residual;  // J

  double max_abs_residual() const;
  // CSV with header "t,H,P_diss,P_supplied,residual".
  std::string to_csv() const;
};

struct NewtonOptions {
  double tol = 1e-12;   // relative residual tolerance
  int max_iter = 50;
  double fd_step = 1e-7;  // relative perturbation for finite-difference Jacobians
};

// One implicit-midpoint step: solves
//   E(x_m) (x_+ - x_-) = dt [ (J(x_m) - R) e(x_m) + B u ],  x_m = (x_+ + x_-)/2,
// with u held at its midpoint value. Linear systems are stepped by a direct
// solve; otherwise a Newton iteration with a finite-difference Jacobian
// (formed once per step and refreshed on stagnation) is used.
Vector step_implicit_midpoint(const PhSystem& sys, const Vector& x, const Vector& u_mid,
                              double dt, const NewtonOptions& opts = {});

using InputSignal = std::function<Vector(double)>;  // t -> u(t)

struct SimulateResult {
  std::vector<Vector> states;  // ceil(t_end/dt) + 1 entries including x0
  EnergyTrace trace;
};

SimulateResult simulate(const PhSystem& sys, const Vector& x0, const InputSignal& u,
                        double t_end, double dt, const NewtonOptions& opts = {});

// Convenience overload for a constant (or absent) input.
SimulateResult simulate(const PhSystem& sys, const Vector& x0, const Vector& u_const,
                        double t_end, double dt, const NewtonOptions& opts = {});

// Gyrator-type power-preserving feedback u_a = y_b, u_b = -y_a on the listed
// input ports (y = Bᵀ e). The composite has block state, block-skew coupled
// structure matrix, H = H_a + H_b, and passes build_ph_system validation.
// Requires both systems in constant-matrix form.
PhSystem interconnect(const PhSystem& a, const PhSystem& b, const std::vector<int>& ports_a,
                      const std::vector<int>& ports_b);

}  // namespace mphs::core
