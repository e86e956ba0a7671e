#pragma once

#include <Eigen/Dense>
#include <functional>

#include <mphs/core/integrate.hpp>
#include <mphs/core/ph_system.hpp>
#include <mphs/thermal/material.hpp>

namespace mphs::thermal {

// Lumped thermal equivalent circuit: N capacitive nodes exchanging heat
// through pairwise conductances Lambda (W/K, symmetric, zero diagonal) and
// with the ambient through Lambda0. States are temperature offsets from the
// ambient theta0. Sources P are either a constant vector or a time function.
struct ThermalNetwork {
  int n = 0;
  Eigen::VectorXd C;        // heat capacities, J/K (> 0)
  Eigen::MatrixXd Lambda;   // node-node conductances
  Eigen::VectorXd Lambda0;  // node-ambient conductances (>= 0)
  Eigen::VectorXd P;        // constant node sources, W (empty = none)
  std::function<Eigen::VectorXd(double)> P_time;  // optional, overrides P
  double theta0 = 293.15;   // ambient temperature, K
};

// Assembled network: diag(C) dθ/dt = A θ + P with A_ij = Λ_ij (i ≠ j) and
// A_ii = -Λ0_i - Σ_j Λ_ij. The port-Hamiltonian form uses the quadratic
// storage V(x) = ½ xᵀ diag(C) x as its Hamiltonian (the natural Lyapunov
// function of the linear offset model) with R = -A and one input per node.
struct NetworkSystem {
  core::PhSystem ph;
  Eigen::MatrixXd E;  // diag(C)
  Eigen::MatrixXd A;
  Eigen::VectorXd P;  // constant sources (zeros when none given)
};

NetworkSystem assemble_network(const ThermalNetwork& net);

struct NetworkSteadyState {
  Eigen::VectorXd offset;       // x = -A⁻¹ P, K above ambient
  Eigen::VectorXd temperature;  // x + theta0
};

// Steady state under the constant source vector. Throws SingularNetwork when
// some heated component has no conductive path to the ambient.
NetworkSteadyState network_steady_state(const ThermalNetwork& net);

// Implicit-midpoint trajectory of the temperature offsets.
core::SimulateResult network_simulate(const ThermalNetwork& net, const Eigen::VectorXd& x0,
                                      double t_end, double dt);

}  // namespace mphs::thermal
