#pragma once

#include <Eigen/Dense>

#include <mphs/core/ph_system.hpp>
#include <mphs/mech/rotor.hpp>

namespace mphs::cli {

// Embeds M q̈ + C_eff q̇ + K_eff q = u as a first-order port-Hamiltonian
// system with state x = (q, v):
//
//   [I 0] d [q]   ([ 0   I ]   [0 0]) [K_eff q]   [0]
//   [0 M] - [v] = ([-I  -W ] - [0 S]) [   v   ] + [I] u
//            dt
//
// where S and W are the symmetric and skew parts of the effective damping
// (viscous + gyroscopic), H = ½ vᵀM v + ½ qᵀK_eff q, and the input ports are
// collocated forces on the velocities (y = v, supplied power u·v).
inline core::PhSystem second_order_ph(const mech::SecondOrderSystem& sys,
                                      bool with_force_ports) {
  mech::validate_second_order(sys);
  const int n = sys.dof();
  const Eigen::MatrixXd m = sys.M;
  const Eigen::MatrixXd c_eff = sys.effective_damping();
  const Eigen::MatrixXd k_eff = sys.effective_stiffness();
  const Eigen::MatrixXd s = 0.5 * (c_eff + c_eff.transpose());
  const Eigen::MatrixXd w = 0.5 * (c_eff - c_eff.transpose());

  core::PhSystem ph;
  ph.n_state = 2 * n;
  ph.n_input = with_force_ports ? n : 0;
  ph.E = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  ph.E.bottomRightCorner(n, n) = m;
  ph.J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  ph.J.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  ph.J.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  ph.J.bottomRightCorner(n, n) = -w;
  ph.R = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  ph.R.bottomRightCorner(n, n) = s;
  ph.B = Eigen::MatrixXd::Zero(2 * n, ph.n_input);
  if (with_force_ports) ph.B.bottomRows(n) = Eigen::MatrixXd::Identity(n, n);
  ph.effort_linear = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  ph.effort_linear.topLeftCorner(n, n) = k_eff;
  const Eigen::MatrixXd effort_matrix = ph.effort_linear;
  ph.effort = [effort_matrix](const core::Vector& x) {
    return core::Vector(effort_matrix * x);
  };
  ph.hamiltonian = [m, k_eff, n](const core::Vector& x) {
    const auto q = x.head(n);
    const auto v = x.tail(n);
    return 0.5 * v.dot(m * v) + 0.5 * q.dot(k_eff * q);
  };
  ph.grad_H = [m, k_eff, n](const core::Vector& x) {
    core::Vector g(2 * n);
    g.head(n) = k_eff * x.head(n);
    g.tail(n) = m * x.tail(n);
    return g;
  };
  return core::build_ph_system(std::move(ph));
}

}  // namespace mphs::cli
