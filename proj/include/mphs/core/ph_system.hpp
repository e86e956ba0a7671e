#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include <mphs/errors.hpp>

namespace mphs::core {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

using ScalarFn = std::function<double(const Vector&)>;
using VectorFn = std::function<Vector(const Vector&)>;
using MatrixFn = std::function<Matrix(const Vector&)>;
// Full right-hand side g(x, u) so that E(x) dx/dt = g(x, u).
using RhsFn = std::function<Vector(const Vector&, const Vector&)>;
// Instantaneous power as a function of (midpoint state, input).
using PowerFn = std::function<double(const Vector&, const Vector&)>;

// Finite-dimensional port-Hamiltonian descriptor system
//
//     E(x) dx/dt = (J(x) - R) e(x) + B u,    Eᵀ e(x) = ∇H(x),
//
// with J skew-symmetric, R symmetric positive semidefinite, and output
// y = Bᵀ e(x). The constant matrices E, J, R, B describe the common linear
// case; the optional function-valued members generalize individual pieces
// (state-dependent flow map or structure matrix, nonlinear dissipation, or a
// fully custom right-hand side) while keeping the energy bookkeeping hooks.
//
// Instances are treated as immutable after build_ph_system() and are safe to
// share across threads; a single simulation is sequential.
struct PhSystem {
  int n_state = 0;
  int n_input = 0;

  Matrix E;  // flow map, n_e x n_state (identity when left empty)
  Matrix J;  // structure matrix, n_e x n_e (zero when left empty)
  Matrix R;  // dissipation matrix, n_e x n_e (zero when left empty)
  Matrix B;  // input map, n_e x n_input

  VectorFn effort;       // e(x); identity when left unset (requires n_e == n_state)
  ScalarFn hamiltonian;  // H(x), required
  VectorFn grad_H;       // ∇H(x); central finite differences of H when unset

  // Optional state-dependent generalizations. When set, these take precedence
  // over the corresponding constant matrix during time stepping; the constant
  // matrices remain available for structure checks where meaningful.
  MatrixFn flow_map;   // E(x)
  MatrixFn structure;  // J(x)
  std::function<Vector(const Vector&, const Vector&)> dissipation_apply;  // (x, e) -> R(x) e
  RhsFn rhs;           // overrides (J - R) e + B u entirely

  // Energy-trace hooks. Defaults: supplied = e(x)ᵀ B u, dissipated = eᵀ R e
  // (or eᵀ · dissipation_apply(x, e) when that member is set).
  PowerFn supplied_power;
  std::function<double(const Vector&)> dissipated_power;

  // When nonempty, effort(x) = effort_linear * x and all structure is
  // constant, enabling a direct (factor-once) implicit-midpoint step.
  Matrix effort_linear;

  // Set by build_ph_system when E is the identity and no state-dependent flow
  // map exists; lets integrators skip the flow-map product on large states.
  bool flow_identity = false;

  // Admissible states at which build_ph_system verifies Eᵀ e(x) = ∇H(x).
  // Assemblers populate this with domain-valid samples; plain systems may
  // leave it empty, in which case standard-normal samples are used.
  std::vector<Vector> validation_states;

  // For a singular flow map: initial state at which the algebraic rows
  // (zero rows of E) must be consistent.
  std::optional<Vector> consistent_x0;

  int n_effort() const { return static_cast<int>(E.rows()); }

  Vector effort_at(const Vector& x) const { return effort ? effort(x) : x; }

  Matrix flow_at(const Vector& x) const { return flow_map ? flow_map(x) : E; }

  Matrix structure_at(const Vector& x) const { return structure ? structure(x) : J; }

  // g(x, u) with E(x) dx/dt = g(x, u).
  Vector rhs_at(const Vector& x, const Vector& u) const {
    if (rhs) return rhs(x, u);
    Vector e = effort_at(x);
    Vector g = structure_at(x) * e;
    if (dissipation_apply)
      g -= dissipation_apply(x, e);
    else if (R.size() > 0)
      g -= R * e;
    if (n_input > 0 && u.size() > 0) g += B * u;
    return g;
  }

  double supplied_power_at(const Vector& x, const Vector& u) const {
    if (supplied_power) return supplied_power(x, u);
    if (n_input == 0 || u.size() == 0 || B.size() == 0) return 0.0;
    return effort_at(x).dot(B * u);
  }

  double dissipated_power_at(const Vector& x) const {
    if (dissipated_power) return dissipated_power(x);
    Vector e = effort_at(x);
    if (dissipation_apply) return e.dot(dissipation_apply(x, e));
    if (R.size() == 0) return 0.0;
    return e.dot(R * e);
  }

  Vector grad_H_at(const Vector& x) const;
};

// Central finite-difference gradient of a scalar function.
Vector fd_gradient(const ScalarFn& f, const Vector& x, double h_rel = 1e-6);

// Validates dimensions, skew-symmetry of J, positive semidefiniteness of R,
// the compatibility Eᵀ e(x) = ∇H(x) at sampled states, and (for singular E
// with consistent_x0 set) consistency of the algebraic rows. Throws
// StructureError naming the violated check; returns the completed system.
PhSystem build_ph_system(PhSystem parts);

}  // namespace mphs::core
