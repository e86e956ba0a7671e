#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "mphs/mech/tensors.hpp"

namespace mphs::mech {

// Linear(ized) second-order model M s̈ + D_eff ṡ + K_eff s = f with
//   D_eff = D + 2 omega G,  K_eff = K - omega² Z + omega² K_G.
// The base matrices keep their symmetry classes (M SPD, D sym PSD, K sym,
// G skew, Z/K_G sym); the omega-dependent combinations are composed on
// demand so the stored fields stay individually checkable.
struct SecondOrderSystem {
  Eigen::MatrixXd M, D, K;
  Eigen::MatrixXd G, Z, K_G;  // optional; empty when absent
  double omega = 0.0;         // rad/s spin speed

  int dof() const { return static_cast<int>(M.rows()); }
  bool has_rotor_terms() const { return G.size() > 0 || Z.size() > 0 || K_G.size() > 0; }

  Eigen::MatrixXd effective_damping() const;
  Eigen::MatrixXd effective_stiffness() const;
};

// Throws StructureError naming the first violated symmetry/definiteness class.
void validate_second_order(const SecondOrderSystem& sys);

// Longitudinal bar with linear (hat-function) elements and both ends fixed;
// n_nodes total grid nodes leave n_nodes - 2 free DOF. Damping comes from the
// linearized viscosity tensor, or from Rayleigh coefficients (alpha, beta)
// with D = alpha M + beta K when given.
SecondOrderSystem assemble_linear_nonrotating(
    const MechMaterial& material, double length, int n_nodes,
    std::optional<std::pair<double, double>> rayleigh = std::nullopt);

// Installs spin-speed effects on a base system: gyroscopic G (skew),
// centrifugal softening Z and geometric stiffening K_G (symmetric; pass empty
// matrices to omit). The terms enter through effective_damping/stiffness.
SecondOrderSystem assemble_rotor_system(SecondOrderSystem base, double omega,
                                        const Eigen::MatrixXd& G,
                                        const Eigen::MatrixXd& Z = {},
                                        const Eigen::MatrixXd& K_G = {});

// Eigenvalues of the companion linearization, sorted lexicographically by
// (imaginary part, real part). Throws SingularMass when M is not invertible.
std::vector<std::complex<double>> second_order_eigs(const SecondOrderSystem& sys);

// Planar lateral rotor: point mass m on an isotropic shaft of stiffness k
// with external damping d, M = m I2, D = d I2, K = k I2.
SecondOrderSystem jeffcott_system(double m, double d, double k);

// Shaft speed under constant torques: closed-form solution of
//   Theta dω/dt = (T_e - T_L) - mu_f ω
// at time t (exponential approach for mu_f > 0, linear ramp for mu_f = 0).
double rotor_speed_step(double theta_inertia, double mu_f, double t_e, double t_l, double omega0,
                        double t);

// Implicit-midpoint integration of the same balance with time-varying torques.
double rotor_speed_midpoint(double theta_inertia, double mu_f,
                            const std::function<double(double)>& t_e,
                            const std::function<double(double)>& t_l, double omega0, double t_end,
                            double dt);

}  // namespace mphs::mech
