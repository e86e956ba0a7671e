#pragma once

#include <Eigen/Dense>
#include <vector>

#include "mphs/em/types.hpp"

namespace mphs::em {

// Out-of-plane vector-potential (A_3) eddy-current models on the node lattice
// of a 2D grid. The outer boundary always carries the homogeneous Dirichlet
// condition A_3 = 0; boundary rows of the transient RHS are forced to zero and
// boundary unknowns of the harmonic solve are pinned.

// dA_3/dt = [ ∇·((1/μ)∇A_3) ]/σ - g nodewise, where g is the source ∂Φ/∂x_3.
// Throws ZeroConductivity where the division hits σ = 0 on an interior node.
Eigen::VectorXd eddy_transient_rhs(const Eigen::VectorXd& a3_node, const EmGrid2D& grid,
                                   const EmMaterial& material,
                                   const Eigen::VectorXd& grad_phi_node);

// Time-harmonic solve of [-∇·((1/μ)∇·) + jω(σ + jωε)] A_3 = -(σ + jωε) g.
// At ω = 0 this reduces to the magnetostatic balance ∇·((1/μ)∇A_3) = σ g.
Eigen::VectorXcd eddy_harmonic_solve(const EmGrid2D& grid, const EmMaterial& material,
                                     double omega, const Eigen::VectorXcd& grad_phi_node);

// Total current I_T = Σ_masked cells (σ + jωε)(-jω A_3 - g) · cell area, with
// the node fields averaged to cell midpoints.
Complex total_current(const EmGrid2D& grid, const EmMaterial& material, double omega,
                      const Eigen::VectorXcd& a3_node, const Eigen::VectorXcd& grad_phi_node,
                      const std::vector<bool>& cell_mask);

}  // namespace mphs::em
