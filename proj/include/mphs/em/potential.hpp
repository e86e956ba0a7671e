#pragma once

#include <Eigen/Dense>

#include "mphs/em/types.hpp"

namespace mphs::em {

// Electrostatics on the node lattice: ∇·(ε ∇Φ) = -ρ_c with Dirichlet values
// taken from the grid's boundary specs (a PEC face acts as a grounded or
// biased conductor, i.e. Dirichlet with the spec's value) and zero-flux
// Neumann faces. Derived fields: E = -∇Φ (centered differences, one-sided at
// the boundary), J = σE, D = εE, all node-valued.
struct PotentialSolution1D {
  Eigen::VectorXd phi, E, J, D;
};

struct PotentialSolution2D {
  Eigen::VectorXd phi;
  Eigen::Matrix2Xd E, J, D;  // one column per node, components (x, y)
};

// rho_node: charge density per node, or a single entry broadcast everywhere.
PotentialSolution1D solve_potential(const EmGrid1D& grid, const EmMaterial& material,
                                    const Eigen::VectorXd& rho_node);
PotentialSolution2D solve_potential(const EmGrid2D& grid, const EmMaterial& material,
                                    const Eigen::VectorXd& rho_node);

}  // namespace mphs::em
