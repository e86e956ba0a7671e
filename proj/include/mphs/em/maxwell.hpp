#pragma once

#include <Eigen/Dense>

#include "mphs/core/ph_system.hpp"
#include "mphs/em/types.hpp"
#include "mphs/fd/periodic3.hpp"

namespace mphs::em {

// 1D transverse wave (E_z(x), B_y(x)) on a staggered grid: E at nodes, B at
// cell midpoints. With PEC ends the boundary E-nodes are eliminated from the
// state and reappear as two input ports (prescribed tangential E, zero for a
// true PEC wall); with periodic ends all n node values are kept and there are
// no ports.
struct MaxwellModel1D {
  core::PhSystem ph;
  int n_cells = 0;
  double h = 0.0;
  bool periodic = false;
  Eigen::ArrayXd eps_node;  // permittivity at E locations
  Eigen::ArrayXd mu_cell;   // permeability at B locations

  int n_e() const { return periodic ? n_cells : n_cells - 1; }
  int n_b() const { return n_cells; }

  Eigen::VectorXd pack(const Eigen::VectorXd& e_field, const Eigen::VectorXd& b_field) const;
  Eigen::VectorXd pack(const EmState& s) const { return pack(s.E, s.B); }
  Eigen::VectorXd e_part(const Eigen::VectorXd& state) const { return state.head(n_e()); }
  Eigen::VectorXd b_part(const Eigen::VectorXd& state) const { return state.tail(n_b()); }
};

// 2D TE mode (E_x, E_y, B_z) on a Yee-staggered rectangular grid:
//   E_x at (i+1/2, j), E_y at (i, j+1/2), B_z at (i+1/2, j+1/2).
// Periodic keeps every location; PEC drops the tangential-E locations on the
// walls (E_x on the top/bottom rows, E_y on the left/right columns).
struct MaxwellModel2D {
  core::PhSystem ph;
  int nx = 0, ny = 0;
  double hx = 0.0, hy = 0.0;
  bool periodic = false;
  double eps = 0.0, mu = 0.0;  // uniform coefficients

  int n_ex() const { return periodic ? nx * ny : nx * (ny - 1); }
  int n_ey() const { return periodic ? nx * ny : (nx - 1) * ny; }
  int n_bz() const { return nx * ny; }

  // Flat state indices; -1 for locations eliminated by a PEC wall.
  int ex_index(int i, int j) const;
  int ey_index(int i, int j) const;
  int bz_index(int i, int j) const;

  Eigen::VectorXd pack(const Eigen::VectorXd& ex, const Eigen::VectorXd& ey,
                       const Eigen::VectorXd& bz) const;
  Eigen::VectorXd pack(const EmState& s) const {
    return pack(s.E.head(n_ex()), s.E.tail(n_ey()), s.B);
  }

  // Discrete Gauss-law monitors. In the TE plane B has only the out-of-plane
  // component, so its in-plane divergence vanishes identically; the electric
  // monitor div(eps E) at grid corners is the nontrivial conserved charge
  // density (constant in time whenever sigma = 0).
  Eigen::VectorXd div_b(const Eigen::VectorXd& state) const;
  Eigen::VectorXd div_d(const Eigen::VectorXd& state) const;
};

MaxwellModel1D assemble_maxwell_ph(const EmGrid1D& grid, const EmMaterial& material);
MaxwellModel2D assemble_maxwell_ph(const EmGrid2D& grid, const EmMaterial& material);

// Surface quadrature of the boundary energy outflow ∮ (1/mu) (B x E)ᵀ ν dS.
struct BoundaryFlow {
  double value = 0.0;
  bool periodic = false;  // flux vanishes by construction on periodic domains
};

BoundaryFlow poynting_boundary_flow(const Eigen::VectorXd& state, const MaxwellModel1D& model);
BoundaryFlow poynting_boundary_flow(const Eigen::VectorXd& state, const MaxwellModel2D& model);

// Two-point end quadrature for prescribed ("leaky") boundary fields in 1D:
// (1/mu) (B x E)ᵀ ν evaluated at the right end (ν = +x) plus the left end
// (ν = -x), for fields E = E_z, B = B_y.
double poynting_flow_prescribed_1d(double inv_mu_left, double e_left, double b_left,
                                   double inv_mu_right, double e_right, double b_right);

// Collocated 3D periodic Maxwell right-hand side (uniform material):
//   dE/dt = ( curl(B)/mu - sigma E ) / eps,   dB/dt = -curl(E).
// Shares the central-difference stencils in fd::PeriodicGrid3 so that other
// field models reduce to it exactly in the rigid non-relativistic limit.
struct MaxwellRhs3 {
  fd::Field3 dE, dB;
};

MaxwellRhs3 maxwell_rhs_3d_periodic(const fd::PeriodicGrid3& grid, double eps, double mu,
                                    double sigma, const fd::Field3& E, const fd::Field3& B);

}  // namespace mphs::em
