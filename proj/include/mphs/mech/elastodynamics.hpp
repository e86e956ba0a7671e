#pragma once

#include <Eigen/Dense>

#include "mphs/core/ph_system.hpp"
#include "mphs/fd/periodic3.hpp"
#include "mphs/mech/tensors.hpp"

namespace mphs::mech {

// Velocity / deformation-tensor pair on a cell-collocated 3D grid.
struct MechState {
  fd::Field3 v;
  fd::Field9 F;
};

// Longitudinal motion of a 1D bar on a staggered grid: velocity at the n+1
// nodes (including both ends), axial stretch f (the (1,1) entry of
// F = diag(f, 1, 1)) at the n cells. The ends are traction ports: u = 0 means
// free ends, nonzero u prescribes the boundary traction. With
// body_force_ports the input vector grows by one specific-force entry per
// node.
struct Elastodynamics1D {
  core::PhSystem ph;
  int n_cells = 0;
  double h = 0.0;
  MechMaterial material{1.0, {}, {}};
  bool body_force_ports = false;

  int n_v() const { return n_cells + 1; }
  double node_volume(int i) const { return (i == 0 || i == n_cells) ? 0.5 * h : h; }

  Eigen::VectorXd pack(const Eigen::VectorXd& v_nodes, const Eigen::VectorXd& f_cells) const;
  Eigen::VectorXd v_part(const Eigen::VectorXd& state) const { return state.head(n_v()); }
  Eigen::VectorXd f_part(const Eigen::VectorXd& state) const { return state.tail(n_cells); }

  // Elastic axial stress P_11 at stretch f.
  double axial_stress(double f) const;
};

Elastodynamics1D assemble_elastodynamics_ph(const MechMaterial& material, int n_cells,
                                            double length, bool body_force_ports = false);

// Kelvin-Voigt elastodynamics on a periodic n^3 box with collocated central
// differences; state stacks all cell velocities (3 per cell) before all cell
// deformation tensors (9 per cell, row-major).
struct Elastodynamics3D {
  core::PhSystem ph;
  fd::PeriodicGrid3 grid;
  MechMaterial material{1.0, {}, {}};

  int v_index(int cell, int comp) const { return 3 * cell + comp; }
  int f_index(int cell, int entry) const { return 3 * grid.cells() + 9 * cell + entry; }

  Eigen::VectorXd pack(const MechState& s) const;
  MechState unpack(const Eigen::VectorXd& state) const;

  // (dv/dt, dF/dt) through the same operators as the pH right-hand side.
  MechState rate(const Eigen::VectorXd& state) const;
};

Elastodynamics3D assemble_elastodynamics_ph(const MechMaterial& material,
                                            const fd::PeriodicGrid3& grid);

}  // namespace mphs::mech
