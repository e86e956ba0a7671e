#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include <mphs/core/ph_system.hpp>
#include <mphs/thermal/material.hpp>

namespace mphs::thermal {

// Boundary condition in the unified affine form
//
//     w1 · (q·ν) + w2 · θ = gamma        on the face,
//
// where q·ν is the outward conductive heat flux (W/m²) and θ the face
// temperature. Dirichlet is (0, 1, θ_b), a prescribed outward flux is
// (1, 0, q_b), and convective exchange q·ν = α(θ - θ_amb) is
// (1, -α, -α·θ_amb).
struct ThermalBC {
  enum class Kind { Dirichlet, Neumann, Robin };

  Kind kind = Kind::Neumann;
  double w1 = 1.0;
  double w2 = 0.0;
  double gamma = 0.0;

  static ThermalBC dirichlet(double theta_b) { return {Kind::Dirichlet, 0.0, 1.0, theta_b}; }
  // Prescribed outward conductive flux q·ν = q_b; positive q_b cools the body.
  static ThermalBC neumann(double q_b) { return {Kind::Neumann, 1.0, 0.0, q_b}; }
  static ThermalBC insulated() { return neumann(0.0); }
  static ThermalBC robin(double w1, double w2, double gamma);
  static ThermalBC convective(double alpha, double theta_amb) {
    return robin(1.0, -alpha, -alpha * theta_amb);
  }

  bool fixes_temperature() const { return w2 != 0.0; }
};

struct HeatGrid1D {
  int n_cells = 0;
  double length = 0.0;
  ThermalBC left, right;

  double h() const { return length / n_cells; }
};

struct HeatGrid2D {
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
  ThermalBC left, right, bottom, top;

  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  int n_cells() const { return nx * ny; }
  int cell(int i, int j) const { return i + nx * j; }
};

// Conductive face between cells a and b: flux into a is coeff · (θ_b - θ_a),
// coeff = κ · area / distance (W/K).
struct InteriorFace {
  int a, b;
  double coeff;
};

// Boundary face with the ghost value eliminated through the affine boundary
// condition: outward flux q·ν(θ_cell) = q0 + q_theta · θ_cell (W/m²).
struct BoundaryFace {
  int cell;
  double q0, q_theta, area;
};

namespace detail {

struct HeatAssembly {
  core::PhSystem ph;
  std::vector<InteriorFace> interior;
  std::vector<BoundaryFace> boundary;
  Eigen::VectorXd source_density;  // volumetric heating per cell, W/m³
  double cell_volume = 0.0;
  double source_power_total = 0.0;

  // Net conductive heat inflow through all boundary faces at the given cell
  // temperatures (W).
  double boundary_inflow(const Eigen::VectorXd& theta) const;

  // Temperatures solving 0 = diffusion + sources + boundary exchange. The
  // right-hand side is affine in θ, so this is a single dense solve. Throws
  // IllPosedBC when no boundary condition pins the temperature level.
  Eigen::VectorXd steady_state() const;
};

}  // namespace detail

// Finite-volume heat conduction on a 1D interval in port-Hamiltonian form.
// State: cell temperatures. Hamiltonian: total internal energy
// Σ ρ u(θ_i) · vol. Flow map: diag(ρ c(θ_i) vol), effort ≡ 1, and a
// temperature-dependent skew structure whose action on the unit effort
// reproduces the interior fluxes (so total energy is changed only by sources
// and boundary exchange).
struct HeatModel1D : detail::HeatAssembly {
  int n_cells = 0;
  double h = 0.0, length = 0.0;
  ThermalMaterial material;

  explicit HeatModel1D(ThermalMaterial m) : material(std::move(m)) {}

  double cell_center(int i) const { return (i + 0.5) * h; }
  double source_power() const { return source_power_total; }
};

struct HeatModel2D : detail::HeatAssembly {
  int nx = 0, ny = 0;
  double hx = 0.0, hy = 0.0;
  ThermalMaterial material;

  explicit HeatModel2D(ThermalMaterial m) : material(std::move(m)) {}

  int cell(int i, int j) const { return i + nx * j; }
  double cell_center_x(int i) const { return (i + 0.5) * hx; }
  double cell_center_y(int j) const { return (j + 0.5) * hy; }
  double source_power() const { return source_power_total; }
};

using Field1D = std::function<double(double)>;
using Field2D = std::function<double(double, double)>;

// Assembles the conduction system. `viscous_heating` is a volumetric source
// (W/m³) and `heat_supply` a specific source r (W/kg, entering as ρr); both
// are optional and sampled at cell centers. `theta_ref` scales the
// temperature samples used for the structure validation (the operating range
// is roughly [0.7, 2.2]·theta_ref).
HeatModel1D assemble_heat_ph(const HeatGrid1D& grid, const ThermalMaterial& material,
                             const Field1D& viscous_heating = {}, const Field1D& heat_supply = {},
                             double theta_ref = 1.0);

HeatModel2D assemble_heat_ph(const HeatGrid2D& grid, const ThermalMaterial& material,
                             const Field2D& viscous_heating = {}, const Field2D& heat_supply = {},
                             double theta_ref = 1.0);

}  // namespace mphs::thermal
