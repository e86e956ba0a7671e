#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "mphs/core/integrate.hpp"
#include "mphs/core/ph_system.hpp"
#include "mphs/fd/periodic3.hpp"
#include "mphs/mech/tensors.hpp"
#include "mphs/thermal/material.hpp"

namespace mphs::coupled {

// Closure signature shared by the current-density and heat-flux laws:
// (electromotive intensity, B, velocity gradient, F, θ, ∇θ) → vector. The
// velocity-gradient argument is the reference-frame gradient ∂v/∂x, i.e. the
// same tensor that drives dF/dt.
using ConstitutiveFn =
    std::function<Eigen::Vector3d(const Eigen::Vector3d&, const Eigen::Vector3d&,
                                  const Eigen::Matrix3d&, const Eigen::Matrix3d&, double,
                                  const Eigen::Vector3d&)>;
using CellVectorFn = std::function<Eigen::Vector3d(int)>;  // cell -> vector
using CellScalarFn = std::function<double(int)>;           // cell -> scalar

// Material data of the electro-magneto-thermo-mechanical continuum: vacuum
// permittivity/permeability, Lagrangian mass density (a parameter field that
// stays constant in time), Kelvin-Voigt elasticity/viscosity, heat data
// (free energy psi0 and Fourier conductivity), and an Ohm conductivity. The
// optional closures replace the Ohm/Fourier defaults; body_force (m/s², per
// unit mass) and heat_source (W/kg) act as distributed supply ports.
struct CoupledMaterial {
  double eps0 = 1.0;  // F/m
  double mu0 = 1.0;   // H/m
  double rho = 1.0;   // kg/m³, uniform value
  Eigen::VectorXd rho_field;  // optional per-cell densities; overrides rho when sized
  mech::IsotropicTensor4 hooke;
  mech::IsotropicTensor4 viscosity;
  thermal::ThermalMaterial heat;  // psi0 (+ derivatives) and conductivity tensor
  double sigma = 0.0;             // S/m, proportionality of the default current law

  ConstitutiveFn current_density;  // optional override of J = sigma · (electromotive)
  ConstitutiveFn heat_flux;        // optional override of q = -kappa · ∇θ
  CellVectorFn body_force;         // optional specific force field
  CellScalarFn heat_source;        // optional specific heating field

  CoupledMaterial(double eps0_, double mu0_, double rho_, mech::IsotropicTensor4 hooke_,
                  mech::IsotropicTensor4 viscosity_, thermal::ThermalMaterial heat_,
                  double sigma_ = 0.0);

  double rho_at(int cell) const {
    return rho_field.size() > 0 ? rho_field[cell] : rho;
  }

  // Current density / heat flux through the configured law (hook or default).
  Eigen::Vector3d current_at(const Eigen::Vector3d& electromotive, const Eigen::Vector3d& b,
                             const Eigen::Matrix3d& gradv, const Eigen::Matrix3d& f, double theta,
                             const Eigen::Vector3d& grad_theta) const;
  Eigen::Vector3d heat_flux_at(const Eigen::Vector3d& electromotive, const Eigen::Vector3d& b,
                               const Eigen::Matrix3d& gradv, const Eigen::Matrix3d& f, double theta,
                               const Eigen::Vector3d& grad_theta) const;
};

// Per-cell fields of the coupled model: electric field E, magnetic flux
// density B, velocity v, deformation tensor F (row-major per column), and
// absolute temperature θ. Also reused as the carrier for state-shaped
// derived quantities (time-derivative rates, variational derivatives).
struct CoupledState {
  fd::Field3 E;      // V/m
  fd::Field3 B;      // T
  fd::Field3 v;      // m/s
  fd::Field9 F;      // dimensionless
  fd::Field1 theta;  // K

  int cells() const { return static_cast<int>(theta.size()); }

  static CoupledState zero(int cells);
  static CoupledState uniform(int cells, const Eigen::Vector3d& e0, const Eigen::Vector3d& b0,
                              const Eigen::Vector3d& v0, const Eigen::Matrix3d& f0, double theta0);
};

using CoupledRates = CoupledState;     // dE/dt, dB/dt, dv/dt, dF/dt, dθ/dt
using CoupledGradient = CoupledState;  // pointwise variational derivatives of H

// Flat layout used for time integration: 19 entries per cell in the order
// E(3), B(3), v(3), F(9, row-major), θ.
inline constexpr int kStatePerCell = 19;

Eigen::VectorXd pack_state(const CoupledState& s);
CoupledState unpack_state(const Eigen::VectorXd& x, int cells);

// Electromotive and magnetomotive intensities in the reference frame:
//   electromotive = (1/det F) Fᵀ (F E + v × (F B)),
//   magnetomotive = (1/det F) Fᵀ ((1/mu0) F B - eps0 v × (F E)).
struct Intensities {
  Eigen::Vector3d electromotive;  // V/m
  Eigen::Vector3d magnetomotive;  // A/m
};

Intensities intensities(const CoupledMaterial& mat, const Eigen::Vector3d& e,
                        const Eigen::Vector3d& b, const Eigen::Vector3d& v,
                        const Eigen::Matrix3d& f);

// First Piola-Kirchhoff stress of the coupled medium: Kelvin-Voigt part plus
// field dyads and the momentum-flux correction. gradv is the spatial velocity
// gradient, so the deformation-tensor rate entering the viscous part is
// gradv·F. Reduces to the purely mechanical Kelvin-Voigt stress when E=B=0.
Eigen::Matrix3d coupled_stress(const CoupledMaterial& mat, const Eigen::Vector3d& e,
                               const Eigen::Vector3d& b, const Eigen::Vector3d& v,
                               const Eigen::Matrix3d& gradv, const Eigen::Matrix3d& f);

// Total energy over the cells (electromagnetic + elastic + kinetic + thermal)
// together with the pointwise variational derivatives with respect to each
// state field. Multiplying a gradient entry by cell_volume gives the partial
// derivative of the value with respect to that cell entry.
struct HamiltonianResult {
  double value = 0.0;  // J
  CoupledGradient gradient;
};

HamiltonianResult total_hamiltonian(const CoupledMaterial& mat, const CoupledState& s,
                                    double cell_volume);

// Time-derivative fields of the governing equations on a periodic box with
// central differences (n >= 4): Ampère and Faraday laws with the intensity
// curls, momentum balance with the stress divergence and the field-momentum
// correction, dF/dt = ∂v/∂x, and the temperature equation carrying every
// exchange term so that the total energy obeys dH/dt = Σ rho (vᵀ·body_force
// + heat_source) · vol.
CoupledRates coupled_rhs(const CoupledMaterial& mat, const fd::PeriodicGrid3& grid,
                         const CoupledState& s);

// Pointwise entropy production J·(electromotive) - (1/θ) q·∇θ of the
// configured current/heat laws (W/m³); nonnegative for Ohm/Fourier closures.
double entropy_production(const CoupledMaterial& mat, const Eigen::Vector3d& electromotive,
                          const Eigen::Vector3d& b, const Eigen::Matrix3d& gradv,
                          const Eigen::Matrix3d& f, double theta,
                          const Eigen::Vector3d& grad_theta);

// Minimum entropy production over `samples` random admissible argument tuples
// (θ > 0, det F > 0); a production-compatible material never drops
// measurably below zero.
double entropy_production_floor(const CoupledMaterial& mat, int samples, std::uint64_t seed);

// Implicit-midpoint-ready port-Hamiltonian form of the coupled equations:
// diagonal state-dependent flow map, effort fields whose flow-weighted
// transpose matches the analytic energy gradient, and a right-hand side
// override built from coupled_rhs. Supply enters through the material's
// body-force/heat-source hooks (no external input ports).
struct CoupledModel {
  core::PhSystem ph;
  fd::PeriodicGrid3 grid;
  CoupledMaterial material;

  CoupledModel(const fd::PeriodicGrid3& grid_, CoupledMaterial material_)
      : grid(grid_), material(std::move(material_)) {}

  int e_index(int cell, int r) const { return kStatePerCell * cell + r; }
  int b_index(int cell, int r) const { return kStatePerCell * cell + 3 + r; }
  int v_index(int cell, int r) const { return kStatePerCell * cell + 6 + r; }
  int f_index(int cell, int entry) const { return kStatePerCell * cell + 9 + entry; }
  int theta_index(int cell) const { return kStatePerCell * cell + 18; }

  Eigen::VectorXd pack(const CoupledState& s) const { return pack_state(s); }
  CoupledState unpack(const Eigen::VectorXd& x) const { return unpack_state(x, grid.cells()); }
};

CoupledModel assemble_coupled_ph(const CoupledMaterial& mat, const fd::PeriodicGrid3& grid,
                                 double theta_ref = 1.0);

// Per-step energy-balance residuals of an implicit-midpoint trajectory:
//   residual_k = H(x_k) - H(x_{k-1}) - dt · Σ_cells rho (v_midᵀ·body_force
//                + heat_source) · vol.
// With no supply hooks this is the raw per-step energy defect of the scheme.
struct BalanceSeries {
  std::vector<double> residuals;  // J, one entry per step
  double max_abs = 0.0;
};

BalanceSeries coupled_energy_balance(const CoupledMaterial& mat, const fd::PeriodicGrid3& grid,
                                     const std::vector<Eigen::VectorXd>& states, double dt);

}  // namespace mphs::coupled
