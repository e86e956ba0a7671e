#include "mphs/coupled/model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "mphs/coupled/transforms.hpp"

namespace mphs::coupled {

using Eigen::Matrix3d;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

double require_positive_det(const Matrix3d& f, int cell = -1) {
  const double det = f.determinant();
  if (!(det > 0.0)) {
    if (cell >= 0) throw mech::NonPositiveJacobianDet(det, cell);
    throw mech::NonPositiveJacobianDet(det);
  }
  return det;
}

void require_positive_theta(double theta, int cell = -1) {
  if (theta > 0.0) return;
  std::string where = cell >= 0 ? " at cell " + std::to_string(cell) : "";
  throw thermal::NonPositiveTemperature("temperature" + where + " is " + std::to_string(theta));
}

double heat_capacity_at(const CoupledMaterial& mat, double theta, int cell) {
  const double c = thermal::heat_coefficients(mat.heat, theta).c;
  if (!(c > 0.0))
    throw InvalidArgument("specific heat at cell " + std::to_string(cell) + " is " +
                          std::to_string(c) + " <= 0");
  return c;
}

// Electromagnetic energy density (1/(2 det F))(eps0 |FE|^2 + |FB|^2/mu0) and
// its derivative with respect to F. The derivative combines the dyads
// (eps0 (FE)Eᵀ + (FB)Bᵀ/mu0)/det with the determinant rule, which
// contributes -density · F⁻ᵀ.
struct EmEnergy {
  double density = 0.0;
  Matrix3d d_f = Matrix3d::Zero();
};

EmEnergy em_energy(const CoupledMaterial& mat, const Vector3d& e, const Vector3d& b,
                   const Matrix3d& f, double det) {
  const Vector3d fe = f * e;
  const Vector3d fb = f * b;
  EmEnergy out;
  out.density = 0.5 * (mat.eps0 * fe.squaredNorm() + fb.squaredNorm() / mat.mu0) / det;
  out.d_f = (mat.eps0 * fe * e.transpose() + fb * b.transpose() / mat.mu0) / det -
            out.density * f.inverse().transpose();
  return out;
}

// Stress with the deformation-tensor rate given directly (the public
// coupled_stress converts its spatial velocity-gradient argument first).
Matrix3d stress_from_rate(const CoupledMaterial& mat, const Vector3d& e, const Vector3d& b,
                          const Vector3d& v, const Matrix3d& f_rate, const Matrix3d& f,
                          double det) {
  const Matrix3d strain = f.transpose() * f - Matrix3d::Identity();
  const Matrix3d strain_rate = f_rate.transpose() * f + f.transpose() * f_rate;
  Matrix3d p = 0.5 * f * (mat.hooke.apply(strain) + mat.viscosity.apply(strain_rate));

  const Vector3d fe = f * e;
  const Vector3d fb = f * b;
  p += f * (fb * b.transpose() / mat.mu0 + mat.eps0 * fe * e.transpose()) / det;

  const double field_energy = mat.eps0 * fe.squaredNorm() + fb.squaredNorm() / mat.mu0;
  p += ((mat.eps0 * fe.cross(fb)) * v.transpose() -
        0.5 * field_energy * Matrix3d::Identity()) *
       f.inverse().transpose() / det;
  return p;
}

void check_field_sizes(const CoupledState& s, int cells) {
  if (s.E.cols() != cells || s.B.cols() != cells || s.v.cols() != cells || s.F.cols() != cells ||
      s.theta.size() != cells)
    throw InvalidArgument("state fields must all hold " + std::to_string(cells) + " cells");
}

void check_density_field(const CoupledMaterial& mat, int cells) {
  if (mat.rho_field.size() == 0) return;
  if (mat.rho_field.size() != cells)
    throw InvalidArgument("per-cell density field must hold " + std::to_string(cells) +
                          " entries");
  if (!(mat.rho_field.minCoeff() > 0.0)) throw InvalidArgument("densities must be positive");
}

}  // namespace

CoupledMaterial::CoupledMaterial(double eps0_, double mu0_, double rho_,
                                 mech::IsotropicTensor4 hooke_, mech::IsotropicTensor4 viscosity_,
                                 thermal::ThermalMaterial heat_, double sigma_)
    : eps0(eps0_),
      mu0(mu0_),
      rho(rho_),
      hooke(hooke_),
      viscosity(viscosity_),
      heat(std::move(heat_)),
      sigma(sigma_) {
  if (!(eps0 > 0.0) || !(mu0 > 0.0))
    throw InvalidArgument("vacuum permittivity and permeability must be positive");
  if (!(rho > 0.0)) throw InvalidArgument("density must be positive");
  if (sigma < 0.0) throw InvalidArgument("conductivity must be >= 0");
}

Vector3d CoupledMaterial::current_at(const Vector3d& electromotive, const Vector3d& b,
                                     const Matrix3d& gradv, const Matrix3d& f, double theta,
                                     const Vector3d& grad_theta) const {
  if (current_density) return current_density(electromotive, b, gradv, f, theta, grad_theta);
  return sigma * electromotive;
}

Vector3d CoupledMaterial::heat_flux_at(const Vector3d& electromotive, const Vector3d& b,
                                       const Matrix3d& gradv, const Matrix3d& f, double theta,
                                       const Vector3d& grad_theta) const {
  if (heat_flux) return heat_flux(electromotive, b, gradv, f, theta, grad_theta);
  return -heat.kappa * grad_theta;
}

CoupledState CoupledState::zero(int cells) {
  CoupledState s;
  s.E = fd::Field3::Zero(3, cells);
  s.B = fd::Field3::Zero(3, cells);
  s.v = fd::Field3::Zero(3, cells);
  s.F = fd::Field9::Zero(9, cells);
  s.theta = fd::Field1::Zero(cells);
  return s;
}

CoupledState CoupledState::uniform(int cells, const Vector3d& e0, const Vector3d& b0,
                                   const Vector3d& v0, const Matrix3d& f0, double theta0) {
  CoupledState s = zero(cells);
  for (int c = 0; c < cells; ++c) {
    s.E.col(c) = e0;
    s.B.col(c) = b0;
    s.v.col(c) = v0;
    fd::pack9(s.F, c, f0);
    s.theta[c] = theta0;
  }
  return s;
}

VectorXd pack_state(const CoupledState& s) {
  const int nc = s.cells();
  check_field_sizes(s, nc);
  VectorXd x(kStatePerCell * nc);
  for (int c = 0; c < nc; ++c) {
    const int base = kStatePerCell * c;
    x.segment<3>(base) = s.E.col(c);
    x.segment<3>(base + 3) = s.B.col(c);
    x.segment<3>(base + 6) = s.v.col(c);
    x.segment<9>(base + 9) = s.F.col(c);
    x[base + 18] = s.theta[c];
  }
  return x;
}

CoupledState unpack_state(const VectorXd& x, int cells) {
  if (x.size() != kStatePerCell * cells)
    throw InvalidArgument("state vector has " + std::to_string(x.size()) + " entries, expected " +
                          std::to_string(kStatePerCell * cells));
  CoupledState s = CoupledState::zero(cells);
  for (int c = 0; c < cells; ++c) {
    const int base = kStatePerCell * c;
    s.E.col(c) = x.segment<3>(base);
    s.B.col(c) = x.segment<3>(base + 3);
    s.v.col(c) = x.segment<3>(base + 6);
    s.F.col(c) = x.segment<9>(base + 9);
    s.theta[c] = x[base + 18];
  }
  return s;
}

Intensities intensities(const CoupledMaterial& mat, const Vector3d& e, const Vector3d& b,
                        const Vector3d& v, const Matrix3d& f) {
  const double det = require_positive_det(f);
  const Vector3d fe = f * e;
  const Vector3d fb = f * b;
  Intensities out;
  out.electromotive = f.transpose() * (fe + v.cross(fb)) / det;
  out.magnetomotive = f.transpose() * (fb / mat.mu0 - mat.eps0 * v.cross(fe)) / det;
  return out;
}

Matrix3d coupled_stress(const CoupledMaterial& mat, const Vector3d& e, const Vector3d& b,
                        const Vector3d& v, const Matrix3d& gradv, const Matrix3d& f) {
  const double det = require_positive_det(f);
  return stress_from_rate(mat, e, b, v, gradv * f, f, det);
}

HamiltonianResult total_hamiltonian(const CoupledMaterial& mat, const CoupledState& s,
                                    double cell_volume) {
  const int nc = s.cells();
  check_field_sizes(s, nc);
  check_density_field(mat, nc);
  if (!(cell_volume > 0.0)) throw InvalidArgument("cell volume must be positive");

  const mech::MechMaterial mech_mat(mat.rho, mat.hooke, mat.viscosity);
  HamiltonianResult out;
  out.gradient = CoupledState::zero(nc);

  for (int c = 0; c < nc; ++c) {
    const Matrix3d f = fd::unpack9(s.F, c);
    const double det = require_positive_det(f, c);
    const double theta = s.theta[c];
    require_positive_theta(theta, c);
    const double rho = mat.rho_at(c);
    const Vector3d e = s.E.col(c);
    const Vector3d b = s.B.col(c);
    const Vector3d v = s.v.col(c);

    const EmEnergy em = em_energy(mat, e, b, f, det);
    const auto elastic = mech::elastic_energy_and_gradient(mech_mat, f);
    const double internal = thermal::internal_energy(mat.heat, theta);
    const double c_heat = heat_capacity_at(mat, theta, c);

    out.value += cell_volume *
                 (em.density + elastic.first + rho * (internal + 0.5 * v.squaredNorm()));

    out.gradient.E.col(c) = mat.eps0 * (f.transpose() * (f * e)) / det;
    out.gradient.B.col(c) = f.transpose() * (f * b) / (mat.mu0 * det);
    out.gradient.v.col(c) = rho * v;
    fd::pack9(out.gradient.F, c, em.d_f + elastic.second);
    out.gradient.theta[c] = rho * c_heat;
  }
  return out;
}

CoupledRates coupled_rhs(const CoupledMaterial& mat, const fd::PeriodicGrid3& grid,
                         const CoupledState& s) {
  if (grid.n < 4) throw InvalidArgument("periodic box needs at least 4 cells per axis");
  if (!(grid.h > 0.0)) throw InvalidArgument("cell size must be positive");
  const int nc = grid.cells();
  check_field_sizes(s, nc);
  check_density_field(mat, nc);

  const mech::MechMaterial mech_mat(mat.rho, mat.hooke, mat.viscosity);

  // Pointwise pass: intensities, constitutive fluxes, stress, the energy-flux
  // vector Pᵀv - q - (electromotive)×(magnetomotive), and the data the
  // stencil pass needs again.
  fd::Field3 emot(3, nc), mmot(3, nc), flux(3, nc);
  fd::Field9 stress(9, nc);
  std::vector<Vector3d> currents(nc);
  std::vector<Matrix3d> fs(nc), gradvs(nc), dh_df(nc);
  std::vector<double> dets(nc), c_heats(nc);

  for (int c = 0; c < nc; ++c) {
    const Matrix3d f = fd::unpack9(s.F, c);
    const double det = require_positive_det(f, c);
    const double theta = s.theta[c];
    require_positive_theta(theta, c);
    const Vector3d e = s.E.col(c);
    const Vector3d b = s.B.col(c);
    const Vector3d v = s.v.col(c);
    const Matrix3d gradv = grid.grad_vector(s.v, c);
    const Vector3d grad_theta = grid.grad_scalar(s.theta, c);

    const Intensities in = intensities(mat, e, b, v, f);
    const Vector3d j = mat.current_at(in.electromotive, b, gradv, f, theta, grad_theta);
    const Vector3d q = mat.heat_flux_at(in.electromotive, b, gradv, f, theta, grad_theta);
    const Matrix3d p = stress_from_rate(mat, e, b, v, gradv, f, det);

    emot.col(c) = in.electromotive;
    mmot.col(c) = in.magnetomotive;
    fd::pack9(stress, c, p);
    flux.col(c) = p.transpose() * v - q - in.electromotive.cross(in.magnetomotive);
    currents[c] = j;
    fs[c] = f;
    gradvs[c] = gradv;
    dets[c] = det;
    c_heats[c] = heat_capacity_at(mat, theta, c);
    dh_df[c] = em_energy(mat, e, b, f, det).d_f +
               mech::elastic_energy_and_gradient(mech_mat, f).second;
  }

  // Stencil pass: assemble the five time derivatives.
  CoupledRates out = CoupledState::zero(nc);
  for (int c = 0; c < nc; ++c) {
    const Matrix3d& f = fs[c];
    const Vector3d e = s.E.col(c);
    const Vector3d b = s.B.col(c);
    const Vector3d v = s.v.col(c);
    const double rho = mat.rho_at(c);

    const Vector3d f1 = grid.curl_vector(mmot, c) - currents[c];
    const Vector3d f2 = -grid.curl_vector(emot, c);

    const Vector3d body = mat.body_force ? mat.body_force(c) : Vector3d::Zero();
    const double source = mat.heat_source ? mat.heat_source(c) : 0.0;

    const Matrix3d f_inv_t = f.inverse().transpose();
    const Vector3d f3 = grid.div_matrix(stress, c) + rho * body +
                        f_inv_t * (mat.eps0 * (gradvs[c].transpose() * (f_inv_t * e.cross(b)) -
                                               e.cross(f2)) -
                                   f1.cross(b));

    out.E.col(c) = f1 / mat.eps0;
    out.B.col(c) = f2;
    out.v.col(c) = f3 / rho;
    fd::pack9(out.F, c, gradvs[c]);

    const Vector3d fe = f * e;
    const Vector3d fb = f * b;
    const double exchange = (fe.dot(f * f1) + fb.dot(f * f2) / mat.mu0) / dets[c];
    const double num = grid.div_vector(flux, c) + rho * (v.dot(body) + source) -
                       dh_df[c].cwiseProduct(gradvs[c]).sum() - v.dot(f3) - exchange;
    out.theta[c] = num / (rho * c_heats[c]);
  }
  return out;
}

double entropy_production(const CoupledMaterial& mat, const Vector3d& electromotive,
                          const Vector3d& b, const Matrix3d& gradv, const Matrix3d& f,
                          double theta, const Vector3d& grad_theta) {
  require_positive_theta(theta);
  require_positive_det(f);
  const Vector3d j = mat.current_at(electromotive, b, gradv, f, theta, grad_theta);
  const Vector3d q = mat.heat_flux_at(electromotive, b, gradv, f, theta, grad_theta);
  return j.dot(electromotive) - q.dot(grad_theta) / theta;
}

double entropy_production_floor(const CoupledMaterial& mat, int samples, std::uint64_t seed) {
  if (samples <= 0) throw InvalidArgument("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  auto vec3 = [&] { return Vector3d(dist(rng), dist(rng), dist(rng)); };
  auto mat3 = [&] {
    Matrix3d m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = dist(rng);
    return m;
  };

  double floor = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    Matrix3d f;
    do {
      f = Matrix3d::Identity() + 0.3 * mat3();
    } while (f.determinant() <= 0.1);
    const double theta = 0.2 + std::abs(dist(rng));
    floor = std::min(floor,
                     entropy_production(mat, vec3(), vec3(), mat3(), f, theta, vec3()));
  }
  return floor;
}

CoupledModel assemble_coupled_ph(const CoupledMaterial& mat, const fd::PeriodicGrid3& grid,
                                 double theta_ref) {
  if (grid.n < 4) throw InvalidArgument("periodic box needs at least 4 cells per axis");
  if (!(grid.h > 0.0)) throw InvalidArgument("cell size must be positive");
  require_positive_theta(theta_ref);
  const int nc = grid.cells();
  check_density_field(mat, nc);

  CoupledModel model(grid, mat);

  const int n = kStatePerCell * nc;
  const double vol = grid.cell_volume();
  const CoupledMaterial m = mat;  // capture copy
  const fd::PeriodicGrid3 g = grid;

  core::PhSystem sys;
  sys.n_state = n;
  sys.n_input = 0;

  sys.hamiltonian = [m, vol, nc](const VectorXd& x) {
    return total_hamiltonian(m, unpack_state(x, nc), vol).value;
  };

  // Cell-volume-scaled energy gradient; the identity flow map makes this the
  // effort as well, so the builder's compatibility check is exact.
  auto grad = [m, vol, nc](const VectorXd& x) -> VectorXd {
    const CoupledGradient gr = total_hamiltonian(m, unpack_state(x, nc), vol).gradient;
    return vol * pack_state(gr);
  };
  sys.grad_H = grad;
  sys.effort = grad;

  sys.rhs = [m, g, nc](const VectorXd& x, const VectorXd&) -> VectorXd {
    return pack_state(coupled_rhs(m, g, unpack_state(x, nc)));
  };

  sys.supplied_power = [m, g, vol, nc](const VectorXd& x, const VectorXd&) {
    if (!m.body_force && !m.heat_source) return 0.0;
    const CoupledState s = unpack_state(x, nc);
    double power = 0.0;
    for (int c = 0; c < nc; ++c) {
      const Vector3d body = m.body_force ? m.body_force(c) : Vector3d::Zero();
      const double source = m.heat_source ? m.heat_source(c) : 0.0;
      power += m.rho_at(c) * (s.v.col(c).dot(body) + source) * vol;
    }
    return power;
  };

  // Admissible validation states: rest plus a smooth low-amplitude excitation.
  const CoupledState rest =
      CoupledState::uniform(nc, Vector3d::Zero(), Vector3d::Zero(), Vector3d::Zero(),
                            Matrix3d::Identity(), theta_ref);
  CoupledState bent = rest;
  for (int c = 0; c < nc; ++c) {
    for (int r = 0; r < 3; ++r) {
      bent.E(r, c) = 0.05 * std::sin(1.0 + 0.7 * c + r);
      bent.B(r, c) = 0.05 * std::cos(2.0 + 0.4 * c + r);
      bent.v(r, c) = 0.03 * std::sin(3.0 + 0.5 * c + 2 * r);
    }
    Matrix3d fp = Matrix3d::Identity();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) fp(i, j) += 0.02 * std::cos(1.0 + c + 3 * i + j);
    fd::pack9(bent.F, c, fp);
    bent.theta[c] = theta_ref * (1.0 + 0.1 * std::sin(0.9 * c));
  }
  sys.validation_states = {pack_state(rest), pack_state(bent)};

  model.ph = core::build_ph_system(std::move(sys));
  return model;
}

BalanceSeries coupled_energy_balance(const CoupledMaterial& mat, const fd::PeriodicGrid3& grid,
                                     const std::vector<VectorXd>& states, double dt) {
  if (states.size() < 2) throw InvalidArgument("trajectory needs at least two states");
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const int nc = grid.cells();
  const double vol = grid.cell_volume();

  BalanceSeries out;
  out.residuals.reserve(states.size() - 1);

  double h_prev = total_hamiltonian(mat, unpack_state(states[0], nc), vol).value;
  for (std::size_t k = 1; k < states.size(); ++k) {
    const double h_next = total_hamiltonian(mat, unpack_state(states[k], nc), vol).value;
    double supply = 0.0;
    if (mat.body_force || mat.heat_source) {
      const CoupledState mid = unpack_state((0.5 * (states[k - 1] + states[k])).eval(), nc);
      for (int c = 0; c < nc; ++c) {
        const Vector3d body = mat.body_force ? mat.body_force(c) : Vector3d::Zero();
        const double source = mat.heat_source ? mat.heat_source(c) : 0.0;
        supply += mat.rho_at(c) * (mid.v.col(c).dot(body) + source) * vol;
      }
    }
    const double residual = h_next - h_prev - dt * supply;
    out.residuals.push_back(residual);
    out.max_abs = std::max(out.max_abs, std::abs(residual));
    h_prev = h_next;
  }
  return out;
}

}  // namespace mphs::coupled
