#include <mphs/thermal/material.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace mphs::thermal {

namespace {

void check_material(const ThermalMaterial& m) {
  if (!(m.rho > 0.0)) throw InvalidArgument("density must be positive");
  if (!m.psi0) throw InvalidArgument("specific free energy hook is required");
  const double scale = std::max(1.0, m.kappa.cwiseAbs().maxCoeff());
  if ((m.kappa - m.kappa.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidArgument("conductivity tensor must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m.kappa);
  if (es.eigenvalues().minCoeff() < -1e-12 * scale)
    throw InvalidArgument("conductivity tensor must be positive semidefinite");
}

void require_positive(double theta) {
  if (!(theta > 0.0))
    throw NonPositiveTemperature("temperature " + std::to_string(theta) + " K is not positive");
}

}  // namespace

ThermalMaterial::ThermalMaterial(double rho_, ScalarFn psi0_, double kappa_scalar)
    : rho(rho_), psi0(std::move(psi0_)), kappa(kappa_scalar * Eigen::Matrix3d::Identity()) {
  check_material(*this);
}

ThermalMaterial::ThermalMaterial(double rho_, ScalarFn psi0_, ScalarFn psi0_d_, ScalarFn psi0_dd_,
                                 const Eigen::Matrix3d& kappa_)
    : rho(rho_),
      psi0(std::move(psi0_)),
      psi0_d(std::move(psi0_d_)),
      psi0_dd(std::move(psi0_dd_)),
      kappa(kappa_) {
  check_material(*this);
}

ThermalMaterial ThermalMaterial::log_heat(double rho, double c0, double kappa_scalar) {
  if (!(c0 > 0.0)) throw InvalidArgument("specific heat must be positive");
  return ThermalMaterial(
      rho, [c0](double th) { return -c0 * th * std::log(th); },
      [c0](double th) { return -c0 * (std::log(th) + 1.0); },
      [c0](double th) { return -c0 / th; }, kappa_scalar * Eigen::Matrix3d::Identity());
}

HeatCoefficients heat_coefficients(const ThermalMaterial& material, double theta) {
  require_positive(theta);
  const double h = 1e-6 * theta;

  double d1;
  if (material.psi0_d)
    d1 = material.psi0_d(theta);
  else
    d1 = (material.psi0(theta + h) - material.psi0(theta - h)) / (2.0 * h);

  double d2;
  if (material.psi0_dd)
    d2 = material.psi0_dd(theta);
  else if (material.psi0_d)
    d2 = (material.psi0_d(theta + h) - material.psi0_d(theta - h)) / (2.0 * h);
  else
    d2 = (material.psi0(theta + h) - 2.0 * material.psi0(theta) + material.psi0(theta - h)) /
         (h * h);

  return {-theta * d2, -d1};
}

double internal_energy(const ThermalMaterial& material, double theta) {
  require_positive(theta);
  double d1;
  if (material.psi0_d) {
    d1 = material.psi0_d(theta);
  } else {
    const double h = 1e-6 * theta;
    d1 = (material.psi0(theta + h) - material.psi0(theta - h)) / (2.0 * h);
  }
  return material.psi0(theta) - theta * d1;
}

}  // namespace mphs::thermal
