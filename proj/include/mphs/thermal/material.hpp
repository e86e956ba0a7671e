#pragma once

#include <Eigen/Dense>
#include <functional>

#include <mphs/errors.hpp>

namespace mphs::thermal {

// Absolute temperature must stay positive for the free-energy evaluations.
class NonPositiveTemperature : public Error {
public:
  explicit NonPositiveTemperature(const std::string& detail)
      : Error("NonPositiveTemperature", detail) {}
};

// Boundary data that does not determine a unique solution (degenerate Robin
// weights, or a steady-state query with no temperature-fixing face).
class IllPosedBC : public Error {
public:
  explicit IllPosedBC(const std::string& detail) : Error("IllPosedBC", detail) {}
};

// Lumped network whose steady-state equations are singular (no path from a
// heated node to the ambient).
class SingularNetwork : public Error {
public:
  explicit SingularNetwork(const std::string& detail) : Error("SingularNetwork", detail) {}
};

// Rigid heat conductor described by a specific free energy psi0(θ) (J/kg) and
// a symmetric positive-semidefinite conductivity tensor (W/(m·K)). The
// derivative hooks are optional; central differences with step 1e-6·θ are
// used for whichever is missing.
struct ThermalMaterial {
  using ScalarFn = std::function<double(double)>;

  double rho = 1.0;  // kg/m³
  ScalarFn psi0;     // specific free energy
  ScalarFn psi0_d;   // dpsi0/dθ, optional
  ScalarFn psi0_dd;  // d²psi0/dθ², optional
  Eigen::Matrix3d kappa = Eigen::Matrix3d::Identity();

  ThermalMaterial(double rho_, ScalarFn psi0_, double kappa_scalar);
  ThermalMaterial(double rho_, ScalarFn psi0_, ScalarFn psi0_d_, ScalarFn psi0_dd_,
                  const Eigen::Matrix3d& kappa_);

  // Classic constant-specific-heat material psi0(θ) = -c0 θ ln θ with
  // analytic derivatives and isotropic conductivity.
  static ThermalMaterial log_heat(double rho, double c0, double kappa_scalar);
};

struct HeatCoefficients {
  double c;  // specific heat at constant strain, J/(kg·K)
  double s;  // specific entropy, J/(kg·K)
};

// c(θ) = -θ psi0''(θ) and s(θ) = -psi0'(θ), analytic where derivative hooks
// are supplied and central finite differences (step 1e-6·θ) otherwise.
HeatCoefficients heat_coefficients(const ThermalMaterial& material, double theta);

// Specific internal energy u(θ) = psi0(θ) - θ psi0'(θ) (J/kg), so that
// du/dθ = c(θ).
double internal_energy(const ThermalMaterial& material, double theta);

}  // namespace mphs::thermal
