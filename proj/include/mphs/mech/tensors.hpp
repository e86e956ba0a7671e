#pragma once

#include <Eigen/Dense>
#include <utility>

#include "mphs/errors.hpp"

namespace mphs::mech {

class NonPositiveJacobianDet : public Error {
public:
  explicit NonPositiveJacobianDet(double det)
      : Error("NonPositiveJacobianDet",
              "deformation tensor has det " + std::to_string(det) + " <= 0") {}
  NonPositiveJacobianDet(double det, int cell)
      : Error("NonPositiveJacobianDet", "deformation tensor at cell " + std::to_string(cell) +
                                            " has det " + std::to_string(det) + " <= 0") {}
};

class SingularMass : public Error {
public:
  explicit SingularMass(const std::string& detail) : Error("SingularMass", detail) {}
};

class UnsupportedDomain : public Error {
public:
  explicit UnsupportedDomain(const std::string& detail) : Error("UnsupportedDomain", detail) {}
};

// Isotropic fourth-order tensor acting as T A = c_trace tr(A) I + 2 c_dev A.
// Elasticity (Hooke) uses the Lamé pair (λ1, λ2); viscosity uses the pair
// (ζ1, ζ2) mapped so that the deviatoric/volumetric split matches:
// c_trace = ζ1 - (2/3) ζ2, c_dev = ζ2.
struct IsotropicTensor4 {
  enum class Kind { Hooke, Viscosity };

  Kind kind = Kind::Hooke;
  double c_trace = 0.0;
  double c_dev = 0.0;

  static IsotropicTensor4 hooke(double lambda1, double lambda2) {
    if (lambda1 < 0.0 || lambda2 < 0.0) throw InvalidArgument("Lamé parameters must be >= 0");
    return {Kind::Hooke, lambda1, lambda2};
  }

  static IsotropicTensor4 viscosity(double zeta1, double zeta2) {
    if (zeta1 < 0.0 || zeta2 < 0.0) throw InvalidArgument("viscosity parameters must be >= 0");
    return {Kind::Viscosity, zeta1 - 2.0 / 3.0 * zeta2, zeta2};
  }

  Eigen::Matrix3d apply(const Eigen::Matrix3d& a) const {
    return c_trace * a.trace() * Eigen::Matrix3d::Identity() + 2.0 * c_dev * a;
  }

  // Longitudinal modulus of the linearized tensor for uniaxial strain.
  double uniaxial_modulus() const { return c_trace + 2.0 * c_dev; }
};

struct MechMaterial {
  double rho = 1.0;  // kg/m^3
  IsotropicTensor4 hooke;
  IsotropicTensor4 viscosity;

  MechMaterial(double rho_, IsotropicTensor4 hooke_, IsotropicTensor4 viscosity_)
      : rho(rho_), hooke(hooke_), viscosity(viscosity_) {
    if (rho <= 0.0) throw InvalidArgument("density must be positive");
  }
};

inline Eigen::Matrix3d apply_isotropic_tensor(const IsotropicTensor4& t, const Eigen::Matrix3d& a) {
  return t.apply(a);
}

// First Piola-Kirchhoff stress of the Kelvin-Voigt solid:
//   P(F1, F2) = 1/2 F1 [ H(F1ᵀF1 - I) + V(F2ᵀF1 + F1ᵀF2) ],
// where F1 is the deformation tensor and F2 its time derivative.
Eigen::Matrix3d kelvin_voigt_stress(const MechMaterial& material, const Eigen::Matrix3d& f1,
                                    const Eigen::Matrix3d& f2);

// Elastic energy density 1/8 <H(C - I), C - I> with C = FᵀF, and its gradient
// with respect to F, 1/2 F H(C - I).
std::pair<double, Eigen::Matrix3d> elastic_energy_and_gradient(const MechMaterial& material,
                                                               const Eigen::Matrix3d& f);

}  // namespace mphs::mech
