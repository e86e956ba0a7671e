#include "mphs/mech/tensors.hpp"

namespace mphs::mech {

using Eigen::Matrix3d;

Matrix3d kelvin_voigt_stress(const MechMaterial& material, const Matrix3d& f1,
                             const Matrix3d& f2) {
  const double det = f1.determinant();
  if (det <= 0.0) throw NonPositiveJacobianDet(det);
  const Matrix3d strain = f1.transpose() * f1 - Matrix3d::Identity();
  const Matrix3d rate = f2.transpose() * f1 + f1.transpose() * f2;
  return 0.5 * f1 * (material.hooke.apply(strain) + material.viscosity.apply(rate));
}

std::pair<double, Matrix3d> elastic_energy_and_gradient(const MechMaterial& material,
                                                        const Matrix3d& f) {
  const Matrix3d strain = f.transpose() * f - Matrix3d::Identity();
  const Matrix3d h_strain = material.hooke.apply(strain);
  const double energy = 0.125 * (h_strain.array() * strain.array()).sum();
  return {energy, 0.5 * f * h_strain};
}

}  // namespace mphs::mech
