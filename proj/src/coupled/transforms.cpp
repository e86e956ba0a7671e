#include "mphs/coupled/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace mphs::coupled {

using Eigen::Matrix3d;
using Eigen::Vector3d;

double require_invertible(const Matrix3d& f) {
  const double det = f.determinant();
  const double scale = std::max(1e-300, std::pow(f.cwiseAbs().maxCoeff(), 3));
  if (!(std::abs(det) > 1e-14 * scale)) throw SingularF(det);
  return det;
}

Vector3d piola_transform(const Matrix3d& f, const Vector3d& k_hat) {
  const double det = require_invertible(f);
  return det * f.inverse() * k_hat;
}

Vector3d covector_pullback(const Matrix3d& f, const Vector3d& s_hat) {
  return f.transpose() * s_hat;
}

Matrix3d det_derivative(const Matrix3d& a) {
  const double det = require_invertible(a);
  return det * a.inverse().transpose();
}

double cross_product_identity_deviation(const Matrix3d& a, const Vector3d& b, const Vector3d& c) {
  const Vector3d lhs = (a * b).cross(a * c);
  const double det = require_invertible(a);
  const Vector3d rhs = det * a.inverse().transpose() * b.cross(c);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

double triple_dyad_identity_deviation(const Vector3d& a, const Vector3d& b, const Vector3d& c) {
  const Matrix3d lhs = a.cross(b) * c.transpose() + c.cross(a) * b.transpose() +
                       b.cross(c) * a.transpose();
  const Matrix3d rhs = a.cross(b).dot(c) * Matrix3d::Identity();
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace mphs::coupled
