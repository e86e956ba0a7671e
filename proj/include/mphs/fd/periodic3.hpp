#pragma once

#include <Eigen/Dense>

namespace mphs::fd {

using Field1 = Eigen::VectorXd;                          // scalar per cell
using Field3 = Eigen::Matrix3Xd;                         // vector per cell (column)
using Field9 = Eigen::Matrix<double, 9, Eigen::Dynamic>; // 3x3 per cell (row-major column)

inline Eigen::Matrix3d unpack9(const Field9& f, int c) {
  Eigen::Matrix3d m;
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) m(r, s) = f(3 * r + s, c);
  return m;
}

inline void pack9(Field9& f, int c, const Eigen::Matrix3d& m) {
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s) f(3 * r + s, c) = m(r, s);
}

// Uniform periodic n^3 grid with second-order central differences. Periodic
// wrap-around makes the difference operators exactly skew-adjoint under the
// cell-volume inner product, so discrete integration by parts holds without
// boundary remainders.
struct PeriodicGrid3 {
  int n = 0;
  double h = 0.0;

  int cells() const { return n * n * n; }
  double cell_volume() const { return h * h * h; }

  int wrap(int i) const { return ((i % n) + n) % n; }
  int index(int i, int j, int k) const { return wrap(i) + n * (wrap(j) + n * wrap(k)); }

  // Index of the cell displaced by +/-1 along axis a from flat index c.
  int shift(int c, int a, int dir) const {
    int i = c % n, j = (c / n) % n, k = c / (n * n);
    if (a == 0) i += dir;
    else if (a == 1) j += dir;
    else k += dir;
    return index(i, j, k);
  }

  // d(scalar)/dx_a at cell c.
  double d_scalar(const Field1& f, int c, int a) const {
    return (f[shift(c, a, +1)] - f[shift(c, a, -1)]) / (2.0 * h);
  }

  Eigen::Vector3d grad_scalar(const Field1& f, int c) const {
    return {d_scalar(f, c, 0), d_scalar(f, c, 1), d_scalar(f, c, 2)};
  }

  // d(vector)/dx_a at cell c.
  Eigen::Vector3d d_vector(const Field3& f, int c, int a) const {
    return (f.col(shift(c, a, +1)) - f.col(shift(c, a, -1))) / (2.0 * h);
  }

  // Velocity-gradient-style matrix (∂f_i/∂x_j) at cell c.
  Eigen::Matrix3d grad_vector(const Field3& f, int c) const {
    Eigen::Matrix3d g;
    for (int a = 0; a < 3; ++a) g.col(a) = d_vector(f, c, a);
    return g;
  }

  double div_vector(const Field3& f, int c) const {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) s += d_vector(f, c, a)[a];
    return s;
  }

  Eigen::Vector3d curl_vector(const Field3& f, int c) const {
    const Eigen::Vector3d dx = d_vector(f, c, 0), dy = d_vector(f, c, 1), dz = d_vector(f, c, 2);
    return {dy[2] - dz[1], dz[0] - dx[2], dx[1] - dy[0]};
  }

  // Row-wise divergence of a matrix field: (div M)_i = d M_ij / d x_j.
  Eigen::Vector3d div_matrix(const Field9& f, int c) const {
    Eigen::Vector3d out = Eigen::Vector3d::Zero();
    for (int a = 0; a < 3; ++a) {
      const int cp = shift(c, a, +1), cm = shift(c, a, -1);
      for (int r = 0; r < 3; ++r)
        out[r] += (f(3 * r + a, cp) - f(3 * r + a, cm)) / (2.0 * h);
    }
    return out;
  }
};

}  // namespace mphs::fd
