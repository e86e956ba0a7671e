#pragma once

#include <Eigen/Dense>

#include "mphs/errors.hpp"

namespace mphs::coupled {

// Deformation tensor with zero (or numerically vanishing) determinant where an
// inverse or a pullback is required.
class SingularF : public Error {
public:
  explicit SingularF(double det)
      : Error("SingularF", "deformation tensor has determinant " + std::to_string(det)) {}
};

// Throws SingularF unless |det(f)| clears a scale-relative floor; returns the
// determinant otherwise.
double require_invertible(const Eigen::Matrix3d& f);

// Vector Piola transform k = det(F) F⁻¹ k̂ mapping a flux-like spatial vector
// field to the reference configuration (fluxes through surfaces are
// preserved).
Eigen::Vector3d piola_transform(const Eigen::Matrix3d& f, const Eigen::Vector3d& k_hat);

// Covector pullback s = Fᵀ ŝ for intensity-like (work-conjugate) vectors.
Eigen::Vector3d covector_pullback(const Eigen::Matrix3d& f, const Eigen::Vector3d& s_hat);

// Matrix of partial derivatives ∂det(A)/∂A_ij = det(A) [A⁻¹]_ji, i.e.
// det(A)·A⁻ᵀ (the cofactor matrix).
Eigen::Matrix3d det_derivative(const Eigen::Matrix3d& a);

// Max-norm deviation of (A b)×(A c) from det(A) A⁻ᵀ (b×c); zero for every
// invertible A up to round-off.
double cross_product_identity_deviation(const Eigen::Matrix3d& a, const Eigen::Vector3d& b,
                                        const Eigen::Vector3d& c);

// Max-norm deviation of (a×b)cᵀ + (c×a)bᵀ + (b×c)aᵀ from ((a×b)·c) I.
double triple_dyad_identity_deviation(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                      const Eigen::Vector3d& c);

}  // namespace mphs::coupled
