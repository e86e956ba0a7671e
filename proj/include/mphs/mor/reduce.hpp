#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include <mphs/errors.hpp>

namespace mphs::mor {

// Spectral abscissa of the pencil is nonnegative where asymptotic stability
// is required.
class UnstableSystem : public Error {
public:
  explicit UnstableSystem(double max_real_part)
      : Error("UnstableSystem",
              "largest eigenvalue real part is " + std::to_string(max_real_part)),
        max_real_part_(max_real_part) {}

  double max_real_part() const noexcept { return max_real_part_; }

private:
  double max_real_part_;
};

// Requested reduction order reaches into the numerically-zero tail of the
// Hankel spectrum: the realization is not minimal at that order and the
// balancing transform would be singular there.
class NonMinimalWarning : public Error {
public:
  NonMinimalWarning(int requested, int minimal)
      : Error("NonMinimalWarning", "requested order " + std::to_string(requested) +
                                       " exceeds the minimal realization order " +
                                       std::to_string(minimal)) {}
};

// Matrix that must be symmetric positive definite (or symmetric) is not.
class NotSPD : public Error {
public:
  explicit NotSPD(const std::string& detail) : Error("NotSPD", detail) {}
};

class EmptySnapshots : public Error {
public:
  EmptySnapshots() : Error("EmptySnapshots", "snapshot matrix has no columns") {}
};

// Dense descriptor state-space model E x' = A x + B u, y = C x with
// nonsingular E.
struct LtiSystem {
  Eigen::MatrixXd E, A, B, C;

  int n() const { return static_cast<int>(A.rows()); }
  int n_inputs() const { return static_cast<int>(B.cols()); }
  int n_outputs() const { return static_cast<int>(C.rows()); }
};

// Throws InvalidArgument on shape mismatch and SingularSystem when E is not
// invertible.
void validate_lti(const LtiSystem& sys);

// Transfer function C (s E - A)^{-1} B evaluated at one complex frequency.
Eigen::MatrixXcd transfer_at(const LtiSystem& sys, std::complex<double> s);

// Largest real part over the spectrum of E^{-1} A.
double spectral_abscissa(const LtiSystem& sys);

// Largest singular value of the transfer function sampled at n_samples
// log-spaced points s = i*omega, omega in [1e-3, 1e3] times the spectral
// scale max|eig(E^{-1}A)| (plus omega = 0).
double sampled_hinf_norm(const LtiSystem& sys, int n_samples = 200);

// Gain of the mismatch between two transfer functions, sampled at omega = 0
// followed by n_samples log-spaced frequencies over the full system's
// spectral scale. Both systems must share input/output dimensions.
struct ErrorSample {
  double omega = 0.0;
  double gain = 0.0;  // largest singular value of the difference
};

std::vector<ErrorSample> sampled_error(const LtiSystem& full, const LtiSystem& reduced,
                                       int n_samples = 200);

// Convenience: largest sampled mismatch gain.
double max_sampled_error(const LtiSystem& full, const LtiSystem& reduced, int n_samples = 200);

// Solves the continuous Lyapunov equation A X + X A^T + Q = 0 by complex
// Schur reduction and back-substitution. Requires that no two eigenvalues of
// A sum to zero (guaranteed for Hurwitz A); throws SingularSystem otherwise.
Eigen::MatrixXd lyapunov_solve(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q);

// Balanced-truncation output: reduced realization (E is the r-dim identity),
// the oblique projection bases, the full Hankel spectrum, and the a-priori
// absolute H-infinity error bound 2 * sum of truncated Hankel values.
struct ReducedModel {
  Eigen::MatrixXd E, A, B, C;  // reduced realization
  Eigen::MatrixXd V, W;        // bases with x ≈ V x_r, W^T V = I
  Eigen::VectorXd hsv;         // Hankel singular values, nonincreasing
  double error_bound = 0.0;

  int order() const { return static_cast<int>(A.rows()); }
  LtiSystem system() const { return {E, A, B, C}; }
};

// Square-root balanced truncation to a fixed order r (0 <= r <= n). Requires
// an asymptotically stable pencil (UnstableSystem otherwise); throws
// NonMinimalWarning when r reaches Hankel values at relative round-off level.
ReducedModel balanced_truncation(const LtiSystem& sys, int r);

// Same, picking the smallest order whose error bound is at most `tol`
// (capped at the minimal realization order).
ReducedModel balanced_truncation(const LtiSystem& sys, double tol);

// Proper orthogonal decomposition of a snapshot matrix: orthonormal basis of
// the smallest dimension whose cumulative squared singular values reach
// 1 - energy_tol of the total energy.
struct PodResult {
  Eigen::MatrixXd basis;            // orthonormal columns
  Eigen::VectorXd singular_values;  // all of them, nonincreasing

  int order() const { return static_cast<int>(basis.cols()); }
};

PodResult pod(const Eigen::MatrixXd& snapshots, double energy_tol);

// Lowest generalized eigenmodes of K v = omega^2 M v with M symmetric
// positive definite and K symmetric. The basis is mass-orthonormal
// (V^T M V = I) and sorted by ascending frequency.
struct ModalResult {
  Eigen::MatrixXd basis;
  Eigen::VectorXd frequencies;  // rad/s, ascending

  int order() const { return static_cast<int>(basis.cols()); }
};

ModalResult modal_truncation(const Eigen::MatrixXd& m, const Eigen::MatrixXd& k, int r);

// Keeps every mode with frequency at most omega_max (the excitation-threshold
// form of mode selection).
ModalResult modal_truncation_below(const Eigen::MatrixXd& m, const Eigen::MatrixXd& k,
                                   double omega_max);

}  // namespace mphs::mor
