#include <mphs/mor/reduce.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace mphs::mor {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

// Relative level below which a Hankel value counts as numerically zero.
constexpr double kHankelFloor = 1e-12;

MatrixXd symmetric_square_root_factor(const MatrixXd& p, const char* what) {
  // Cholesky when definite, eigen square root for the semidefinite rest.
  Eigen::LLT<MatrixXd> llt(p);
  if (llt.info() == Eigen::Success) return llt.matrixL();

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(p);
  if (es.info() != Eigen::Success) throw SingularSystem(std::string(what) + " factorization failed");
  const double floor = -1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < floor)
    throw NotSPD(std::string(what) + " is indefinite");
  const VectorXd clipped = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * clipped.asDiagonal();
}

struct StandardForm {
  MatrixXd a;  // E^{-1} A
  MatrixXd b;  // E^{-1} B
};

StandardForm standard_form(const LtiSystem& sys) {
  validate_lti(sys);
  Eigen::FullPivLU<MatrixXd> lu(sys.E);
  return {lu.solve(sys.A), lu.solve(sys.B)};
}

}  // namespace

void validate_lti(const LtiSystem& sys) {
  const int n = sys.n();
  if (n <= 0) throw InvalidArgument("state dimension must be positive");
  if (sys.A.cols() != n) throw InvalidArgument("state matrix must be square");
  if (sys.E.rows() != n || sys.E.cols() != n)
    throw InvalidArgument("descriptor matrix must match the state dimension");
  if (sys.B.rows() != n) throw InvalidArgument("input matrix row count must match the state");
  if (sys.C.cols() != n) throw InvalidArgument("output matrix column count must match the state");
  Eigen::FullPivLU<MatrixXd> lu(sys.E);
  if (!lu.isInvertible()) throw SingularSystem("descriptor matrix is singular");
}

MatrixXcd transfer_at(const LtiSystem& sys, std::complex<double> s) {
  const int n = sys.n();
  if (n == 0) return MatrixXcd::Zero(sys.n_outputs(), sys.n_inputs());
  const MatrixXcd resolvent = s * sys.E.cast<std::complex<double>>() -
                              sys.A.cast<std::complex<double>>();
  Eigen::FullPivLU<MatrixXcd> lu(resolvent);
  if (!lu.isInvertible()) throw SingularSystem("transfer function evaluated at a pole");
  return sys.C.cast<std::complex<double>>() * lu.solve(sys.B.cast<std::complex<double>>());
}

double spectral_abscissa(const LtiSystem& sys) {
  const auto sf = standard_form(sys);
  Eigen::EigenSolver<MatrixXd> es(sf.a);
  if (es.info() != Eigen::Success) throw SingularSystem("eigenvalue computation failed");
  return es.eigenvalues().real().maxCoeff();
}

double sampled_hinf_norm(const LtiSystem& sys, int n_samples) {
  if (n_samples < 2) throw InvalidArgument("need at least two frequency samples");
  const auto sf = standard_form(sys);
  Eigen::EigenSolver<MatrixXd> es(sf.a);
  const double scale = std::max(1e-12, es.eigenvalues().cwiseAbs().maxCoeff());

  double best = transfer_at(sys, {0.0, 0.0}).jacobiSvd().singularValues().maxCoeff();
  const double lo = std::log10(1e-3 * scale), hi = std::log10(1e3 * scale);
  for (int k = 0; k < n_samples; ++k) {
    const double omega = std::pow(10.0, lo + (hi - lo) * k / (n_samples - 1));
    const double gain = transfer_at(sys, {0.0, omega}).jacobiSvd().singularValues().maxCoeff();
    best = std::max(best, gain);
  }
  return best;
}

std::vector<ErrorSample> sampled_error(const LtiSystem& full, const LtiSystem& reduced,
                                       int n_samples) {
  if (n_samples < 2) throw InvalidArgument("need at least two frequency samples");
  if (full.n_inputs() != reduced.n_inputs() || full.n_outputs() != reduced.n_outputs())
    throw InvalidArgument("systems have mismatched port dimensions");
  const auto sf = standard_form(full);
  Eigen::EigenSolver<MatrixXd> es(sf.a);
  const double scale = std::max(1e-12, es.eigenvalues().cwiseAbs().maxCoeff());

  std::vector<ErrorSample> out;
  out.reserve(n_samples + 1);
  auto gain_at = [&](double omega) {
    const MatrixXcd diff =
        transfer_at(full, {0.0, omega}) - transfer_at(reduced, {0.0, omega});
    return diff.jacobiSvd().singularValues().maxCoeff();
  };
  out.push_back({0.0, gain_at(0.0)});
  const double lo = std::log10(1e-3 * scale), hi = std::log10(1e3 * scale);
  for (int k = 0; k < n_samples; ++k) {
    const double omega = std::pow(10.0, lo + (hi - lo) * k / (n_samples - 1));
    out.push_back({omega, gain_at(omega)});
  }
  return out;
}

double max_sampled_error(const LtiSystem& full, const LtiSystem& reduced, int n_samples) {
  double best = 0.0;
  for (const auto& sample : sampled_error(full, reduced, n_samples))
    best = std::max(best, sample.gain);
  return best;
}

MatrixXd lyapunov_solve(const MatrixXd& a, const MatrixXd& q) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw InvalidArgument("coefficient matrix must be square");
  if (q.rows() != n || q.cols() != n)
    throw InvalidArgument("right-hand side must match the coefficient matrix");

  using Complex = std::complex<double>;
  Eigen::ComplexSchur<MatrixXcd> schur(a.cast<Complex>());
  if (schur.info() != Eigen::Success) throw SingularSystem("Schur factorization failed");
  const MatrixXcd& t = schur.matrixT();
  const MatrixXcd& u = schur.matrixU();

  // T Y + Y T^H = -U^H Q U, solved column-by-column from the last one.
  const MatrixXcd qt = u.adjoint() * q.cast<Complex>() * u;
  MatrixXcd y = MatrixXcd::Zero(n, n);
  for (int j = n - 1; j >= 0; --j) {
    VectorXcd rhs = -qt.col(j);
    for (int k = j + 1; k < n; ++k) rhs -= y.col(k) * std::conj(t(j, k));

    MatrixXcd shifted = t;
    shifted.diagonal().array() += std::conj(t(j, j));
    const double floor = 1e-14 * std::max(1.0, t.cwiseAbs().maxCoeff());
    if (shifted.diagonal().cwiseAbs().minCoeff() <= floor)
      throw SingularSystem("eigenvalue pair sums to zero; Lyapunov equation is singular");
    y.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return (u * y * u.adjoint()).real();
}

ReducedModel balanced_truncation(const LtiSystem& sys, int r) {
  const auto sf = standard_form(sys);
  const int n = sys.n();
  if (r < 0 || r > n) throw InvalidArgument("reduction order must lie in [0, n]");
  if (sys.n_inputs() < 1 || sys.n_outputs() < 1)
    throw InvalidArgument("balanced truncation needs at least one input and one output");

  const double abscissa =
      Eigen::EigenSolver<MatrixXd>(sf.a).eigenvalues().real().maxCoeff();
  if (!(abscissa < 0.0)) throw UnstableSystem(abscissa);

  // Gramians of the standard-form realization.
  const MatrixXd p = lyapunov_solve(sf.a, sf.b * sf.b.transpose());
  const MatrixXd q = lyapunov_solve(sf.a.transpose(), sys.C.transpose() * sys.C);
  const MatrixXd lp = symmetric_square_root_factor(0.5 * (p + p.transpose()), "controllability Gramian");
  const MatrixXd lq = symmetric_square_root_factor(0.5 * (q + q.transpose()), "observability Gramian");

  Eigen::JacobiSVD<MatrixXd> svd(lq.transpose() * lp,
                                 Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd hsv = svd.singularValues();

  int minimal = 0;
  const double hsv_floor = kHankelFloor * std::max(hsv.size() > 0 ? hsv[0] : 0.0, 0.0);
  for (int i = 0; i < hsv.size(); ++i)
    if (hsv[i] > hsv_floor && hsv[i] > 0.0) ++minimal;
  if (r > minimal) throw NonMinimalWarning(r, minimal);

  ReducedModel out;
  out.hsv = hsv;
  out.error_bound = 2.0 * hsv.tail(hsv.size() - r).sum();

  const VectorXd scaling = hsv.head(r).cwiseSqrt().cwiseInverse();
  out.V = lp * svd.matrixV().leftCols(r) * scaling.asDiagonal();
  out.W = lq * svd.matrixU().leftCols(r) * scaling.asDiagonal();
  out.E = MatrixXd::Identity(r, r);
  out.A = out.W.transpose() * sf.a * out.V;
  out.B = out.W.transpose() * sf.b;
  out.C = sys.C * out.V;
  return out;
}

ReducedModel balanced_truncation(const LtiSystem& sys, double tol) {
  if (!(tol >= 0.0)) throw InvalidArgument("error tolerance must be nonnegative");
  // One full-order pass yields the Hankel spectrum; pick the smallest order
  // whose tail bound meets the tolerance, then rebuild at that order.
  const ReducedModel full = balanced_truncation(sys, 0);
  const VectorXd& hsv = full.hsv;
  const double floor = kHankelFloor * (hsv.size() > 0 ? hsv[0] : 0.0);

  int minimal = 0;
  for (int i = 0; i < hsv.size(); ++i)
    if (hsv[i] > floor && hsv[i] > 0.0) ++minimal;

  int r = minimal;
  for (int cand = 0; cand <= minimal; ++cand) {
    if (2.0 * hsv.tail(hsv.size() - cand).sum() <= tol) {
      r = cand;
      break;
    }
  }
  return balanced_truncation(sys, r);
}

PodResult pod(const Eigen::MatrixXd& snapshots, double energy_tol) {
  if (snapshots.cols() < 1 || snapshots.rows() < 1) throw EmptySnapshots();
  if (!(energy_tol >= 0.0) || energy_tol >= 1.0)
    throw InvalidArgument("energy tolerance must lie in [0, 1)");

  Eigen::JacobiSVD<MatrixXd> svd(snapshots, Eigen::ComputeThinU);
  PodResult out;
  out.singular_values = svd.singularValues();

  const double total = out.singular_values.squaredNorm();
  if (total == 0.0) {
    out.basis = MatrixXd::Zero(snapshots.rows(), 0);
    return out;
  }
  double captured = 0.0;
  int r = 0;
  for (; r < out.singular_values.size(); ++r) {
    captured += out.singular_values[r] * out.singular_values[r];
    if (captured >= (1.0 - energy_tol) * total) {
      ++r;
      break;
    }
  }
  out.basis = svd.matrixU().leftCols(r);
  return out;
}

namespace {

ModalResult modal_solve(const MatrixXd& m, const MatrixXd& k) {
  const int n = static_cast<int>(m.rows());
  if (n < 1 || m.cols() != n) throw InvalidArgument("mass matrix must be square and nonempty");
  if (k.rows() != n || k.cols() != n)
    throw InvalidArgument("stiffness matrix must match the mass matrix");
  const double m_scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double k_scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * m_scale)
    throw NotSPD("mass matrix is not symmetric");
  if ((k - k.transpose()).cwiseAbs().maxCoeff() > 1e-10 * k_scale)
    throw NotSPD("stiffness matrix is not symmetric");
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw NotSPD("mass matrix is not positive definite");

  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(k, m);
  if (es.info() != Eigen::Success) throw SingularSystem("generalized eigensolve failed");

  ModalResult out;
  out.basis = es.eigenvectors();  // ascending eigenvalues, M-orthonormal
  out.frequencies = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return out;
}

}  // namespace

ModalResult modal_truncation(const MatrixXd& m, const MatrixXd& k, int r) {
  ModalResult all = modal_solve(m, k);
  const int n = static_cast<int>(m.rows());
  if (r < 1 || r > n) throw InvalidArgument("mode count must lie in [1, n]");
  all.basis = MatrixXd(all.basis.leftCols(r));
  all.frequencies = VectorXd(all.frequencies.head(r));
  return all;
}

ModalResult modal_truncation_below(const MatrixXd& m, const MatrixXd& k, double omega_max) {
  if (!(omega_max >= 0.0)) throw InvalidArgument("frequency threshold must be nonnegative");
  ModalResult all = modal_solve(m, k);
  int r = 0;
  while (r < all.frequencies.size() && all.frequencies[r] <= omega_max) ++r;
  all.basis = MatrixXd(all.basis.leftCols(r));
  all.frequencies = VectorXd(all.frequencies.head(r));
  return all;
}

}  // namespace mphs::mor
