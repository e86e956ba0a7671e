#include <mphs/core/ph_system.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>

#include <mphs/rng.hpp>

namespace mphs::core {

Vector fd_gradient(const ScalarFn& f, const Vector& x, double h_rel) {
  Vector g(x.size());
  Vector xp = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = h_rel * std::max(1.0, std::abs(x[i]));
    const double xi = x[i];
    xp[i] = xi + h;
    const double fp = f(xp);
    xp[i] = xi - h;
    const double fm = f(xp);
    xp[i] = xi;
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Vector PhSystem::grad_H_at(const Vector& x) const {
  if (grad_H) return grad_H(x);
  return fd_gradient(hamiltonian, x);
}

namespace {

void check_skew(const Matrix& J, const std::string& what) {
  const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
  if ((J + J.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw StructureError("skew", what + " has a nonzero symmetric part");
  // Quadratic-form probe with deterministic draws; catches sign conventions
  // that entrywise symmetry tests can miss on rectangular assembly mistakes.
  auto rng = make_rng(0x5ca1ab1e);
  std::normal_distribution<double> dist;
  for (int k = 0; k < 100; ++k) {
    Vector e(J.rows());
    for (Eigen::Index i = 0; i < e.size(); ++i) e[i] = dist(rng);
    const double q = e.dot(J * e);
    if (std::abs(q) > 1e-12 * e.squaredNorm() * std::max(1.0, scale))
      throw StructureError("skew", what + " fails the quadratic-form probe");
  }
}

void check_psd(const Matrix& R, const std::string& what) {
  const double scale = R.cwiseAbs().maxCoeff();
  if (scale == 0.0) return;
  if ((R - R.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw StructureError("psd", what + " is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(R);
  const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, norm))
    throw StructureError("psd", what + " has a negative eigenvalue");
}

}  // namespace

PhSystem build_ph_system(PhSystem parts) {
  if (parts.n_state <= 0) throw StructureError("dims", "n_state must be positive");
  if (!parts.hamiltonian) throw StructureError("dims", "hamiltonian is required");

  if (parts.E.size() == 0) parts.E = Matrix::Identity(parts.n_state, parts.n_state);
  parts.flow_identity = !parts.flow_map && parts.E.isIdentity(0.0);
  const int n_e = static_cast<int>(parts.E.rows());
  if (parts.E.cols() != parts.n_state)
    throw StructureError("dims", "flow map has wrong column count");

  if (parts.J.size() == 0) parts.J = Matrix::Zero(n_e, n_e);
  if (parts.R.size() == 0) parts.R = Matrix::Zero(n_e, n_e);
  if (parts.J.rows() != n_e || parts.J.cols() != n_e)
    throw StructureError("dims", "structure matrix is not n_e x n_e");
  if (parts.R.rows() != n_e || parts.R.cols() != n_e)
    throw StructureError("dims", "dissipation matrix is not n_e x n_e");
  if (parts.n_input > 0) {
    if (parts.B.rows() != n_e || parts.B.cols() != parts.n_input)
      throw StructureError("dims", "input map is not n_e x n_input");
  } else {
    parts.B = Matrix::Zero(n_e, 0);
  }
  if (!parts.effort && n_e != parts.n_state)
    throw StructureError("dims", "identity effort requires a square flow map");

  if (!parts.structure) check_skew(parts.J, "structure matrix");
  check_psd(parts.R, "dissipation matrix");

  // Compatibility Eᵀ e(x) = ∇H(x) at admissible samples.
  std::vector<Vector> samples = parts.validation_states;
  if (samples.empty()) {
    auto rng = make_rng(0xeff0c7);
    std::normal_distribution<double> dist;
    for (int k = 0; k < 5; ++k) {
      Vector x(parts.n_state);
      for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = dist(rng);
      samples.push_back(x);
    }
  }
  for (const Vector& x : samples) {
    const Matrix Ex = parts.flow_map ? parts.flow_map(x) : parts.E;
    const Vector lhs = Ex.transpose() * (parts.effort ? parts.effort(x) : x);
    const Vector g = parts.grad_H ? parts.grad_H(x) : fd_gradient(parts.hamiltonian, x);
    if ((lhs - g).norm() > 1e-8 * std::max(1.0, g.norm()))
      throw StructureError("effort", "flow-mapᵀ·effort does not match the energy gradient");
    if (parts.structure) check_skew(parts.structure(x), "structure map");
  }

  // Algebraic rows of a singular flow map must be consistent at the start.
  if (parts.consistent_x0) {
    const Vector& x0 = *parts.consistent_x0;
    const Matrix E0 = parts.flow_map ? parts.flow_map(x0) : parts.E;
    const Vector g = parts.rhs_at(x0, Vector::Zero(std::max(parts.n_input, 0)));
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    for (int i = 0; i < n_e; ++i) {
      if (E0.row(i).cwiseAbs().maxCoeff() == 0.0 && std::abs(g[i]) > 1e-10 * scale)
        throw StructureError("consistency",
                             "algebraic row " + std::to_string(i) + " inconsistent at x0");
    }
  }

  return parts;
}

}  // namespace mphs::core
