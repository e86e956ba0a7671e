#include "mphs/mech/rotor.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace mphs::mech {

using Eigen::MatrixXd;
using std::complex;

MatrixXd SecondOrderSystem::effective_damping() const {
  MatrixXd d = D.size() > 0 ? D : MatrixXd::Zero(dof(), dof());
  if (G.size() > 0) d += 2.0 * omega * G;
  return d;
}

MatrixXd SecondOrderSystem::effective_stiffness() const {
  MatrixXd k = K;
  if (Z.size() > 0) k -= omega * omega * Z;
  if (K_G.size() > 0) k += omega * omega * K_G;
  return k;
}

namespace {

bool is_symmetric(const MatrixXd& a, double tol) {
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

bool is_skew(const MatrixXd& a, double tol) {
  return (a + a.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

bool is_psd(const MatrixXd& a, double tol) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (a + a.transpose()));
  return es.eigenvalues().minCoeff() >= -tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

}  // namespace

void validate_second_order(const SecondOrderSystem& sys) {
  const int n = sys.dof();
  constexpr double tol = 1e-12;
  auto square = [n](const MatrixXd& a) { return a.rows() == n && a.cols() == n; };
  if (n == 0 || !square(sys.M) || !square(sys.K) || (sys.D.size() > 0 && !square(sys.D)))
    throw StructureError("dimension", "M, D, K must be square with matching size");
  if (!is_symmetric(sys.M, tol)) throw StructureError("symmetry", "mass matrix not symmetric");
  Eigen::LLT<MatrixXd> llt(sys.M);
  if (llt.info() != Eigen::Success)
    throw StructureError("spd", "mass matrix not positive definite");
  if (sys.D.size() > 0) {
    if (!is_symmetric(sys.D, tol)) throw StructureError("symmetry", "damping matrix not symmetric");
    if (!is_psd(sys.D, tol)) throw StructureError("psd", "damping matrix not PSD");
  }
  if (!is_symmetric(sys.K, tol)) throw StructureError("symmetry", "stiffness matrix not symmetric");
  if (sys.G.size() > 0 && !is_skew(sys.G, tol))
    throw StructureError("skew", "gyroscopic matrix not skew-symmetric");
  if (sys.Z.size() > 0 && !is_symmetric(sys.Z, tol))
    throw StructureError("symmetry", "centrifugal matrix not symmetric");
  if (sys.K_G.size() > 0 && !is_symmetric(sys.K_G, tol))
    throw StructureError("symmetry", "stiffening matrix not symmetric");
}

SecondOrderSystem assemble_linear_nonrotating(const MechMaterial& material, double length,
                                              int n_nodes,
                                              std::optional<std::pair<double, double>> rayleigh) {
  if (n_nodes < 3) throw InvalidArgument("need at least 3 nodes for a fixed-fixed bar");
  if (length <= 0.0) throw InvalidArgument("bar length must be positive");

  const int n_el = n_nodes - 1;
  const int n_free = n_nodes - 2;  // both end displacements pinned
  const double le = length / n_el;
  const double e_mod = material.hooke.uniaxial_modulus();
  const double v_mod = material.viscosity.uniaxial_modulus();

  MatrixXd M = MatrixXd::Zero(n_free, n_free);
  MatrixXd K = MatrixXd::Zero(n_free, n_free);
  MatrixXd Dv = MatrixXd::Zero(n_free, n_free);

  // Consistent-mass linear elements; free DOF g = node - 1 for nodes 1..n-2.
  auto add = [&](MatrixXd& target, int na, int nb, double waa, double wab, double wbb) {
    const int ga = na - 1, gb = nb - 1;
    if (ga >= 0 && ga < n_free) target(ga, ga) += waa;
    if (gb >= 0 && gb < n_free) target(gb, gb) += wbb;
    if (ga >= 0 && ga < n_free && gb >= 0 && gb < n_free) {
      target(ga, gb) += wab;
      target(gb, ga) += wab;
    }
  };
  for (int el = 0; el < n_el; ++el) {
    const double m = material.rho * le / 6.0;
    add(M, el, el + 1, 2.0 * m, m, 2.0 * m);
    add(K, el, el + 1, e_mod / le, -e_mod / le, e_mod / le);
    add(Dv, el, el + 1, v_mod / le, -v_mod / le, v_mod / le);
  }

  SecondOrderSystem sys;
  sys.M = std::move(M);
  sys.K = std::move(K);
  sys.D = rayleigh ? (rayleigh->first * sys.M + rayleigh->second * sys.K).eval() : std::move(Dv);
  validate_second_order(sys);
  return sys;
}

SecondOrderSystem assemble_rotor_system(SecondOrderSystem base, double omega,
                                        const MatrixXd& G, const MatrixXd& Z,
                                        const MatrixXd& K_G) {
  base.omega = omega;
  base.G = G;
  base.Z = Z;
  base.K_G = K_G;
  validate_second_order(base);
  return base;
}

std::vector<complex<double>> second_order_eigs(const SecondOrderSystem& sys) {
  const int n = sys.dof();
  Eigen::FullPivLU<MatrixXd> lu(sys.M);
  if (!lu.isInvertible()) throw SingularMass("mass matrix is singular");

  MatrixXd A = MatrixXd::Zero(2 * n, 2 * n);
  A.topRightCorner(n, n).setIdentity();
  A.bottomLeftCorner(n, n) = -lu.solve(sys.effective_stiffness());
  A.bottomRightCorner(n, n) = -lu.solve(sys.effective_damping());

  Eigen::EigenSolver<MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw NonConvergence(0.0, "companion eigensolve failed");

  std::vector<complex<double>> eigs(2 * n);
  for (int i = 0; i < 2 * n; ++i) eigs[i] = es.eigenvalues()[i];
  std::sort(eigs.begin(), eigs.end(), [](const complex<double>& a, const complex<double>& b) {
    if (a.imag() != b.imag()) return a.imag() < b.imag();
    return a.real() < b.real();
  });
  return eigs;
}

SecondOrderSystem jeffcott_system(double m, double d, double k) {
  if (m <= 0.0) throw InvalidArgument("rotor mass must be positive");
  if (d < 0.0 || k < 0.0) throw InvalidArgument("damping and stiffness must be >= 0");
  SecondOrderSystem sys;
  sys.M = m * MatrixXd::Identity(2, 2);
  sys.D = d * MatrixXd::Identity(2, 2);
  sys.K = k * MatrixXd::Identity(2, 2);
  validate_second_order(sys);
  return sys;
}

double rotor_speed_step(double theta_inertia, double mu_f, double t_e, double t_l, double omega0,
                        double t) {
  if (theta_inertia <= 0.0) throw InvalidArgument("shaft inertia must be positive");
  if (mu_f < 0.0) throw InvalidArgument("friction coefficient must be >= 0");
  if (t < 0.0) throw InvalidArgument("time must be >= 0");
  const double net = t_e - t_l;
  if (mu_f == 0.0) return omega0 + net * t / theta_inertia;
  const double omega_inf = net / mu_f;
  return omega_inf + (omega0 - omega_inf) * std::exp(-mu_f * t / theta_inertia);
}

double rotor_speed_midpoint(double theta_inertia, double mu_f,
                            const std::function<double(double)>& t_e,
                            const std::function<double(double)>& t_l, double omega0, double t_end,
                            double dt) {
  if (theta_inertia <= 0.0) throw InvalidArgument("shaft inertia must be positive");
  if (dt <= 0.0) throw InvalidArgument("step size must be positive");
  const int n_steps = static_cast<int>(std::ceil(t_end / dt - 1e-12));
  double omega = omega0;
  for (int k = 0; k < n_steps; ++k) {
    const double tm = (k + 0.5) * dt;
    // Theta (w+ - w-) = dt [ net(tm) - mu_f (w+ + w-)/2 ], linear in w+.
    const double net = t_e(tm) - t_l(tm);
    const double a = 0.5 * mu_f * dt / theta_inertia;
    omega = ((1.0 - a) * omega + dt * net / theta_inertia) / (1.0 + a);
  }
  return omega;
}

}  // namespace mphs::mech
