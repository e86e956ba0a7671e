#include "mphs/em/maxwell.hpp"

#include <string>
#include <utility>

namespace mphs::em {

using Eigen::ArrayXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

bool is_wall(Boundary b) { return b == Boundary::PEC || b == Boundary::Dirichlet; }

// Quadratic-Hamiltonian plumbing shared by both assemblers: given the diagonal
// flow-map weights and diagonal effort coefficients, fill in E, effort,
// Hamiltonian, and gradient so that H = 1/2 xᵀ diag(flow .* effort) x.
void attach_quadratic_energy(core::PhSystem& sys, const VectorXd& flow_diag,
                             const VectorXd& effort_diag) {
  sys.E = flow_diag.asDiagonal();
  sys.effort_linear = MatrixXd(effort_diag.asDiagonal());
  sys.effort = [effort_diag](const VectorXd& x) -> VectorXd {
    return effort_diag.cwiseProduct(x);
  };
  const VectorXd w = flow_diag.cwiseProduct(effort_diag);
  sys.hamiltonian = [w](const VectorXd& x) { return 0.5 * x.dot(w.cwiseProduct(x)); };
  sys.grad_H = [w](const VectorXd& x) -> VectorXd { return w.cwiseProduct(x); };
}

}  // namespace

VectorXd MaxwellModel1D::pack(const VectorXd& e_field, const VectorXd& b_field) const {
  if (e_field.size() != n_e() || b_field.size() != n_b())
    throw InvalidArgument("field sizes do not match the staggered layout");
  VectorXd x(n_e() + n_b());
  x << e_field, b_field;
  return x;
}

MaxwellModel1D assemble_maxwell_ph(const EmGrid1D& grid, const EmMaterial& material) {
  const int n = grid.n_cells;
  const double h = grid.h();
  material.check_cells(n, "assemble_maxwell_ph");

  const bool periodic = grid.left.kind == Boundary::Periodic;
  if (periodic) {
    if (grid.right.kind != Boundary::Periodic)
      throw UnsupportedBoundary("periodic requires both ends periodic");
  } else if (!is_wall(grid.left.kind) || !is_wall(grid.right.kind)) {
    throw UnsupportedBoundary(std::string("1D Maxwell supports PEC/Dirichlet walls or periodic, got ") +
                              boundary_name(grid.left.kind) + "/" + boundary_name(grid.right.kind));
  }

  MaxwellModel1D model;
  model.n_cells = n;
  model.h = h;
  model.periodic = periodic;

  const int n_e = periodic ? n : n - 1;
  const int n_b = n;
  const int N = n_e + n_b;

  // Interior node i sits between cells i-1 and i; averaged coefficients keep
  // per-cell materials symmetric across each node.
  model.eps_node.resize(n_e);
  ArrayXd sigma_node(n_e);
  for (int s = 0; s < n_e; ++s) {
    const int node = periodic ? s : s + 1;
    const int cl = periodic ? (node - 1 + n) % n : node - 1;
    const int cr = node % n;
    model.eps_node[s] = 0.5 * (material.eps_at(cl) + material.eps_at(cr));
    sigma_node[s] = 0.5 * (material.sigma_at(cl) + material.sigma_at(cr));
  }
  model.mu_cell.resize(n_b);
  for (int j = 0; j < n_b; ++j) model.mu_cell[j] = material.mu_at(j);

  VectorXd flow_diag(N), effort_diag(N), r_diag(N);
  for (int s = 0; s < n_e; ++s) {
    flow_diag[s] = model.eps_node[s] * h;
    effort_diag[s] = 1.0;
    r_diag[s] = sigma_node[s] * h;
  }
  for (int j = 0; j < n_b; ++j) {
    flow_diag[n_e + j] = h;
    effort_diag[n_e + j] = 1.0 / model.mu_cell[j];
    r_diag[n_e + j] = 0.0;
  }

  MatrixXd J = MatrixXd::Zero(N, N);
  if (periodic) {
    for (int j = 0; j < n; ++j) {  // h dB_j/dt = -(E_{j+1} - E_j)
      J(n_e + j, (j + 1) % n) -= 1.0;
      J(n_e + j, j) += 1.0;
    }
    for (int i = 0; i < n; ++i) {  // eps h dE_i/dt = -(eB_i - eB_{i-1}) - sigma h E_i
      J(i, n_e + i) -= 1.0;
      J(i, n_e + (i - 1 + n) % n) += 1.0;
    }
  } else {
    for (int j = 0; j < n; ++j) {  // cells j = 0..n-1 between nodes j and j+1
      if (j + 1 <= n - 1) J(n_e + j, j) -= 1.0;  // state index of node j+1 is j
      if (j >= 1) J(n_e + j, j - 1) += 1.0;
    }
    for (int s = 0; s < n_e; ++s) {  // node i = s+1 between cells s and s+1
      J(s, n_e + s + 1) -= 1.0;
      J(s, n_e + s) += 1.0;
    }
  }

  core::PhSystem sys;
  sys.n_state = N;
  sys.J = std::move(J);
  sys.R = r_diag.asDiagonal();
  attach_quadratic_energy(sys, flow_diag, effort_diag);

  if (!periodic) {
    // Prescribed tangential E at the two walls enters the adjacent B cells;
    // u = 0 reproduces a PEC wall, nonzero u drives the boundary port.
    sys.n_input = 2;
    MatrixXd Bp = MatrixXd::Zero(N, 2);
    Bp(n_e + 0, 0) = 1.0;      // h dB_0/dt = -(E_1 - u_left)
    Bp(n_e + n - 1, 1) = -1.0;  // h dB_{n-1}/dt = -(u_right - E_{n-1})
    sys.B = std::move(Bp);
  }

  model.ph = core::build_ph_system(std::move(sys));
  return model;
}

VectorXd MaxwellModel2D::pack(const VectorXd& ex, const VectorXd& ey, const VectorXd& bz) const {
  if (ex.size() != n_ex() || ey.size() != n_ey() || bz.size() != n_bz())
    throw InvalidArgument("field sizes do not match the staggered layout");
  VectorXd x(ex.size() + ey.size() + bz.size());
  x << ex, ey, bz;
  return x;
}

int MaxwellModel2D::ex_index(int i, int j) const {
  if (periodic) return ((i % nx) + nx) % nx + nx * (((j % ny) + ny) % ny);
  if (j <= 0 || j >= ny) return -1;  // tangential E on the y-walls
  return i + nx * (j - 1);
}

int MaxwellModel2D::ey_index(int i, int j) const {
  const int base = n_ex();
  if (periodic) return base + ((i % nx) + nx) % nx + nx * (((j % ny) + ny) % ny);
  if (i <= 0 || i >= nx) return -1;  // tangential E on the x-walls
  return base + (i - 1) + (nx - 1) * j;
}

int MaxwellModel2D::bz_index(int i, int j) const {
  const int base = n_ex() + n_ey();
  if (periodic) return base + ((i % nx) + nx) % nx + nx * (((j % ny) + ny) % ny);
  return base + i + nx * j;
}

VectorXd MaxwellModel2D::div_b(const VectorXd& state) const {
  // B = B_z(x, y) only: the in-plane staggered divergence has no B_z term, so
  // the monitor is identically zero whatever the state.
  (void)state;
  return VectorXd::Zero(n_bz());
}

VectorXd MaxwellModel2D::div_d(const VectorXd& state) const {
  auto ex = [&](int i, int j) {
    const int s = ex_index(i, j);
    return s < 0 ? 0.0 : state[s];
  };
  auto ey = [&](int i, int j) {
    const int s = ey_index(i, j);
    return s < 0 ? 0.0 : state[s];
  };
  const int i0 = periodic ? 0 : 1;
  const int j0 = periodic ? 0 : 1;
  const int ni = periodic ? nx : nx - 1;
  const int nj = periodic ? ny : ny - 1;
  VectorXd out(ni * nj);
  for (int j = j0; j < j0 + nj; ++j)
    for (int i = i0; i < i0 + ni; ++i) {
      const double dx = (ex(i, j) - ex(i - 1, j)) / hx;
      const double dy = (ey(i, j) - ey(i, j - 1)) / hy;
      out[(i - i0) + ni * (j - j0)] = eps * (dx + dy);
    }
  return out;
}

MaxwellModel2D assemble_maxwell_ph(const EmGrid2D& grid, const EmMaterial& material) {
  material.check_cells(grid.n_cells(), "assemble_maxwell_ph");
  if (!material.uniform())
    throw InvalidArgument("2D TE assembly supports uniform materials");

  const bool periodic = grid.left.kind == Boundary::Periodic;
  const auto all = [&](Boundary b) {
    return grid.left.kind == b && grid.right.kind == b && grid.bottom.kind == b &&
           grid.top.kind == b;
  };
  if (!all(periodic ? Boundary::Periodic : Boundary::PEC))
    throw UnsupportedBoundary("2D TE assembly supports all-periodic or all-PEC boundaries");

  MaxwellModel2D model;
  model.nx = grid.nx;
  model.ny = grid.ny;
  model.hx = grid.hx();
  model.hy = grid.hy();
  model.periodic = periodic;
  model.eps = material.eps_at(0);
  model.mu = material.mu_at(0);
  const double sigma = material.sigma_at(0);

  const int N = model.n_ex() + model.n_ey() + model.n_bz();
  const double vol = model.hx * model.hy;

  VectorXd flow_diag(N), effort_diag(N), r_diag(N);
  for (int s = 0; s < model.n_ex() + model.n_ey(); ++s) {
    flow_diag[s] = model.eps * vol;
    effort_diag[s] = 1.0;
    r_diag[s] = sigma * vol;
  }
  for (int s = model.n_ex() + model.n_ey(); s < N; ++s) {
    flow_diag[s] = vol;
    effort_diag[s] = 1.0 / model.mu;
    r_diag[s] = 0.0;
  }

  // Yee curls, scaled by the cell volume so J is exactly skew-symmetric:
  // the (Ex, Bz) pairs carry ±hx and the (Ey, Bz) pairs ∓hy.
  MatrixXd J = MatrixXd::Zero(N, N);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const int b = model.bz_index(i, j);
      const int exd = model.ex_index(i, j + 1);  // eps vol dEx/dt rows
      const int exs = model.ex_index(i, j);
      const int eyr = model.ey_index(i + 1, j);  // eps vol dEy/dt rows
      const int eys = model.ey_index(i, j);
      if (exd >= 0) {
        J(exd, b) -= model.hx;
        J(b, exd) += model.hx;
      }
      if (exs >= 0) {
        J(exs, b) += model.hx;
        J(b, exs) -= model.hx;
      }
      if (eyr >= 0) {
        J(eyr, b) += model.hy;
        J(b, eyr) -= model.hy;
      }
      if (eys >= 0) {
        J(eys, b) -= model.hy;
        J(b, eys) += model.hy;
      }
    }

  core::PhSystem sys;
  sys.n_state = N;
  sys.J = std::move(J);
  sys.R = r_diag.asDiagonal();
  attach_quadratic_energy(sys, flow_diag, effort_diag);

  model.ph = core::build_ph_system(std::move(sys));
  return model;
}

BoundaryFlow poynting_boundary_flow(const VectorXd& state, const MaxwellModel1D& model) {
  (void)state;
  if (model.periodic) return {0.0, true};
  return {0.0, false};  // tangential E vanishes at a PEC wall, so does B x E
}

BoundaryFlow poynting_boundary_flow(const VectorXd& state, const MaxwellModel2D& model) {
  (void)state;
  if (model.periodic) return {0.0, true};
  return {0.0, false};
}

double poynting_flow_prescribed_1d(double inv_mu_left, double e_left, double b_left,
                                   double inv_mu_right, double e_right, double b_right) {
  // (1/mu)(B x E)ᵀν with E = E_z, B = B_y: the integrand is (1/mu) B E x̂·ν.
  return inv_mu_right * b_right * e_right - inv_mu_left * b_left * e_left;
}

MaxwellRhs3 maxwell_rhs_3d_periodic(const fd::PeriodicGrid3& grid, double eps, double mu,
                                    double sigma, const fd::Field3& E, const fd::Field3& B) {
  if (eps <= 0.0 || mu <= 0.0 || sigma < 0.0)
    throw InvalidArgument("need eps > 0, mu > 0, sigma >= 0");
  if (E.cols() != grid.cells() || B.cols() != grid.cells())
    throw InvalidArgument("field sizes do not match the grid");
  MaxwellRhs3 out;
  out.dE.resize(3, grid.cells());
  out.dB.resize(3, grid.cells());
  for (int c = 0; c < grid.cells(); ++c) {
    out.dE.col(c) = (grid.curl_vector(B, c) / mu - sigma * E.col(c)) / eps;
    out.dB.col(c) = -grid.curl_vector(E, c);
  }
  return out;
}

}  // namespace mphs::em
