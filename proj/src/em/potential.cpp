#include "mphs/em/potential.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <vector>

namespace mphs::em {

using Eigen::VectorXd;
using Triplet = Eigen::Triplet<double>;

namespace {

double broadcast(const VectorXd& field, Eigen::Index i, Eigen::Index expected, const char* name) {
  if (field.size() == 1) return field[0];
  if (field.size() != expected)
    throw InvalidArgument(std::string(name) + ": expected per-node field or a single value");
  return field[i];
}

bool fixes_value(Boundary b) { return b == Boundary::Dirichlet || b == Boundary::PEC; }

void check_face(const BoundarySpec& spec, const char* face) {
  if (spec.kind == Boundary::Periodic)
    throw UnsupportedBoundary(std::string("potential solve does not support a periodic ") + face +
                              " face");
}

VectorXd sparse_solve(const Eigen::SparseMatrix<double>& A, const VectorXd& b) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SingularSystem("potential system factorization failed");
  return lu.solve(b);
}

}  // namespace

PotentialSolution1D solve_potential(const EmGrid1D& grid, const EmMaterial& material,
                                    const VectorXd& rho_node) {
  const int n = grid.n_cells;
  const int nn = grid.n_nodes();
  const double h = grid.h();
  material.check_cells(n, "solve_potential");
  check_face(grid.left, "left");
  check_face(grid.right, "right");
  if (!fixes_value(grid.left.kind) && !fixes_value(grid.right.kind))
    throw SingularSystem("all-Neumann potential problem has no unique solution");

  std::vector<Triplet> trips;
  VectorXd b(nn);
  for (int i = 0; i < nn; ++i) {
    const bool left_bd = i == 0, right_bd = i == nn - 1;
    if ((left_bd && fixes_value(grid.left.kind)) || (right_bd && fixes_value(grid.right.kind))) {
      trips.emplace_back(i, i, 1.0);
      b[i] = left_bd ? grid.left.value : grid.right.value;
      continue;
    }
    // Flux balance over the (possibly half) dual cell around node i; a
    // zero-flux Neumann face simply drops the outside term and halves the
    // control volume, which doubles the remaining coefficient.
    const double scale = (left_bd || right_bd) ? 2.0 : 1.0;
    double diag = 0.0;
    if (!right_bd) {
      const double eps_e = material.eps_at(i);  // cell to the right of node i
      trips.emplace_back(i, i + 1, scale * eps_e / (h * h));
      diag -= scale * eps_e / (h * h);
    }
    if (!left_bd) {
      const double eps_w = material.eps_at(i - 1);
      trips.emplace_back(i, i - 1, scale * eps_w / (h * h));
      diag -= scale * eps_w / (h * h);
    }
    trips.emplace_back(i, i, diag);
    b[i] = -broadcast(rho_node, i, nn, "rho");
  }

  Eigen::SparseMatrix<double> A(nn, nn);
  A.setFromTriplets(trips.begin(), trips.end());

  PotentialSolution1D out;
  out.phi = sparse_solve(A, b);

  out.E.resize(nn);
  out.E[0] = -(-3.0 * out.phi[0] + 4.0 * out.phi[1] - out.phi[2]) / (2.0 * h);
  for (int i = 1; i < nn - 1; ++i) out.E[i] = -(out.phi[i + 1] - out.phi[i - 1]) / (2.0 * h);
  out.E[nn - 1] = -(3.0 * out.phi[nn - 1] - 4.0 * out.phi[nn - 2] + out.phi[nn - 3]) / (2.0 * h);

  out.J.resize(nn);
  out.D.resize(nn);
  for (int i = 0; i < nn; ++i) {
    const int cl = std::max(i - 1, 0), cr = std::min(i, n - 1);
    const double eps_i = 0.5 * (material.eps_at(cl) + material.eps_at(cr));
    const double sig_i = 0.5 * (material.sigma_at(cl) + material.sigma_at(cr));
    out.J[i] = sig_i * out.E[i];
    out.D[i] = eps_i * out.E[i];
  }
  return out;
}

PotentialSolution2D solve_potential(const EmGrid2D& grid, const EmMaterial& material,
                                    const VectorXd& rho_node) {
  const int nx = grid.nx, ny = grid.ny;
  const int nn = grid.n_nodes();
  const double hx = grid.hx(), hy = grid.hy();
  material.check_cells(grid.n_cells(), "solve_potential");
  for (const auto* f : {&grid.left, &grid.right, &grid.bottom, &grid.top})
    check_face(*f, "boundary");
  if (!fixes_value(grid.left.kind) && !fixes_value(grid.right.kind) &&
      !fixes_value(grid.bottom.kind) && !fixes_value(grid.top.kind))
    throw SingularSystem("all-Neumann potential problem has no unique solution");

  // ε averaged across the two cells flanking each lattice edge (clamped at the
  // domain edge where only one cell exists).
  auto cell_eps = [&](int ci, int cj) {
    ci = std::clamp(ci, 0, nx - 1);
    cj = std::clamp(cj, 0, ny - 1);
    return material.eps_at(grid.cell(ci, cj));
  };
  auto eps_edge_x = [&](int i, int j) {  // edge from node (i,j) to (i+1,j)
    return 0.5 * (cell_eps(i, j - 1) + cell_eps(i, j));
  };
  auto eps_edge_y = [&](int i, int j) {  // edge from node (i,j) to (i,j+1)
    return 0.5 * (cell_eps(i - 1, j) + cell_eps(i, j));
  };

  std::vector<Triplet> trips;
  VectorXd b(nn);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const int row = grid.node(i, j);
      const bool on_left = i == 0, on_right = i == nx, on_bottom = j == 0, on_top = j == ny;
      const bool fixed = (on_left && fixes_value(grid.left.kind)) ||
                         (on_right && fixes_value(grid.right.kind)) ||
                         (on_bottom && fixes_value(grid.bottom.kind)) ||
                         (on_top && fixes_value(grid.top.kind));
      if (fixed) {
        trips.emplace_back(row, row, 1.0);
        double v = 0.0;  // edges and corners take the first fixed face, x before y
        if (on_left && fixes_value(grid.left.kind)) v = grid.left.value;
        else if (on_right && fixes_value(grid.right.kind)) v = grid.right.value;
        else if (on_bottom && fixes_value(grid.bottom.kind)) v = grid.bottom.value;
        else v = grid.top.value;
        b[row] = v;
        continue;
      }
      const double sx = (on_left || on_right) ? 2.0 : 1.0;  // halved control volume
      const double sy = (on_bottom || on_top) ? 2.0 : 1.0;
      double diag = 0.0;
      if (!on_right) {
        const double c = sx * eps_edge_x(i, j) / (hx * hx);
        trips.emplace_back(row, grid.node(i + 1, j), c);
        diag -= c;
      }
      if (!on_left) {
        const double c = sx * eps_edge_x(i - 1, j) / (hx * hx);
        trips.emplace_back(row, grid.node(i - 1, j), c);
        diag -= c;
      }
      if (!on_top) {
        const double c = sy * eps_edge_y(i, j) / (hy * hy);
        trips.emplace_back(row, grid.node(i, j + 1), c);
        diag -= c;
      }
      if (!on_bottom) {
        const double c = sy * eps_edge_y(i, j - 1) / (hy * hy);
        trips.emplace_back(row, grid.node(i, j - 1), c);
        diag -= c;
      }
      trips.emplace_back(row, row, diag);
      b[row] = -broadcast(rho_node, row, nn, "rho");
    }

  Eigen::SparseMatrix<double> A(nn, nn);
  A.setFromTriplets(trips.begin(), trips.end());

  PotentialSolution2D out;
  out.phi = sparse_solve(A, b);

  auto phi_at = [&](int i, int j) { return out.phi[grid.node(i, j)]; };
  out.E.resize(2, nn);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const int s = grid.node(i, j);
      double dx, dy;
      if (i == 0) dx = (-3.0 * phi_at(0, j) + 4.0 * phi_at(1, j) - phi_at(2, j)) / (2.0 * hx);
      else if (i == nx) dx = (3.0 * phi_at(nx, j) - 4.0 * phi_at(nx - 1, j) + phi_at(nx - 2, j)) / (2.0 * hx);
      else dx = (phi_at(i + 1, j) - phi_at(i - 1, j)) / (2.0 * hx);
      if (j == 0) dy = (-3.0 * phi_at(i, 0) + 4.0 * phi_at(i, 1) - phi_at(i, 2)) / (2.0 * hy);
      else if (j == ny) dy = (3.0 * phi_at(i, ny) - 4.0 * phi_at(i, ny - 1) + phi_at(i, ny - 2)) / (2.0 * hy);
      else dy = (phi_at(i, j + 1) - phi_at(i, j - 1)) / (2.0 * hy);
      out.E.col(s) = Eigen::Vector2d(-dx, -dy);
    }

  out.J.resize(2, nn);
  out.D.resize(2, nn);
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      const int s = grid.node(i, j);
      double eps_n = 0.0, sig_n = 0.0;
      int count = 0;
      for (int cj = j - 1; cj <= j; ++cj)
        for (int ci = i - 1; ci <= i; ++ci) {
          if (ci < 0 || ci >= nx || cj < 0 || cj >= ny) continue;
          eps_n += material.eps_at(grid.cell(ci, cj));
          sig_n += material.sigma_at(grid.cell(ci, cj));
          ++count;
        }
      eps_n /= count;
      sig_n /= count;
      out.J.col(s) = sig_n * out.E.col(s);
      out.D.col(s) = eps_n * out.E.col(s);
    }
  return out;
}

}  // namespace mphs::em
