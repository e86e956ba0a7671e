#include "mphs/em/eddy.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <string>
#include <vector>

namespace mphs::em {

using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

// Node-averaged cell coefficient (up to four cells share a node).
double node_average(const EmGrid2D& grid, const EmMaterial& material, int i, int j,
                    double (EmMaterial::*at)(Eigen::Index) const) {
  double acc = 0.0;
  int count = 0;
  for (int cj = j - 1; cj <= j; ++cj)
    for (int ci = i - 1; ci <= i; ++ci) {
      if (ci < 0 || ci >= grid.nx || cj < 0 || cj >= grid.ny) continue;
      acc += (material.*at)(grid.cell(ci, cj));
      ++count;
    }
  return acc / count;
}

double inv_mu_edge_x(const EmGrid2D& grid, const EmMaterial& material, int i, int j) {
  const int cl = std::clamp(j - 1, 0, grid.ny - 1), cr = std::clamp(j, 0, grid.ny - 1);
  return 0.5 * (1.0 / material.mu_at(grid.cell(i, cl)) + 1.0 / material.mu_at(grid.cell(i, cr)));
}

double inv_mu_edge_y(const EmGrid2D& grid, const EmMaterial& material, int i, int j) {
  const int cl = std::clamp(i - 1, 0, grid.nx - 1), cr = std::clamp(i, 0, grid.nx - 1);
  return 0.5 * (1.0 / material.mu_at(grid.cell(cl, j)) + 1.0 / material.mu_at(grid.cell(cr, j)));
}

template <typename Scalar>
void check_node_field(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& f, Eigen::Index nn,
                      const char* name, bool allow_broadcast = false) {
  if (f.size() == nn) return;
  if (allow_broadcast && f.size() == 1) return;
  throw InvalidArgument(std::string(name) + ": expected a per-node field");
}

}  // namespace

VectorXd eddy_transient_rhs(const VectorXd& a3_node, const EmGrid2D& grid,
                            const EmMaterial& material, const VectorXd& grad_phi_node) {
  const int nn = grid.n_nodes();
  material.check_cells(grid.n_cells(), "eddy_transient_rhs");
  check_node_field(a3_node, nn, "a3");
  check_node_field(grad_phi_node, nn, "grad_phi", /*allow_broadcast=*/true);

  const double hx = grid.hx(), hy = grid.hy();
  auto a = [&](int i, int j) { return a3_node[grid.node(i, j)]; };

  VectorXd out = VectorXd::Zero(nn);
  for (int j = 1; j < grid.ny; ++j)
    for (int i = 1; i < grid.nx; ++i) {
      const double lap =
          (inv_mu_edge_x(grid, material, i, j) * (a(i + 1, j) - a(i, j)) -
           inv_mu_edge_x(grid, material, i - 1, j) * (a(i, j) - a(i - 1, j))) /
              (hx * hx) +
          (inv_mu_edge_y(grid, material, i, j) * (a(i, j + 1) - a(i, j)) -
           inv_mu_edge_y(grid, material, i, j - 1) * (a(i, j) - a(i, j - 1))) /
              (hy * hy);
      const double sigma_n = node_average(grid, material, i, j, &EmMaterial::sigma_at);
      if (sigma_n == 0.0)
        throw ZeroConductivity("interior node (" + std::to_string(i) + "," + std::to_string(j) +
                               ") has zero conductivity");
      const int row = grid.node(i, j);
      const double g = grad_phi_node.size() == 1 ? grad_phi_node[0] : grad_phi_node[row];
      out[row] = lap / sigma_n - g;
    }
  return out;
}

VectorXcd eddy_harmonic_solve(const EmGrid2D& grid, const EmMaterial& material, double omega,
                              const VectorXcd& grad_phi_node) {
  if (omega < 0.0) throw InvalidArgument("omega must be non-negative");
  const int nn = grid.n_nodes();
  material.check_cells(grid.n_cells(), "eddy_harmonic_solve");
  check_node_field(grad_phi_node, nn, "grad_phi", /*allow_broadcast=*/true);

  const double hx = grid.hx(), hy = grid.hy();
  const Complex jw(0.0, omega);

  std::vector<Eigen::Triplet<Complex>> trips;
  VectorXcd b = VectorXcd::Zero(nn);
  for (int j = 0; j <= grid.ny; ++j)
    for (int i = 0; i <= grid.nx; ++i) {
      const int row = grid.node(i, j);
      if (i == 0 || i == grid.nx || j == 0 || j == grid.ny) {
        trips.emplace_back(row, row, Complex(1.0, 0.0));
        continue;  // A_3 = 0 on the outer boundary
      }
      const double ce = inv_mu_edge_x(grid, material, i, j) / (hx * hx);
      const double cw = inv_mu_edge_x(grid, material, i - 1, j) / (hx * hx);
      const double cn = inv_mu_edge_y(grid, material, i, j) / (hy * hy);
      const double cs = inv_mu_edge_y(grid, material, i, j - 1) / (hy * hy);
      trips.emplace_back(row, grid.node(i + 1, j), Complex(-ce, 0.0));
      trips.emplace_back(row, grid.node(i - 1, j), Complex(-cw, 0.0));
      trips.emplace_back(row, grid.node(i, j + 1), Complex(-cn, 0.0));
      trips.emplace_back(row, grid.node(i, j - 1), Complex(-cs, 0.0));
      const double sigma_n = node_average(grid, material, i, j, &EmMaterial::sigma_at);
      const double eps_n = node_average(grid, material, i, j, &EmMaterial::eps_at);
      const Complex admittance = Complex(sigma_n, 0.0) + jw * eps_n;
      trips.emplace_back(row, row, Complex(ce + cw + cn + cs, 0.0) + jw * admittance);
      const Complex g = grad_phi_node.size() == 1 ? grad_phi_node[0] : grad_phi_node[row];
      b[row] = -admittance * g;
    }

  Eigen::SparseMatrix<Complex> A(nn, nn);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw SingularSystem("harmonic system factorization failed");
  return lu.solve(b);
}

Complex total_current(const EmGrid2D& grid, const EmMaterial& material, double omega,
                      const VectorXcd& a3_node, const VectorXcd& grad_phi_node,
                      const std::vector<bool>& cell_mask) {
  const int nn = grid.n_nodes();
  material.check_cells(grid.n_cells(), "total_current");
  check_node_field(a3_node, nn, "a3", /*allow_broadcast=*/true);
  check_node_field(grad_phi_node, nn, "grad_phi", /*allow_broadcast=*/true);
  if (static_cast<int>(cell_mask.size()) != grid.n_cells())
    throw InvalidArgument("cell mask size does not match the grid");
  if (std::none_of(cell_mask.begin(), cell_mask.end(), [](bool m) { return m; }))
    throw EmptyRegion("total_current integration mask selects no cells");

  auto corner_mean = [&](const VectorXcd& f, int i, int j) -> Complex {
    if (f.size() == 1) return f[0];
    return 0.25 * (f[grid.node(i, j)] + f[grid.node(i + 1, j)] + f[grid.node(i, j + 1)] +
                   f[grid.node(i + 1, j + 1)]);
  };

  const double area = grid.hx() * grid.hy();
  const Complex jw(0.0, omega);
  Complex total(0.0, 0.0);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const int c = grid.cell(i, j);
      if (!cell_mask[c]) continue;
      const Complex admittance(material.sigma_at(c), omega * material.eps_at(c));
      total += admittance * (-jw * corner_mean(a3_node, i, j) - corner_mean(grad_phi_node, i, j)) *
               area;
    }
  return total;
}

}  // namespace mphs::em
