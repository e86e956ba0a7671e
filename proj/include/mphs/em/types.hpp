#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "mphs/errors.hpp"

namespace mphs::em {

using Complex = std::complex<double>;

class UnsupportedBoundary : public Error {
public:
  explicit UnsupportedBoundary(const std::string& detail)
      : Error("UnsupportedBoundary", detail) {}
};

class ZeroConductivity : public Error {
public:
  explicit ZeroConductivity(const std::string& detail) : Error("ZeroConductivity", detail) {}
};

class EmptyRegion : public Error {
public:
  explicit EmptyRegion(const std::string& detail) : Error("EmptyRegion", detail) {}
};

enum class Boundary { PEC, Periodic, Dirichlet, Neumann };

inline const char* boundary_name(Boundary b) {
  switch (b) {
    case Boundary::PEC: return "PEC";
    case Boundary::Periodic: return "periodic";
    case Boundary::Dirichlet: return "Dirichlet";
    default: return "Neumann";
  }
}

// Boundary condition with the prescribed value used by Dirichlet conditions.
struct BoundarySpec {
  Boundary kind = Boundary::PEC;
  double value = 0.0;
};

// Material coefficients, either uniform (size 1) or one entry per cell.
struct EmMaterial {
  Eigen::ArrayXd epsilon;  // permittivity, > 0
  Eigen::ArrayXd mu;       // permeability, > 0
  Eigen::ArrayXd sigma;    // conductivity, >= 0

  EmMaterial(double eps, double mu_, double sigma_ = 0.0)
      : epsilon(Eigen::ArrayXd::Constant(1, eps)),
        mu(Eigen::ArrayXd::Constant(1, mu_)),
        sigma(Eigen::ArrayXd::Constant(1, sigma_)) {
    validate();
  }

  EmMaterial(Eigen::ArrayXd eps, Eigen::ArrayXd mu_, Eigen::ArrayXd sigma_)
      : epsilon(std::move(eps)), mu(std::move(mu_)), sigma(std::move(sigma_)) {
    validate();
  }

  void validate() const {
    if (epsilon.size() == 0 || mu.size() == 0 || sigma.size() == 0)
      throw InvalidArgument("material arrays must be non-empty");
    if ((epsilon <= 0.0).any()) throw InvalidArgument("permittivity must be positive");
    if ((mu <= 0.0).any()) throw InvalidArgument("permeability must be positive");
    if ((sigma < 0.0).any()) throw InvalidArgument("conductivity must be non-negative");
  }

  bool uniform() const { return epsilon.size() == 1 && mu.size() == 1 && sigma.size() == 1; }

  double eps_at(Eigen::Index cell) const { return epsilon[epsilon.size() == 1 ? 0 : cell]; }
  double mu_at(Eigen::Index cell) const { return mu[mu.size() == 1 ? 0 : cell]; }
  double sigma_at(Eigen::Index cell) const { return sigma[sigma.size() == 1 ? 0 : cell]; }

  // Checks per-cell arrays against the expected cell count.
  void check_cells(Eigen::Index n_cells, const char* where) const {
    auto ok = [&](const Eigen::ArrayXd& a) { return a.size() == 1 || a.size() == n_cells; };
    if (!ok(epsilon) || !ok(mu) || !ok(sigma))
      throw InvalidArgument(std::string(where) + ": material arrays must be uniform or per-cell");
  }
};

// Uniform 1D interval [0, length] split into n_cells cells of width h().
struct EmGrid1D {
  int n_cells = 0;
  double length = 0.0;
  BoundarySpec left{}, right{};

  EmGrid1D(int n, double len) : n_cells(n), length(len) {
    if (n < 2 || len <= 0.0) throw InvalidArgument("grid needs n_cells >= 2 and positive length");
  }

  double h() const { return length / n_cells; }
  int n_nodes() const { return n_cells + 1; }
};

// Uniform tensor-product 2D grid on [0,lx] x [0,ly].
struct EmGrid2D {
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
  BoundarySpec left{}, right{}, bottom{}, top{};

  EmGrid2D(int nx_, int ny_, double lx_, double ly_) : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
    if (nx < 2 || ny < 2 || lx <= 0.0 || ly <= 0.0)
      throw InvalidArgument("grid needs nx,ny >= 2 and positive extents");
  }

  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  int n_cells() const { return nx * ny; }
  int n_nodes() const { return (nx + 1) * (ny + 1); }
  // Flat node index, column after column of constant j.
  int node(int i, int j) const { return i + (nx + 1) * j; }
  int cell(int i, int j) const { return i + nx * j; }
};

// Field pair on the staggered locations of a Maxwell model. For the 2D TE
// model E stacks the E_x block before the E_y block.
struct EmState {
  Eigen::VectorXd E, B;
};

// Time-harmonic amplitude u(t) = magnitude * cos(omega t + theta).
struct Phasor {
  double magnitude = 0.0;
  double omega = 0.0;
  double theta = 0.0;

  Complex value() const { return std::polar(magnitude, theta); }
};

}  // namespace mphs::em
