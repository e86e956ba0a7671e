#include <mphs/thermal/heat.hpp>

#include <Eigen/LU>
#include <cmath>
#include <string>
#include <utility>

namespace mphs::thermal {

using core::Matrix;
using core::Vector;

ThermalBC ThermalBC::robin(double w1, double w2, double gamma) {
  if (w1 == 0.0 && w2 == 0.0)
    throw IllPosedBC("Robin weights (w1, w2) must not both vanish");
  return {Kind::Robin, w1, w2, gamma};
}

namespace {

// Conductivity along a grid axis; the lattice stencil has no mixed-derivative
// terms, so off-diagonal conductivity entries are not representable.
double axis_conductivity(const ThermalMaterial& material, int axis) {
  const Eigen::Matrix3d& k = material.kappa;
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j && std::abs(k(i, j)) > 1e-14 * scale)
        throw InvalidArgument("grid assembly requires a diagonal conductivity tensor");
  const double kappa = k(axis, axis);
  if (!(kappa > 0.0))
    throw InvalidArgument("conductivity along a grid axis must be positive");
  return kappa;
}

// Eliminates the face value from w1·(q·ν) + w2·θ_face = gamma using the
// half-cell conduction relation q·ν = κ (θ_cell - θ_face) / d with d the
// center-to-face distance, yielding q·ν(θ_cell) = q0 + q_theta·θ_cell.
std::pair<double, double> face_flux_coefficients(const ThermalBC& bc, double d, double kappa) {
  const double denom = bc.w1 - bc.w2 * d / kappa;
  if (std::abs(denom) <= 1e-12 * (std::abs(bc.w1) + std::abs(bc.w2) * d / kappa))
    throw IllPosedBC("boundary condition is degenerate at this grid resolution");
  return {bc.gamma / denom, -bc.w2 / denom};
}

double boundary_inflow_of(const std::vector<BoundaryFace>& faces, const Vector& theta) {
  double total = 0.0;
  for (const BoundaryFace& f : faces)
    total -= (f.q0 + f.q_theta * theta[f.cell]) * f.area;
  return total;
}

// Completes the PhSystem of a heat assembly from its face lists. The state
// is the cell temperature vector; n cells of uniform volume.
void finish_heat_system(detail::HeatAssembly& out, const ThermalMaterial& material, int n,
                        double theta_ref) {
  const double rho = material.rho;
  const double vol = out.cell_volume;
  out.source_power_total = out.source_density.sum() * vol;

  core::PhSystem sys;
  sys.n_state = n;
  sys.n_input = 0;

  sys.hamiltonian = [material, rho, vol](const Vector& x) {
    double h_total = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      h_total += rho * internal_energy(material, x[i]) * vol;
    return h_total;
  };

  sys.effort = [n](const Vector&) { return Vector::Ones(n); };

  sys.flow_map = [material, rho, vol, n](const Vector& x) {
    Matrix e = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      if (!(x[i] > 0.0))
        throw NonPositiveTemperature("cell " + std::to_string(i) + " reached θ = " +
                                     std::to_string(x[i]) + " K");
      const double c = heat_coefficients(material, x[i]).c;
      if (!(c > 0.0))
        throw InvalidArgument("specific heat is not positive at θ = " + std::to_string(x[i]));
      e(i, i) = rho * c * vol;
    }
    return e;
  };
  sys.E = sys.flow_map(Vector::Constant(n, theta_ref));

  // Skew structure: entry (a, b) carries the conductive flux from b into a,
  // so J(θ)·1 reproduces the interior diffusion and 1ᵀJ(θ)·1 = 0 makes the
  // total internal energy change only through sources and boundaries.
  const std::vector<InteriorFace> interior = out.interior;
  sys.structure = [interior, n](const Vector& x) {
    Matrix j = Matrix::Zero(n, n);
    for (const InteriorFace& f : interior) {
      const double flux = f.coeff * (x[f.b] - x[f.a]);
      j(f.a, f.b) += flux;
      j(f.b, f.a) -= flux;
    }
    return j;
  };

  const std::vector<BoundaryFace> boundary = out.boundary;
  const Vector source = out.source_density;
  sys.rhs = [interior, boundary, source, vol](const Vector& x, const Vector&) {
    Vector g = source * vol;
    for (const InteriorFace& f : interior) {
      const double flux = f.coeff * (x[f.b] - x[f.a]);
      g[f.a] += flux;
      g[f.b] -= flux;
    }
    for (const BoundaryFace& f : boundary)
      g[f.cell] -= (f.q0 + f.q_theta * x[f.cell]) * f.area;
    return g;
  };

  const double source_power = out.source_power_total;
  sys.supplied_power = [boundary, source_power](const Vector& x, const Vector&) {
    return source_power + boundary_inflow_of(boundary, x);
  };

  for (double level : {1.0, 0.7, 2.2})
    sys.validation_states.push_back(Vector::Constant(n, level * theta_ref));
  Vector ramp(n), wave(n);
  for (int i = 0; i < n; ++i) {
    ramp[i] = theta_ref * (1.0 + static_cast<double>(i) / n);
    wave[i] = theta_ref * (1.5 + 0.5 * std::sin(2.0 * 3.14159265358979323846 * i / n));
  }
  sys.validation_states.push_back(ramp);
  sys.validation_states.push_back(wave);

  out.ph = core::build_ph_system(std::move(sys));
}

void check_common(double theta_ref) {
  if (!(theta_ref > 0.0)) throw InvalidArgument("reference temperature must be positive");
}

}  // namespace

namespace detail {

double HeatAssembly::boundary_inflow(const Vector& theta) const {
  return boundary_inflow_of(boundary, theta);
}

Vector HeatAssembly::steady_state() const {
  const int n = ph.n_state;
  const Vector empty;
  const Vector b = ph.rhs_at(Vector::Zero(n), empty);
  Matrix lhs(n, n);
  for (int j = 0; j < n; ++j)
    lhs.col(j) = ph.rhs_at(Vector::Unit(n, j), empty) - b;
  Eigen::FullPivLU<Matrix> lu(lhs);
  if (!lu.isInvertible())
    throw IllPosedBC("steady-state problem is singular; no boundary condition fixes the "
                     "temperature level");
  return lu.solve(-b);
}

}  // namespace detail

HeatModel1D assemble_heat_ph(const HeatGrid1D& grid, const ThermalMaterial& material,
                             const Field1D& viscous_heating, const Field1D& heat_supply,
                             double theta_ref) {
  if (grid.n_cells < 2) throw InvalidArgument("1D heat grid needs at least 2 cells");
  if (!(grid.length > 0.0)) throw InvalidArgument("1D heat grid length must be positive");
  check_common(theta_ref);

  HeatModel1D model(material);
  model.n_cells = grid.n_cells;
  model.length = grid.length;
  model.h = grid.h();
  model.cell_volume = model.h;  // unit cross-section

  const double kx = axis_conductivity(material, 0);
  for (int i = 0; i + 1 < grid.n_cells; ++i)
    model.interior.push_back({i, i + 1, kx / model.h});

  const auto [lq0, lqt] = face_flux_coefficients(grid.left, 0.5 * model.h, kx);
  const auto [rq0, rqt] = face_flux_coefficients(grid.right, 0.5 * model.h, kx);
  model.boundary.push_back({0, lq0, lqt, 1.0});
  model.boundary.push_back({grid.n_cells - 1, rq0, rqt, 1.0});

  model.source_density = Vector::Zero(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i) {
    const double x = model.cell_center(i);
    if (viscous_heating) model.source_density[i] += viscous_heating(x);
    if (heat_supply) model.source_density[i] += material.rho * heat_supply(x);
  }

  finish_heat_system(model, material, grid.n_cells, theta_ref);
  return model;
}

HeatModel2D assemble_heat_ph(const HeatGrid2D& grid, const ThermalMaterial& material,
                             const Field2D& viscous_heating, const Field2D& heat_supply,
                             double theta_ref) {
  if (grid.nx < 2 || grid.ny < 2) throw InvalidArgument("2D heat grid needs at least 2x2 cells");
  if (!(grid.lx > 0.0) || !(grid.ly > 0.0))
    throw InvalidArgument("2D heat grid extents must be positive");
  check_common(theta_ref);

  HeatModel2D model(material);
  model.nx = grid.nx;
  model.ny = grid.ny;
  model.hx = grid.hx();
  model.hy = grid.hy();
  model.cell_volume = model.hx * model.hy;  // unit thickness

  const double kx = axis_conductivity(material, 0);
  const double ky = axis_conductivity(material, 1);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i + 1 < grid.nx; ++i)
      model.interior.push_back({grid.cell(i, j), grid.cell(i + 1, j), kx * model.hy / model.hx});
  for (int j = 0; j + 1 < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      model.interior.push_back({grid.cell(i, j), grid.cell(i, j + 1), ky * model.hx / model.hy});

  const auto [lq0, lqt] = face_flux_coefficients(grid.left, 0.5 * model.hx, kx);
  const auto [rq0, rqt] = face_flux_coefficients(grid.right, 0.5 * model.hx, kx);
  const auto [bq0, bqt] = face_flux_coefficients(grid.bottom, 0.5 * model.hy, ky);
  const auto [tq0, tqt] = face_flux_coefficients(grid.top, 0.5 * model.hy, ky);
  for (int j = 0; j < grid.ny; ++j) {
    model.boundary.push_back({grid.cell(0, j), lq0, lqt, model.hy});
    model.boundary.push_back({grid.cell(grid.nx - 1, j), rq0, rqt, model.hy});
  }
  for (int i = 0; i < grid.nx; ++i) {
    model.boundary.push_back({grid.cell(i, 0), bq0, bqt, model.hx});
    model.boundary.push_back({grid.cell(i, grid.ny - 1), tq0, tqt, model.hx});
  }

  model.source_density = Vector::Zero(grid.n_cells());
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const double x = model.cell_center_x(i), y = model.cell_center_y(j);
      if (viscous_heating) model.source_density[grid.cell(i, j)] += viscous_heating(x, y);
      if (heat_supply) model.source_density[grid.cell(i, j)] += material.rho * heat_supply(x, y);
    }

  finish_heat_system(model, material, grid.n_cells(), theta_ref);
  return model;
}

}  // namespace mphs::thermal
