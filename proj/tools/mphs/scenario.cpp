#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <mphs/core/integrate.hpp>
#include <mphs/em/eddy.hpp>
#include <mphs/em/maxwell.hpp>
#include <mphs/em/potential.hpp>
#include <mphs/errors.hpp>
#include <mphs/io/serialize.hpp>
#include <mphs/mech/elastodynamics.hpp>
#include <mphs/mech/rotor.hpp>
#include <mphs/rng.hpp>
#include <mphs/thermal/heat.hpp>
#include <mphs/thermal/network.hpp>

#include "app.hpp"
#include "ph_bridge.hpp"
#include "scenario_json.hpp"

namespace mphs::cli {

namespace {

using json = nlohmann::json;
using Eigen::VectorXd;

constexpr double kPi = 3.14159265358979323846;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Integration {
  double dt = 0.0;
  double t_end = 0.0;
};

Integration integration_of(const json& j) {
  const json& block = require(j, "integration");
  Integration integ;
  integ.dt = number(block, "dt");
  integ.t_end = number(block, "t_end");
  if (!(integ.dt > 0.0) || !(integ.t_end >= integ.dt))
    throw InvalidArgument("integration needs dt > 0 and t_end >= dt");
  return integ;
}

std::vector<std::string> numbered(const std::string& prefix, int count, int start = 0) {
  std::vector<std::string> labels;
  labels.reserve(count);
  for (int i = 0; i < count; ++i) labels.push_back(prefix + std::to_string(start + i));
  return labels;
}

// Everything a scenario handler produces; the driver turns it into files.
struct Outcome {
  std::vector<std::string> labels;
  std::vector<double> times;
  std::vector<VectorXd> rows;
  std::string trajectory_override;  // used instead of labels/rows when set
  core::EnergyTrace trace;
  std::map<std::string, double> residuals;
  std::map<std::string, std::string> extra_artifacts;  // name -> path (already written)
  json summary;                                        // free-form scalar results
};

void fill_from_simulation(Outcome& out, const core::SimulateResult& result) {
  out.times = result.trace.times;
  out.rows = result.states;
  out.trace = result.trace;
  out.residuals["max_energy_balance"] = result.trace.max_abs_residual();
}

double relative_energy_drift(const core::EnergyTrace& trace) {
  if (trace.hamiltonian.empty()) return 0.0;
  const double h0 = trace.hamiltonian.front();
  double worst = 0.0;
  for (double h : trace.hamiltonian) worst = std::max(worst, std::abs(h - h0));
  return worst / std::max(1e-300, std::abs(h0));
}

em::EmMaterial material_of(const json& j) {
  const json& m = require(j, "material");
  return em::EmMaterial(number_or(m, "epsilon", 1.0), number_or(m, "mu", 1.0),
                        number_or(m, "sigma", 0.0));
}

em::Boundary boundary_kind(const std::string& name) {
  if (name == "PEC") return em::Boundary::PEC;
  if (name == "periodic") return em::Boundary::Periodic;
  throw InvalidArgument("boundary must be 'PEC' or 'periodic', got '" + name + "'");
}

// ---------------------------------------------------------------------------
// Electromagnetic scenarios
// ---------------------------------------------------------------------------

Outcome run_maxwell1d(const json& j, const std::string&) {
  const int n_cells = integer_or(j, "n_cells", 64);
  const double length = number_or(j, "length", 1.0);
  em::EmGrid1D grid(n_cells, length);
  const em::Boundary kind = boundary_kind(string_or(j, "boundary", "PEC"));
  grid.left.kind = grid.right.kind = kind;

  const auto model = em::assemble_maxwell_ph(grid, material_of(j));
  const json initial = j.value("initial", json::object());
  const int mode = initial.value("mode", 1);
  const double amp = initial.value("amplitude", 1.0);

  VectorXd e0 = VectorXd::Zero(model.n_e());
  for (int i = 0; i < model.n_e(); ++i) {
    const double x = model.periodic ? i * model.h : (i + 1) * model.h;
    e0[i] = model.periodic ? amp * std::sin(2.0 * kPi * mode * x / length)
                           : amp * std::sin(kPi * mode * x / length);
  }
  const VectorXd x0 = model.pack(e0, VectorXd::Zero(model.n_b()));

  const Integration integ = integration_of(j);
  const auto result = core::simulate(model.ph, x0, VectorXd(VectorXd::Zero(model.ph.n_input)),
                                     integ.t_end, integ.dt);

  Outcome out;
  fill_from_simulation(out, result);
  out.labels = numbered("E_", model.n_e());
  const auto b_labels = numbered("B_", model.n_b());
  out.labels.insert(out.labels.end(), b_labels.begin(), b_labels.end());
  out.residuals["rel_energy_drift"] = relative_energy_drift(result.trace);
  return out;
}

Outcome run_maxwell2d(const json& j, const std::string&) {
  const int nx = integer_or(j, "nx", 8), ny = integer_or(j, "ny", 8);
  const double lx = number_or(j, "lx", 1.0), ly = number_or(j, "ly", 1.0);
  em::EmGrid2D grid(nx, ny, lx, ly);
  const em::Boundary kind = boundary_kind(string_or(j, "boundary", "PEC"));
  grid.left.kind = grid.right.kind = grid.bottom.kind = grid.top.kind = kind;

  const auto model = em::assemble_maxwell_ph(grid, material_of(j));
  const json initial = j.value("initial", json::object());
  const double amp = initial.value("amplitude", 1.0);
  int kx = 1, ky = 1;
  if (initial.contains("mode")) {
    const json& m = initial["mode"];
    if (!m.is_array() || m.size() != 2) throw InvalidArgument("initial.mode must be [kx, ky]");
    kx = m[0].get<int>();
    ky = m[1].get<int>();
  }

  VectorXd bz0(model.n_bz());
  for (int jj = 0; jj < ny; ++jj)
    for (int ii = 0; ii < nx; ++ii) {
      const double x = (ii + 0.5) * model.hx, y = (jj + 0.5) * model.hy;
      bz0[model.bz_index(ii, jj)] =
          model.periodic
              ? amp * std::cos(2.0 * kPi * kx * x / lx) * std::cos(2.0 * kPi * ky * y / ly)
              : amp * std::cos(kPi * kx * x / lx) * std::cos(kPi * ky * y / ly);
    }
  const VectorXd x0 =
      model.pack(VectorXd::Zero(model.n_ex()), VectorXd::Zero(model.n_ey()), bz0);

  const Integration integ = integration_of(j);
  const auto result = core::simulate(model.ph, x0, VectorXd(VectorXd::Zero(model.ph.n_input)),
                                     integ.t_end, integ.dt);

  Outcome out;
  fill_from_simulation(out, result);
  out.labels = numbered("Ex_", model.n_ex());
  for (const auto& l : numbered("Ey_", model.n_ey())) out.labels.push_back(l);
  for (const auto& l : numbered("Bz_", model.n_bz())) out.labels.push_back(l);
  out.residuals["rel_energy_drift"] = relative_energy_drift(result.trace);

  const VectorXd divb0 = model.div_b(x0);
  const VectorXd divd0 = model.div_d(x0);
  double divb_drift = 0.0, divd_drift = 0.0;
  for (const auto& x : result.states) {
    divb_drift = std::max(divb_drift, (model.div_b(x) - divb0).cwiseAbs().maxCoeff());
    divd_drift = std::max(divd_drift, (model.div_d(x) - divd0).cwiseAbs().maxCoeff());
  }
  out.residuals["div_b_drift"] = divb_drift;
  out.residuals["div_d_drift"] = divd_drift;
  return out;
}

Outcome run_eddy(const json& j, const std::string& prefix) {
  const int nx = integer_or(j, "nx", 8), ny = integer_or(j, "ny", 8);
  const double lx = number_or(j, "lx", 1.0), ly = number_or(j, "ly", 1.0);
  em::EmGrid2D grid(nx, ny, lx, ly);
  const em::EmMaterial mat = material_of(j);
  const double omega = number(j, "omega");
  const double source = number_or(require(j, "source"), "amplitude", 1.0);

  const int n_nodes = grid.n_nodes();
  const Eigen::VectorXcd g = Eigen::VectorXcd::Constant(n_nodes, source);
  const Eigen::VectorXcd a3 = em::eddy_harmonic_solve(grid, mat, omega, g);

  const std::vector<bool> mask(static_cast<std::size_t>(grid.n_cells()), true);
  const em::Complex current = em::total_current(grid, mat, omega, a3, g, mask);

  // Cell-centered time-averaged magnetic energy and Joule loss.
  double e_mag = 0.0, p_joule = 0.0;
  const double area = grid.hx() * grid.hy();
  for (int jj = 0; jj < ny; ++jj)
    for (int ii = 0; ii < nx; ++ii) {
      const em::Complex a00 = a3[grid.node(ii, jj)], a10 = a3[grid.node(ii + 1, jj)];
      const em::Complex a01 = a3[grid.node(ii, jj + 1)], a11 = a3[grid.node(ii + 1, jj + 1)];
      const em::Complex dax = ((a10 + a11) - (a00 + a01)) / (2.0 * grid.hx());
      const em::Complex day = ((a01 + a11) - (a00 + a10)) / (2.0 * grid.hy());
      const em::Complex a_c = 0.25 * (a00 + a10 + a01 + a11);
      const int cell = grid.cell(ii, jj);
      e_mag += 0.25 / mat.mu_at(cell) * (std::norm(dax) + std::norm(day)) * area;
      const em::Complex e3 = em::Complex(0.0, -omega) * a_c - g[grid.node(ii, jj)];
      p_joule += 0.5 * mat.sigma_at(cell) * std::norm(e3) * area;
    }

  Outcome out;
  out.labels = numbered("a3_re_", n_nodes);
  for (const auto& l : numbered("a3_im_", n_nodes)) out.labels.push_back(l);
  VectorXd row(2 * n_nodes);
  row.head(n_nodes) = a3.real();
  row.tail(n_nodes) = a3.imag();
  out.times = {0.0};
  out.rows = {row};
  out.trace.times = {0.0};
  out.trace.hamiltonian = {e_mag};
  out.trace.dissipated_power = {p_joule};
  out.trace.supplied_power = {p_joule};
  out.trace.balance_residual = {0.0};

  Eigen::MatrixXd a_re(nx + 1, ny + 1), a_im(nx + 1, ny + 1);
  for (int jj = 0; jj <= ny; ++jj)
    for (int ii = 0; ii <= nx; ++ii) {
      a_re(ii, jj) = a3[grid.node(ii, jj)].real();
      a_im(ii, jj) = a3[grid.node(ii, jj)].imag();
    }
  io::write_text_file(prefix + "_a3_re.csv", io::field_csv(a_re));
  io::write_text_file(prefix + "_a3_im.csv", io::field_csv(a_im));
  io::write_text_file(prefix + "_grid.json",
                      io::grid_header_json(grid, "A_3 on the node lattice"));
  out.extra_artifacts["a3_real"] = prefix + "_a3_re.csv";
  out.extra_artifacts["a3_imag"] = prefix + "_a3_im.csv";
  out.extra_artifacts["grid_header"] = prefix + "_grid.json";

  out.summary["total_current"] = {current.real(), current.imag()};
  out.summary["magnetic_energy_avg"] = e_mag;
  out.summary["joule_loss_avg"] = p_joule;
  return out;
}

em::BoundarySpec dirichlet_spec(const json& face) {
  const std::string kind = string_or(face, "kind", "dirichlet");
  if (kind == "dirichlet") return {em::Boundary::Dirichlet, number_or(face, "value", 0.0)};
  if (kind == "neumann") return {em::Boundary::Neumann, 0.0};
  throw InvalidArgument("potential boundaries must be 'dirichlet' or 'neumann'");
}

Outcome run_potential(const json& j, const std::string& prefix) {
  const int dimension = integer_or(j, "dimension", j.contains("nx") ? 2 : 1);
  const em::EmMaterial mat = material_of(j);
  if (mat.epsilon.size() != 1)
    throw InvalidArgument("potential scenarios use a uniform permittivity");
  const double rho = number_or(j, "rho", 0.0);
  const json bc = j.value("boundary_values", json::object());

  Outcome out;
  if (dimension == 1) {
    em::EmGrid1D grid(integer_or(j, "n_cells", 32), number_or(j, "length", 1.0));
    grid.left = dirichlet_spec(bc.value("left", json::object()));
    grid.right = dirichlet_spec(bc.value("right", json::object()));
    const auto sol = em::solve_potential(grid, mat, VectorXd::Constant(1, rho));

    out.labels = numbered("phi_", grid.n_nodes());
    out.times = {0.0};
    out.rows = {sol.phi};

    const double h = grid.h();
    double defect = 0.0;
    for (int i = 1; i < grid.n_nodes() - 1; ++i)
      defect = std::max(defect, std::abs(mat.eps_at(0) *
                                             (sol.phi[i + 1] - 2.0 * sol.phi[i] + sol.phi[i - 1]) /
                                             (h * h) +
                                         rho));
    out.residuals["stencil_defect"] = defect;

    double h_energy = 0.0;
    for (int i = 0; i < grid.n_nodes(); ++i) {
      const double w = (i == 0 || i == grid.n_nodes() - 1) ? 0.5 * h : h;
      h_energy += 0.5 * mat.eps_at(0) * sol.E[i] * sol.E[i] * w;
    }
    out.trace.times = {0.0};
    out.trace.hamiltonian = {h_energy};
    out.trace.dissipated_power = {0.0};
    out.trace.supplied_power = {0.0};
    out.trace.balance_residual = {0.0};

    io::write_text_file(prefix + "_phi.csv", io::field_csv(sol.phi));
    io::write_text_file(prefix + "_grid.json",
                        io::grid_header_json(grid, "phi on the node lattice"));
  } else if (dimension == 2) {
    em::EmGrid2D grid(integer_or(j, "nx", 16), integer_or(j, "ny", 16),
                      number_or(j, "lx", 1.0), number_or(j, "ly", 1.0));
    grid.left = dirichlet_spec(bc.value("left", json::object()));
    grid.right = dirichlet_spec(bc.value("right", json::object()));
    grid.bottom = dirichlet_spec(bc.value("bottom", json::object()));
    grid.top = dirichlet_spec(bc.value("top", json::object()));
    const auto sol = em::solve_potential(grid, mat, VectorXd::Constant(1, rho));

    out.labels = numbered("phi_", static_cast<int>(sol.phi.size()));
    out.times = {0.0};
    out.rows = {sol.phi};

    Eigen::MatrixXd phi(grid.nx + 1, grid.ny + 1);
    for (int jj = 0; jj <= grid.ny; ++jj)
      for (int ii = 0; ii <= grid.nx; ++ii) phi(ii, jj) = sol.phi[grid.node(ii, jj)];
    double defect = 0.0;
    const double hx2 = grid.hx() * grid.hx(), hy2 = grid.hy() * grid.hy();
    for (int jj = 1; jj < grid.ny; ++jj)
      for (int ii = 1; ii < grid.nx; ++ii)
        defect = std::max(
            defect,
            std::abs(mat.eps_at(0) * ((phi(ii + 1, jj) - 2 * phi(ii, jj) + phi(ii - 1, jj)) / hx2 +
                                      (phi(ii, jj + 1) - 2 * phi(ii, jj) + phi(ii, jj - 1)) / hy2) +
                     rho));
    out.residuals["stencil_defect"] = defect;

    double h_energy = 0.0;
    for (Eigen::Index c = 0; c < sol.E.cols(); ++c)
      h_energy += 0.5 * mat.eps_at(0) * sol.E.col(c).squaredNorm() * grid.hx() * grid.hy();
    out.trace.times = {0.0};
    out.trace.hamiltonian = {h_energy};
    out.trace.dissipated_power = {0.0};
    out.trace.supplied_power = {0.0};
    out.trace.balance_residual = {0.0};

    io::write_text_file(prefix + "_phi.csv", io::field_csv(phi));
    io::write_text_file(prefix + "_grid.json",
                        io::grid_header_json(grid, "phi on the node lattice"));
  } else {
    throw InvalidArgument("potential dimension must be 1 or 2");
  }
  out.extra_artifacts["phi_field"] = prefix + "_phi.csv";
  out.extra_artifacts["grid_header"] = prefix + "_grid.json";
  return out;
}

// ---------------------------------------------------------------------------
// Mechanical scenarios
// ---------------------------------------------------------------------------

mech::MechMaterial mech_material_of(const json& j) {
  const json& m = require(j, "material");
  return mech::MechMaterial(
      number(m, "rho"),
      mech::IsotropicTensor4::hooke(number(m, "lambda1"), number(m, "lambda2")),
      mech::IsotropicTensor4::viscosity(number_or(m, "zeta1", 0.0), number_or(m, "zeta2", 0.0)));
}

Outcome run_mech_nonlinear(const json& j, const std::string&) {
  const int n_cells = integer_or(j, "n_cells", 16);
  const double length = number_or(j, "length", 1.0);
  const auto model = mech::assemble_elastodynamics_ph(mech_material_of(j), n_cells, length);

  const json initial = j.value("initial", json::object());
  const double v_amp = initial.value("velocity_amplitude", 0.1);
  const int mode = initial.value("mode", 1);
  const double stretch = initial.value("stretch", 1.0);

  VectorXd v0(model.n_v());
  for (int i = 0; i < model.n_v(); ++i)
    v0[i] = v_amp * std::sin(kPi * mode * (i * model.h) / length);
  const VectorXd x0 = model.pack(v0, VectorXd::Constant(n_cells, stretch));

  const Integration integ = integration_of(j);
  const auto result =
      core::simulate(model.ph, x0, VectorXd(VectorXd::Zero(model.ph.n_input)), integ.t_end, integ.dt);

  Outcome out;
  fill_from_simulation(out, result);
  out.labels = numbered("v_", model.n_v());
  for (const auto& l : numbered("F_", n_cells)) out.labels.push_back(l);
  out.residuals["rel_energy_drift"] = relative_energy_drift(result.trace);
  return out;
}

Outcome run_mech_linear(const json& j, const std::string&) {
  const double length = number_or(j, "length", 1.0);
  const int n_nodes = integer_or(j, "n_nodes", 16);
  std::optional<std::pair<double, double>> rayleigh;
  if (j.contains("rayleigh")) {
    const json& r = j["rayleigh"];
    if (!r.is_array() || r.size() != 2) throw InvalidArgument("rayleigh must be [alpha, beta]");
    rayleigh = std::make_pair(r[0].get<double>(), r[1].get<double>());
  }
  const auto bar = mech::assemble_linear_nonrotating(mech_material_of(j), length, n_nodes,
                                                     rayleigh);
  const auto ph = second_order_ph(bar, false);

  const json initial = j.value("initial", json::object());
  const double amp = initial.value("amplitude", 1e-3);
  const int mode = initial.value("mode", 1);
  const int n = bar.dof();
  VectorXd x0 = VectorXd::Zero(2 * n);
  const double h = length / (n_nodes - 1);
  for (int i = 0; i < n; ++i) x0[i] = amp * std::sin(kPi * mode * (i + 1) * h / length);

  const Integration integ = integration_of(j);
  const auto result = core::simulate(ph, x0, VectorXd(), integ.t_end, integ.dt);

  Outcome out;
  fill_from_simulation(out, result);
  out.labels = numbered("q_", n, 1);
  for (const auto& l : numbered("v_", n, 1)) out.labels.push_back(l);
  out.residuals["rel_energy_drift"] = relative_energy_drift(result.trace);
  return out;
}

json eigs_json(const mech::SecondOrderSystem& sys) {
  json arr = json::array();
  for (const auto& z : mech::second_order_eigs(sys)) arr.push_back({z.real(), z.imag()});
  return arr;
}

Outcome run_rotor(const json& j, const std::string&) {
  const double m = number(j, "m"), d = number(j, "d"), k = number(j, "k");
  const double omega = number(j, "omega"), g = number_or(j, "g", 0.0);
  Eigen::MatrixXd gyro(2, 2);
  gyro << 0.0, g, -g, 0.0;
  Eigen::MatrixXd z_soft, k_geo;
  if (j.contains("z")) z_soft = number(j, "z") * Eigen::MatrixXd::Identity(2, 2);
  if (j.contains("k_g")) k_geo = number(j, "k_g") * Eigen::MatrixXd::Identity(2, 2);
  const auto sys =
      mech::assemble_rotor_system(mech::jeffcott_system(m, d, k), omega, gyro, z_soft, k_geo);
  const auto ph = second_order_ph(sys, false);

  const json initial = j.value("initial", json::object());
  VectorXd x0 = VectorXd::Zero(4);
  x0[0] = initial.value("x", 1e-3);
  x0[1] = initial.value("y", 0.0);

  const Integration integ = integration_of(j);
  const auto result = core::simulate(ph, x0, VectorXd(), integ.t_end, integ.dt);

  Outcome out;
  fill_from_simulation(out, result);
  out.labels = {"x", "y", "vx", "vy"};
  out.summary["eigenvalues"] = eigs_json(sys);
  return out;
}

Outcome run_jeffcott(const json& j, const std::string&) {
  const double m = number(j, "m"), d = number(j, "d"), k = number(j, "k");
  const auto sys = mech::jeffcott_system(m, d, k);
  const auto ph = second_order_ph(sys, true);

  const json unbalance = j.value("unbalance", json::object());
  const double eps = unbalance.value("epsilon", 0.0);
  const double omega = unbalance.value("omega", 0.0);
  const core::InputSignal u = [m, eps, omega](double t) {
    VectorXd f(2);
    const double a = m * eps * omega * omega;
    f << a * std::cos(omega * t), a * std::sin(omega * t);
    return f;
  };

  const json initial = j.value("initial", json::object());
  VectorXd x0 = VectorXd::Zero(4);
  x0[0] = initial.value("x", 0.0);
  x0[1] = initial.value("y", 0.0);

  const Integration integ = integration_of(j);
  const auto result = core::simulate(ph, x0, u, integ.t_end, integ.dt);

  Outcome out;
  fill_from_simulation(out, result);
  out.labels = {"x", "y", "vx", "vy"};
  out.summary["eigenvalues"] = eigs_json(sys);
  return out;
}

Outcome run_rotor_speed(const json& j, const std::string&) {
  const double inertia = number(j, "inertia");
  const double mu_f = number_or(j, "mu_f", 0.0);
  const double t_e = number(j, "T_e"), t_l = number_or(j, "T_l", 0.0);
  const double omega0 = number_or(j, "omega0", 0.0);
  const Integration integ = integration_of(j);

  const auto te_fn = [t_e](double) { return t_e; };
  const auto tl_fn = [t_l](double) { return t_l; };

  const int steps = static_cast<int>(std::ceil(integ.t_end / integ.dt - 1e-12));
  Outcome out;
  out.labels = {"omega"};
  std::vector<double> omegas{omega0};
  out.times = {0.0};
  out.trace.times = {0.0};
  out.trace.hamiltonian = {0.5 * inertia * omega0 * omega0};
  out.trace.dissipated_power = {0.0};
  out.trace.supplied_power = {0.0};
  out.trace.balance_residual = {0.0};

  double closed_err = 0.0;
  for (int s = 1; s <= steps; ++s) {
    const double t = s * integ.dt;
    const double next =
        mech::rotor_speed_midpoint(inertia, mu_f, te_fn, tl_fn, omegas.back(), integ.dt, integ.dt);
    const double mid = 0.5 * (omegas.back() + next);
    const double h_prev = out.trace.hamiltonian.back();
    const double h_next = 0.5 * inertia * next * next;
    out.trace.times.push_back(t);
    out.trace.hamiltonian.push_back(h_next);
    out.trace.supplied_power.push_back((t_e - t_l) * mid);
    out.trace.dissipated_power.push_back(mu_f * mid * mid);
    out.trace.balance_residual.push_back(h_next - h_prev -
                                         integ.dt * ((t_e - t_l) * mid - mu_f * mid * mid));
    omegas.push_back(next);
    out.times.push_back(t);
    closed_err = std::max(
        closed_err, std::abs(next - mech::rotor_speed_step(inertia, mu_f, t_e, t_l, omega0, t)));
  }
  for (double w : omegas) out.rows.push_back(VectorXd::Constant(1, w));
  out.residuals["max_energy_balance"] = out.trace.max_abs_residual();
  out.residuals["max_closed_form_error"] = closed_err;
  return out;
}

// ---------------------------------------------------------------------------
// Thermal scenarios
// ---------------------------------------------------------------------------

thermal::ThermalBC thermal_bc_of(const json& face) {
  const std::string kind = string_or(face, "kind", "insulated");
  if (kind == "dirichlet") return thermal::ThermalBC::dirichlet(number(face, "value"));
  if (kind == "neumann") return thermal::ThermalBC::neumann(number_or(face, "flux", 0.0));
  if (kind == "insulated") return thermal::ThermalBC::insulated();
  if (kind == "robin")
    return thermal::ThermalBC::robin(number(face, "w1"), number(face, "w2"),
                                     number(face, "gamma"));
  if (kind == "convective")
    return thermal::ThermalBC::convective(number(face, "alpha"), number(face, "theta_amb"));
  throw InvalidArgument("thermal boundary kind '" + kind + "' is not recognized");
}

Outcome run_heat(const json& j, const std::string&) {
  const json& m = require(j, "material");
  const thermal::ThermalMaterial material = thermal::ThermalMaterial::log_heat(
      number(m, "rho"), number(m, "c0"), number(m, "kappa"));

  thermal::HeatGrid1D grid;
  grid.n_cells = integer_or(j, "n_cells", 32);
  grid.length = number_or(j, "length", 1.0);
  const json bc = j.value("bc", json::object());
  grid.left = thermal_bc_of(bc.value("left", json::object()));
  grid.right = thermal_bc_of(bc.value("right", json::object()));

  const json source = j.value("source", json::object());
  const double viscous = source.value("viscous", 0.0);
  const double supply = source.value("supply", 0.0);
  thermal::Field1D viscous_fn, supply_fn;
  if (viscous != 0.0) viscous_fn = [viscous](double) { return viscous; };
  if (supply != 0.0) supply_fn = [supply](double) { return supply; };

  const json initial = j.value("initial", json::object());
  const double theta0 = initial.value("theta", 1.0);
  const double perturbation = initial.value("perturbation", 0.0);
  if (!(theta0 > 0.0)) throw InvalidArgument("initial temperature must be positive");

  const auto model = thermal::assemble_heat_ph(grid, material, viscous_fn, supply_fn, theta0);
  VectorXd x0(grid.n_cells);
  for (int i = 0; i < grid.n_cells; ++i)
    x0[i] = theta0 + perturbation * std::sin(kPi * model.cell_center(i) / grid.length);

  const Integration integ = integration_of(j);
  const auto result =
      core::simulate(model.ph, x0, VectorXd(VectorXd::Zero(model.ph.n_input)), integ.t_end, integ.dt);

  Outcome out;
  fill_from_simulation(out, result);
  out.labels = numbered("theta_", grid.n_cells);
  out.summary["boundary_inflow_final"] = model.boundary_inflow(result.states.back());
  out.summary["source_power"] = model.source_power();
  return out;
}

Outcome run_thermal_network(const json& j, const std::string&) {
  thermal::ThermalNetwork net;
  if (j.contains("network_file"))
    net = io::thermal_network_from_json(io::read_text_file(j["network_file"].get<std::string>()));
  else
    net = io::thermal_network_from_json(require(j, "network").dump());

  VectorXd x0 = VectorXd::Zero(net.n);
  if (j.contains("initial_offset")) {
    const json& arr = j["initial_offset"];
    if (!arr.is_array() || static_cast<int>(arr.size()) != net.n)
      throw InvalidArgument("initial_offset must list one value per node");
    for (int i = 0; i < net.n; ++i) x0[i] = arr[i].get<double>();
  }

  const Integration integ = integration_of(j);
  const auto result = thermal::network_simulate(net, x0, integ.t_end, integ.dt);

  Outcome out;
  out.times = result.trace.times;
  out.trace = result.trace;
  out.trajectory_override = io::network_trajectory_csv(result.trace.times, result.states,
                                                       net.theta0);
  out.residuals["max_energy_balance"] = result.trace.max_abs_residual();
  try {
    const auto steady = thermal::network_steady_state(net);
    out.residuals["distance_to_steady_state"] =
        (result.states.back() - steady.offset).cwiseAbs().maxCoeff();
    json temps = json::array();
    for (int i = 0; i < net.n; ++i) temps.push_back(steady.temperature[i]);
    out.summary["steady_state_temperature"] = temps;
  } catch (const Error&) {
    // No conductive path to the ambient: transient-only scenario.
  }
  return out;
}

// ---------------------------------------------------------------------------
// Circuit scenario
// ---------------------------------------------------------------------------

Outcome run_circuit(const json& j, const std::string&) {
  const circuit::MachineParams params =
      io::machine_params_from_json(require(j, "params").dump());

  std::vector<double> slips;
  const json& spec = require(j, "slips");
  if (spec.is_array()) {
    for (const auto& s : spec) slips.push_back(s.get<double>());
  } else {
    const double from = number(spec, "from"), to = number(spec, "to");
    const int count = integer(spec, "count");
    if (count < 2) throw InvalidArgument("slips.count must be at least 2");
    for (int i = 0; i < count; ++i)
      slips.push_back(from + (to - from) * i / (count - 1));
  }

  const auto points = circuit::slip_sweep(params, slips);

  Outcome out;
  out.trajectory_override = io::slip_sweep_csv(points);
  double balance_defect = 0.0;
  for (const auto& pt : points) {
    const auto currents = circuit::solve_phasors(params, pt.s);
    const double p_in = params.Np * (params.U1 * std::conj(currents.I1)).real() +
                        params.Np * (params.U2p * std::conj(currents.I2p)).real();
    const double p_mech = (1.0 - pt.s) * pt.P_airgap;
    out.trace.times.push_back(pt.s);
    out.trace.hamiltonian.push_back(0.0);
    out.trace.supplied_power.push_back(p_in);
    out.trace.dissipated_power.push_back(pt.P_w1 + pt.P_w2);
    const double defect = p_in - pt.P_w1 - pt.P_w2 - p_mech;
    out.trace.balance_residual.push_back(defect);
    balance_defect = std::max(balance_defect, std::abs(defect));
  }
  out.residuals["max_power_balance"] = balance_defect;
  return out;
}

// ---------------------------------------------------------------------------
// Coupled scenario
// ---------------------------------------------------------------------------

Outcome run_coupled(const json& j, const std::string& prefix) {
  const json& m = require(j, "material");
  coupled::CoupledMaterial material(
      number_or(m, "eps0", 1.0), number_or(m, "mu0", 1.0), number(m, "rho"),
      mech::IsotropicTensor4::hooke(number(m, "lambda1"), number(m, "lambda2")),
      mech::IsotropicTensor4::viscosity(number_or(m, "zeta1", 0.0), number_or(m, "zeta2", 0.0)),
      thermal::ThermalMaterial::log_heat(number(m, "rho"), number(m, "c0"),
                                         number_or(m, "kappa", 0.0)),
      number_or(m, "sigma", 0.0));

  fd::PeriodicGrid3 grid{integer_or(j, "n", 4), number_or(j, "h", 0.25)};
  const json initial = j.value("initial", json::object());
  const double em_amp = initial.value("em_amplitude", 0.1);
  const double v_amp = initial.value("v_amplitude", 0.05);
  const double f_amp = initial.value("f_amplitude", 0.02);
  const double theta_base = initial.value("theta", 1.0);
  const double theta_amp = initial.value("theta_amplitude", 0.05);

  const auto model = coupled::assemble_coupled_ph(material, grid, theta_base);

  coupled::CoupledState state = coupled::CoupledState::zero(grid.cells());
  for (int kk = 0; kk < grid.n; ++kk)
    for (int jj = 0; jj < grid.n; ++jj)
      for (int ii = 0; ii < grid.n; ++ii) {
        const int c = grid.index(ii, jj, kk);
        const double px = 2.0 * kPi * ii / grid.n;
        const double py = 2.0 * kPi * jj / grid.n;
        const double pz = 2.0 * kPi * kk / grid.n;
        state.E.col(c) = em_amp * Eigen::Vector3d(std::sin(px), std::cos(py), std::sin(pz));
        state.B.col(c) = em_amp * Eigen::Vector3d(std::cos(py), std::sin(pz), std::cos(px));
        state.v.col(c) = v_amp * Eigen::Vector3d(std::sin(py), std::sin(pz), std::sin(px));
        Eigen::Matrix3d f = Eigen::Matrix3d::Identity();
        f(0, 1) += f_amp * std::sin(px + py);
        f(1, 2) += f_amp * std::cos(py + pz);
        f(2, 0) += f_amp * std::sin(pz);
        fd::pack9(state.F, c, f);
        state.theta[c] = theta_base * (1.0 + theta_amp * std::sin(px + py + pz));
      }
  const VectorXd x0 = model.pack(state);

  const Integration integ = integration_of(j);
  const auto result = core::simulate(model.ph, x0, VectorXd(), integ.t_end, integ.dt);

  Outcome out;
  out.times = result.trace.times;
  out.trace = result.trace;
  out.residuals["max_energy_balance"] = result.trace.max_abs_residual();
  out.residuals["rel_energy_drift"] = relative_energy_drift(result.trace);

  std::vector<int> probes{0};
  if (j.contains("probes")) {
    probes.clear();
    for (const auto& p : j["probes"]) {
      const int cell = p.get<int>();
      if (cell < 0 || cell >= grid.cells()) throw InvalidArgument("probe cell out of range");
      probes.push_back(cell);
    }
  }
  static const char* kComponents[coupled::kStatePerCell] = {
      "E_x", "E_y", "E_z", "B_x", "B_y", "B_z", "v_x", "v_y", "v_z", "F_11",
      "F_12", "F_13", "F_21", "F_22", "F_23", "F_31", "F_32", "F_33", "theta"};
  for (int cell : probes)
    for (const char* comp : kComponents)
      out.labels.push_back("c" + std::to_string(cell) + "_" + comp);
  for (const auto& x : result.states) {
    VectorXd row(static_cast<Eigen::Index>(probes.size()) * coupled::kStatePerCell);
    Eigen::Index at = 0;
    for (int cell : probes)
      for (int comp = 0; comp < coupled::kStatePerCell; ++comp)
        row[at++] = x[coupled::kStatePerCell * cell + comp];
    out.rows.push_back(row);
  }

  const coupled::CoupledState final_state = model.unpack(result.states.back());
  io::write_text_file(prefix + "_final_state.csv", io::coupled_state_csv(final_state));
  io::write_text_file(prefix + "_final_state.json",
                      io::coupled_snapshot_header_json(grid.n, grid.h,
                                                       prefix + "_final_state.csv"));
  out.extra_artifacts["final_state"] = prefix + "_final_state.csv";
  out.extra_artifacts["final_state_header"] = prefix + "_final_state.json";
  return out;
}

using Handler = Outcome (*)(const json&, const std::string&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"maxwell1d", run_maxwell1d},
      {"maxwell2d", run_maxwell2d},
      {"eddy", run_eddy},
      {"potential", run_potential},
      {"mech_nonlinear", run_mech_nonlinear},
      {"mech_linear", run_mech_linear},
      {"rotor", run_rotor},
      {"jeffcott", run_jeffcott},
      {"rotor_speed", run_rotor_speed},
      {"heat", run_heat},
      {"thermal_network", run_thermal_network},
      {"circuit", run_circuit},
      {"coupled", run_coupled},
  };
  return table;
}

}  // namespace

int run_scenario(const std::string& path) {
  const std::string text = io::read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed scenario JSON: ") + e.what());
  }

  const std::string kind = string_of(j, "kind");
  const auto it = handlers().find(kind);
  if (it == handlers().end()) throw InvalidArgument("unknown scenario kind '" + kind + "'");

  const json output = j.value("output", json::object());
  const std::string dir = output.value("dir", std::string("."));
  const std::string stem = output.value("prefix", kind);
  std::filesystem::create_directories(dir);
  const std::string prefix = (std::filesystem::path(dir) / stem).string();

  const Outcome out = it->second(j, prefix);

  const std::string trajectory_path = prefix + "_trajectory.csv";
  const std::string energy_path = prefix + "_energy.csv";
  const std::string manifest_path = prefix + "_manifest.json";

  io::write_text_file(trajectory_path, out.trajectory_override.empty()
                                           ? io::trajectory_csv(out.labels, out.times, out.rows)
                                           : out.trajectory_override);
  io::write_text_file(energy_path, out.trace.to_csv());

  json manifest;
  manifest["kind"] = kind;
  manifest["inputs"] = {{"path", path}, {"hash_fnv1a64", hex64(fnv1a64(text))}};
  manifest["seed"] = global_seed();
  manifest["versions"] = {{"tool", kToolVersion},
                          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                        std::to_string(EIGEN_MINOR_VERSION)}};
  if (j.contains("integration")) {
    const Integration integ = integration_of(j);
    manifest["integration"] = {{"dt", integ.dt},
                               {"t_end", integ.t_end},
                               {"steps", out.trace.times.empty()
                                             ? 0
                                             : static_cast<int>(out.trace.times.size()) - 1}};
  }
  json residuals = json::object();
  for (const auto& [name, value] : out.residuals) residuals[name] = value;
  manifest["residuals"] = residuals;
  if (!out.summary.is_null()) manifest["summary"] = out.summary;
  json artifacts = json::object();
  artifacts["trajectory"] = trajectory_path;
  artifacts["energy"] = energy_path;
  artifacts["manifest"] = manifest_path;
  for (const auto& [name, artifact_path] : out.extra_artifacts) artifacts[name] = artifact_path;
  manifest["artifacts"] = artifacts;
  io::write_text_file(manifest_path, manifest.dump(2) + "\n");

  for (const auto& [name, artifact_path] : artifacts.items())
    if (!std::filesystem::exists(artifact_path.get<std::string>()))
      throw Error("ManifestIncomplete", "artifact '" + name + "' missing at " +
                                            artifact_path.get<std::string>());

  std::cout << manifest_path << "\n";
  return kOk;
}

}  // namespace mphs::cli
