#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "mphs/core/integrate.hpp"
#include "mphs/em/eddy.hpp"
#include "mphs/em/maxwell.hpp"
#include "mphs/em/potential.hpp"
#include "mphs/em/types.hpp"
#include "mphs/rng.hpp"

using namespace mphs;
using namespace mphs::em;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

constexpr double kPi = 3.14159265358979323846;

VectorXd random_state(int n, std::uint64_t tag, double scale = 1.0) {
  auto rng = make_rng(tag);
  std::normal_distribution<double> dist(0.0, scale);
  VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = dist(rng);
  return x;
}

// |eᵀJe| must vanish to round-off for a skew-symmetric structure matrix.
void check_skew_probes(const Eigen::MatrixXd& J, std::uint64_t tag) {
  auto rng = make_rng(tag);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    VectorXd e(J.rows());
    for (int i = 0; i < e.size(); ++i) e[i] = dist(rng);
    CHECK(std::abs(e.dot(J * e)) <= 1e-12 * e.squaredNorm() * std::max(1.0, J.cwiseAbs().maxCoeff()));
  }
}

}  // namespace

TEST_CASE("1D wave with reflecting walls conserves energy over 1000 steps") {
  EmGrid1D grid(64, 1.0);
  EmMaterial mat(2.0, 1.5, 0.0);
  MaxwellModel1D model = assemble_maxwell_ph(grid, mat);
  REQUIRE(model.ph.n_state == 127);
  REQUIRE(model.ph.n_input == 2);

  VectorXd e0(model.n_e()), b0 = VectorXd::Zero(model.n_b());
  for (int s = 0; s < model.n_e(); ++s) e0[s] = std::sin(kPi * (s + 1) * model.h);
  VectorXd x0 = model.pack(e0, b0);

  auto result = core::simulate(model.ph, x0, VectorXd(VectorXd::Zero(2)), 5.0, 0.005);
  const double h0 = model.ph.hamiltonian(x0);
  REQUIRE(h0 > 0.0);
  double max_drift = 0.0;
  for (const auto& x : result.states)
    max_drift = std::max(max_drift, std::abs(model.ph.hamiltonian(x) - h0));
  CHECK(max_drift <= 1e-10 * h0);
  CHECK(result.trace.max_abs_residual() <= 1e-12 * h0);
}

TEST_CASE("1D conducting medium: energy decays by exactly the resistive loss") {
  EmGrid1D grid(48, 1.0);
  EmMaterial mat(2.0, 1.5, 0.3);
  MaxwellModel1D model = assemble_maxwell_ph(grid, mat);

  VectorXd e0(model.n_e()), b0 = VectorXd::Zero(model.n_b());
  for (int s = 0; s < model.n_e(); ++s) e0[s] = std::sin(2.0 * kPi * (s + 1) * model.h);
  VectorXd x0 = model.pack(e0, b0);

  const double dt = 0.01;
  auto result = core::simulate(model.ph, x0, VectorXd(VectorXd::Zero(2)), 2.0, dt);
  REQUIRE(result.states.size() == 201);
  const double h0 = model.ph.hamiltonian(x0);

  for (std::size_t k = 1; k < result.states.size(); ++k) {
    const double hk = model.ph.hamiltonian(result.states[k]);
    const double hp = model.ph.hamiltonian(result.states[k - 1]);
    CHECK(hk <= hp + 1e-14 * h0);  // strictly nonincreasing up to round-off

    // Hand-computed Joule loss at the step midpoint: sigma h sum(E_m^2).
    VectorXd e_mid = 0.5 * (model.e_part(result.states[k]) + model.e_part(result.states[k - 1]));
    const double joule = 0.3 * model.h * e_mid.squaredNorm();
    CHECK(std::abs((hk - hp) + dt * joule) <= 1e-10 * h0);
  }

  auto flow = poynting_boundary_flow(result.states.back(), model);
  CHECK(flow.value == 0.0);
  CHECK_FALSE(flow.periodic);
}

TEST_CASE("1D periodic ring has no ports and an exactly skew structure matrix") {
  EmGrid1D grid(32, 2.0);
  grid.left.kind = Boundary::Periodic;
  grid.right.kind = Boundary::Periodic;
  EmMaterial mat(1.0, 1.0, 0.0);
  MaxwellModel1D model = assemble_maxwell_ph(grid, mat);
  REQUIRE(model.ph.n_state == 64);
  CHECK(model.ph.n_input == 0);
  check_skew_probes(model.ph.J, 0xe3011);

  auto flow = poynting_boundary_flow(VectorXd::Zero(64), model);
  CHECK(flow.value == 0.0);
  CHECK(flow.periodic);
}

TEST_CASE("mixed or unsupported 1D boundaries are rejected") {
  EmGrid1D half_periodic(16, 1.0);
  half_periodic.left.kind = Boundary::Periodic;
  EmMaterial mat(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(assemble_maxwell_ph(half_periodic, mat), UnsupportedBoundary);

  EmGrid1D neumann(16, 1.0);
  neumann.left.kind = Boundary::Neumann;
  CHECK_THROWS_AS(assemble_maxwell_ph(neumann, mat), UnsupportedBoundary);
}

TEST_CASE("2D TE periodic: skew structure, conserved energy and Gauss monitors") {
  EmGrid2D grid(8, 6, 1.0, 2.0);
  for (auto* f : {&grid.left, &grid.right, &grid.bottom, &grid.top})
    f->kind = Boundary::Periodic;
  EmMaterial mat(1.0, 1.0, 0.0);
  MaxwellModel2D model = assemble_maxwell_ph(grid, mat);
  REQUIRE(model.ph.n_state == 3 * 48);
  CHECK(model.ph.n_input == 0);
  check_skew_probes(model.ph.J, 0xe3012);

  VectorXd x0 = random_state(model.ph.n_state, 0xe3013, 0.5);
  auto result = core::simulate(model.ph, x0, VectorXd(), 0.2, 0.01);

  const double h0 = model.ph.hamiltonian(x0);
  for (const auto& x : result.states)
    CHECK(std::abs(model.ph.hamiltonian(x) - h0) <= 1e-12 * h0);

  // B is out-of-plane, so its in-plane divergence vanishes identically; the
  // nontrivial conserved monitor is the discrete charge density div(eps E).
  const VectorXd div_d0 = model.div_d(x0);
  const double scale = std::max(1.0, div_d0.cwiseAbs().maxCoeff());
  for (const auto& x : result.states) {
    CHECK(model.div_b(x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((model.div_d(x) - div_d0).cwiseAbs().maxCoeff() <= 1e-12 * scale * result.states.size());
  }
}

TEST_CASE("2D TE with PEC walls: eliminated tangential E, conserved energy") {
  EmGrid2D grid(5, 4, 1.0, 1.0);
  EmMaterial mat(3.0, 2.0, 0.0);
  MaxwellModel2D model = assemble_maxwell_ph(grid, mat);
  REQUIRE(model.n_ex() == 5 * 3);
  REQUIRE(model.n_ey() == 4 * 4);
  REQUIRE(model.ph.n_state == 15 + 16 + 20);
  CHECK(model.ex_index(0, 0) == -1);
  CHECK(model.ex_index(0, 4) == -1);
  CHECK(model.ey_index(0, 0) == -1);
  CHECK(model.ey_index(5, 0) == -1);
  check_skew_probes(model.ph.J, 0xe3014);

  VectorXd x0 = random_state(model.ph.n_state, 0xe3015, 0.5);
  auto result = core::simulate(model.ph, x0, VectorXd(), 0.2, 0.01);
  const double h0 = model.ph.hamiltonian(x0);
  for (const auto& x : result.states)
    CHECK(std::abs(model.ph.hamiltonian(x) - h0) <= 1e-12 * h0);

  const VectorXd div_d0 = model.div_d(x0);
  const double scale = std::max(1.0, div_d0.cwiseAbs().maxCoeff());
  for (const auto& x : result.states)
    CHECK((model.div_d(x) - div_d0).cwiseAbs().maxCoeff() <= 1e-12 * scale * result.states.size());

  auto flow = poynting_boundary_flow(x0, model);
  CHECK(flow.value == 0.0);
  CHECK_FALSE(flow.periodic);

  EmGrid2D mixed(5, 4, 1.0, 1.0);
  mixed.top.kind = Boundary::Periodic;
  CHECK_THROWS_AS(assemble_maxwell_ph(mixed, mat), UnsupportedBoundary);
}

TEST_CASE("prescribed boundary fields give the two-point Poynting quadrature") {
  // Right end: (1/mu)=1, B=4, E=2 -> +8. Left end: (1/mu)=2, B=0.5, E=3 -> -3.
  CHECK(poynting_flow_prescribed_1d(2.0, 3.0, 0.5, 1.0, 2.0, 4.0) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("uniform charge between grounded plates: exact parabolic potential") {
  EmGrid1D grid(64, 1.0);
  grid.left.kind = Boundary::Dirichlet;
  grid.right.kind = Boundary::Dirichlet;
  EmMaterial mat(2.0, 1.0, 0.0);
  auto sol = solve_potential(grid, mat, VectorXd::Constant(1, 1.0));

  // Phi(x) = x(1-x)/(2 eps): quadratic, so the 3-point stencil is exact.
  for (int i = 0; i <= 64; ++i) {
    const double x = i / 64.0;
    CHECK(sol.phi[i] == doctest::Approx(x * (1.0 - x) / 4.0).epsilon(1e-12));
  }
  CHECK(sol.phi[32] == doctest::Approx(1.0 / 16.0).epsilon(1e-13));  // rho/(8 eps)

  // E = -Phi' = (2x-1)/(2 eps); centered/one-sided differences exact on quadratics.
  for (int i = 0; i <= 64; ++i) {
    const double x = i / 64.0;
    CHECK(std::abs(sol.E[i] - (2.0 * x - 1.0) / 4.0) <= 1e-12);
    CHECK(sol.J[i] == 0.0);
    CHECK(std::abs(sol.D[i] - 2.0 * sol.E[i]) <= 1e-14);
  }
}

TEST_CASE("potential solve converges at second order on a quartic solution") {
  // rho(x) = x(1-x), eps = 1  =>  Phi(x) = x^4/12 - x^3/6 + x/12.
  auto run = [](int n) {
    EmGrid1D grid(n, 1.0);
    grid.left.kind = Boundary::Dirichlet;
    grid.right.kind = Boundary::Dirichlet;
    EmMaterial mat(1.0, 1.0, 0.0);
    VectorXd rho(n + 1);
    for (int i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) / n;
      rho[i] = x * (1.0 - x);
    }
    auto sol = solve_potential(grid, mat, rho);
    double err = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double x = static_cast<double>(i) / n;
      const double exact = x * x * x * x / 12.0 - x * x * x / 6.0 + x / 12.0;
      err = std::max(err, std::abs(sol.phi[i] - exact));
    }
    return err;
  };
  const double e16 = run(16), e32 = run(32);
  CHECK(e16 / e32 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("chargeless domain with constant boundary potential stays constant") {
  EmGrid1D grid(16, 1.0);
  grid.left = {Boundary::Dirichlet, 3.7};
  grid.right = {Boundary::Dirichlet, 3.7};
  EmMaterial mat(1.0, 1.0, 0.5);
  auto sol = solve_potential(grid, mat, VectorXd::Zero(17));
  for (int i = 0; i <= 16; ++i) {
    CHECK(sol.phi[i] == doctest::Approx(3.7).epsilon(1e-13));
    CHECK(std::abs(sol.E[i]) <= 1e-12);
    CHECK(std::abs(sol.J[i]) <= 1e-12);
  }

  EmGrid2D grid2(6, 5, 1.0, 1.0);
  grid2.left = {Boundary::Dirichlet, 3.7};
  grid2.right = {Boundary::Dirichlet, 3.7};
  grid2.bottom = {Boundary::Dirichlet, 3.7};
  grid2.top = {Boundary::Dirichlet, 3.7};
  auto sol2 = solve_potential(grid2, mat, VectorXd::Zero(grid2.n_nodes()));
  for (int s = 0; s < grid2.n_nodes(); ++s) {
    CHECK(sol2.phi[s] == doctest::Approx(3.7).epsilon(1e-13));
    CHECK(sol2.E.col(s).norm() <= 1e-12);
  }
}

TEST_CASE("mixed grounded/insulated ends match the closed-form ramp") {
  // eps Phi'' = -1 with Phi(0)=0, Phi'(1)=0  =>  Phi = x - x^2/2 (quadratic, exact).
  EmGrid1D grid(20, 1.0);
  grid.left.kind = Boundary::Dirichlet;
  grid.right.kind = Boundary::Neumann;
  EmMaterial mat(1.0, 1.0, 0.0);
  auto sol = solve_potential(grid, mat, VectorXd::Constant(1, 1.0));
  CHECK(sol.phi[20] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.phi[10] == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("2D potential solve matches an independently assembled dense solve") {
  EmGrid2D grid(8, 8, 1.0, 1.0);
  grid.left = {Boundary::Dirichlet, 0.3};
  grid.right = {Boundary::Dirichlet, -0.2};
  grid.bottom = {Boundary::Dirichlet, 0.1};
  grid.top = {Boundary::Dirichlet, 0.0};
  const double eps = 1.3;
  EmMaterial mat(eps, 1.0, 0.0);
  VectorXd rho = random_state(grid.n_nodes(), 0xe3016);

  auto sol = solve_potential(grid, mat, rho);

  // Independent dense assembly of the same 5-point problem.
  const int nn = grid.n_nodes();
  const double hx = grid.hx(), hy = grid.hy();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nn, nn);
  VectorXd b(nn);
  for (int j = 0; j <= 8; ++j)
    for (int i = 0; i <= 8; ++i) {
      const int row = grid.node(i, j);
      if (i == 0 || i == 8 || j == 0 || j == 8) {
        A(row, row) = 1.0;
        b[row] = i == 0 ? 0.3 : (i == 8 ? -0.2 : (j == 0 ? 0.1 : 0.0));
        continue;
      }
      A(row, row) = -2.0 * eps / (hx * hx) - 2.0 * eps / (hy * hy);
      A(row, grid.node(i + 1, j)) = eps / (hx * hx);
      A(row, grid.node(i - 1, j)) = eps / (hx * hx);
      A(row, grid.node(i, j + 1)) = eps / (hy * hy);
      A(row, grid.node(i, j - 1)) = eps / (hy * hy);
      b[row] = -rho[row];
    }
  VectorXd oracle = A.fullPivLu().solve(b);
  CHECK((sol.phi - oracle).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("ill-posed or unsupported potential problems are rejected") {
  EmMaterial mat(1.0, 1.0, 0.0);

  EmGrid1D all_neumann(8, 1.0);
  all_neumann.left.kind = Boundary::Neumann;
  all_neumann.right.kind = Boundary::Neumann;
  CHECK_THROWS_AS(solve_potential(all_neumann, mat, VectorXd::Zero(9)), SingularSystem);

  EmGrid1D periodic(8, 1.0);
  periodic.left.kind = Boundary::Periodic;
  periodic.right.kind = Boundary::Periodic;
  CHECK_THROWS_AS(solve_potential(periodic, mat, VectorXd::Zero(9)), UnsupportedBoundary);
}

TEST_CASE("vector-potential rate reproduces the discrete Laplacian eigenfunction") {
  const int n = 24;
  EmGrid2D grid(n, n, 1.0, 1.0);
  EmMaterial mat(1.0, 1.0, 1.0);
  const double h = 1.0 / n;

  VectorXd a3(grid.n_nodes());
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      a3[grid.node(i, j)] = std::sin(kPi * i * h) * std::sin(kPi * j * h);

  VectorXd rate = eddy_transient_rhs(a3, grid, mat, VectorXd::Zero(1));

  // The product sine is an exact eigenfunction of the 5-point Laplacian with
  // eigenvalue -(8/h^2) sin^2(pi h / 2); boundary rows stay pinned at zero.
  const double lambda_h = -(8.0 / (h * h)) * std::pow(std::sin(kPi * h / 2.0), 2);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const int s = grid.node(i, j);
      if (i == 0 || i == n || j == 0 || j == n) {
        CHECK(rate[s] == 0.0);
      } else {
        CHECK(rate[s] == doctest::Approx(lambda_h * a3[s]).epsilon(1e-11));
      }
    }

  // Continuum limit -2 pi^2 A at second order: halving h quarters the error.
  auto continuum_error = [](int m) {
    EmGrid2D g(m, m, 1.0, 1.0);
    EmMaterial mt(1.0, 1.0, 1.0);
    const double hh = 1.0 / m;
    VectorXd a(g.n_nodes());
    for (int j = 0; j <= m; ++j)
      for (int i = 0; i <= m; ++i) a[g.node(i, j)] = std::sin(kPi * i * hh) * std::sin(kPi * j * hh);
    VectorXd r = eddy_transient_rhs(a, g, mt, VectorXd::Zero(1));
    double err = 0.0;
    for (int j = 1; j < m; ++j)
      for (int i = 1; i < m; ++i)
        err = std::max(err, std::abs(r[g.node(i, j)] + 2.0 * kPi * kPi * a[g.node(i, j)]));
    return err;
  };
  CHECK(continuum_error(12) / continuum_error(24) == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("zero vector potential and zero source give a zero rate") {
  EmGrid2D grid(8, 8, 1.0, 1.0);
  EmMaterial mat(1.0, 1.0, 2.0);
  VectorXd rate = eddy_transient_rhs(VectorXd::Zero(grid.n_nodes()), grid, mat,
                                     VectorXd::Zero(grid.n_nodes()));
  CHECK(rate.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("insulating cells make the conductivity division ill-defined") {
  EmGrid2D grid(8, 8, 1.0, 1.0);
  EmMaterial mat(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(
      eddy_transient_rhs(VectorXd::Zero(grid.n_nodes()), grid, mat, VectorXd::Zero(1)),
      ZeroConductivity);
}

TEST_CASE("harmonic solve at omega=0 is the steady state of the transient rate") {
  EmGrid2D grid(16, 16, 1.0, 1.0);
  EmMaterial mat(1.0, 1.2, 0.8);
  VectorXcd g = VectorXcd::Constant(grid.n_nodes(), Complex(0.5, 0.0));

  VectorXcd a_steady = eddy_harmonic_solve(grid, mat, 0.0, g);
  CHECK(a_steady.imag().cwiseAbs().maxCoeff() <= 1e-12);  // real system at omega=0

  VectorXd rate = eddy_transient_rhs(a_steady.real(), grid, mat, g.real());
  CHECK(rate.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("harmonic solve with zero source is identically zero") {
  EmGrid2D grid(8, 8, 1.0, 1.0);
  EmMaterial mat(1.0, 1.0, 1.0);
  VectorXcd a = eddy_harmonic_solve(grid, mat, 3.0, VectorXcd::Zero(grid.n_nodes()));
  CHECK(a.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("harmonic solve matches an independent dense complex solve") {
  const int n = 8;
  EmGrid2D grid(n, n, 1.0, 1.0);
  const double mu = 1.1, sigma = 1.2, eps = 0.8, omega = 2.5;
  EmMaterial mat(eps, mu, sigma);

  auto rng = make_rng(0xe3017);
  std::normal_distribution<double> dist(0.0, 1.0);
  VectorXcd g(grid.n_nodes());
  for (int s = 0; s < grid.n_nodes(); ++s) g[s] = Complex(dist(rng), dist(rng));

  VectorXcd a = eddy_harmonic_solve(grid, mat, omega, g);

  const int nn = grid.n_nodes();
  const double h2 = grid.hx() * grid.hx();
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(nn, nn);
  VectorXcd b = VectorXcd::Zero(nn);
  const Complex jw(0.0, omega), adm(sigma, omega * eps);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const int row = grid.node(i, j);
      if (i == 0 || i == n || j == 0 || j == n) {
        A(row, row) = 1.0;
        continue;
      }
      A(row, row) = Complex(4.0 / (mu * h2), 0.0) + jw * adm;
      A(row, grid.node(i + 1, j)) = Complex(-1.0 / (mu * h2), 0.0);
      A(row, grid.node(i - 1, j)) = Complex(-1.0 / (mu * h2), 0.0);
      A(row, grid.node(i, j + 1)) = Complex(-1.0 / (mu * h2), 0.0);
      A(row, grid.node(i, j - 1)) = Complex(-1.0 / (mu * h2), 0.0);
      b[row] = -adm * g[row];
    }
  VectorXcd oracle = A.fullPivLu().solve(b);
  CHECK((a - oracle).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("total current: constant integrand, phase and region handling") {
  EmGrid2D grid(6, 5, 2.0, 1.5);
  const double sigma = 2.0, eps = 0.5, g_val = 0.7;
  EmMaterial mat(eps, 1.0, sigma);
  VectorXcd a0 = VectorXcd::Zero(grid.n_nodes());
  VectorXcd g = VectorXcd::Constant(grid.n_nodes(), Complex(g_val, 0.0));

  std::vector<bool> all(grid.n_cells(), true);
  Complex i_static = total_current(grid, mat, 0.0, a0, g, all);
  CHECK(i_static.real() == doctest::Approx(-sigma * g_val * 3.0).epsilon(1e-12));
  CHECK(std::abs(i_static.imag()) <= 1e-14);

  // With displacement current the phase is atan2(omega eps, sigma) + pi (mod 2 pi).
  const double omega = 3.0;
  Complex i_ac = total_current(grid, mat, omega, a0, g, all);
  double phase = std::arg(i_ac);
  if (phase < 0.0) phase += 2.0 * kPi;
  CHECK(phase == doctest::Approx(std::atan2(omega * eps, sigma) + kPi).epsilon(1e-12));

  std::vector<bool> two_cells(grid.n_cells(), false);
  two_cells[3] = two_cells[17] = true;
  Complex i_sub = total_current(grid, mat, 0.0, a0, g, two_cells);
  const double cell_area = grid.hx() * grid.hy();
  CHECK(i_sub.real() == doctest::Approx(-sigma * g_val * 2.0 * cell_area).epsilon(1e-12));

  std::vector<bool> none(grid.n_cells(), false);
  CHECK_THROWS_AS(total_current(grid, mat, 0.0, a0, g, none), EmptyRegion);
}

TEST_CASE("collocated periodic 3D stencils satisfy the vector-calculus identities") {
  fd::PeriodicGrid3 grid{6, 0.25};
  const int nc = grid.cells();

  auto rng = make_rng(0xe3018);
  std::normal_distribution<double> dist(0.0, 1.0);
  fd::Field3 F(3, nc);
  fd::Field1 phi(nc);
  for (int c = 0; c < nc; ++c) {
    phi[c] = dist(rng);
    for (int r = 0; r < 3; ++r) F(r, c) = dist(rng);
  }

  // div(curl F) = 0 and curl(grad phi) = 0 hold exactly for central
  // differences on a periodic grid (shift operators commute).
  fd::Field3 curl(3, nc), grad(3, nc);
  for (int c = 0; c < nc; ++c) {
    curl.col(c) = grid.curl_vector(F, c);
    grad.col(c) = grid.grad_scalar(phi, c);
  }
  for (int c = 0; c < nc; ++c) {
    CHECK(std::abs(grid.div_vector(curl, c)) <= 1e-13);
    CHECK(grid.curl_vector(grad, c).norm() <= 1e-13);
  }
}

TEST_CASE("3D periodic Maxwell rate: uniform fields only decay through sigma") {
  fd::PeriodicGrid3 grid{4, 0.5};
  const int nc = grid.cells();
  const double eps = 2.0, mu = 3.0, sigma = 0.5;

  fd::Field3 E(3, nc), B(3, nc);
  for (int c = 0; c < nc; ++c) {
    E.col(c) = Eigen::Vector3d(1.0, 2.0, 3.0);
    B.col(c) = Eigen::Vector3d(4.0, 5.0, 6.0);
  }
  auto rate = maxwell_rhs_3d_periodic(grid, eps, mu, sigma, E, B);
  for (int c = 0; c < nc; ++c) {
    CHECK((rate.dE.col(c) + (sigma / eps) * E.col(c)).norm() <= 1e-14);
    CHECK(rate.dB.col(c).norm() <= 1e-14);
  }
}
