#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "mphs/core/integrate.hpp"
#include "mphs/rng.hpp"
#include "mphs/thermal/heat.hpp"
#include "mphs/thermal/material.hpp"
#include "mphs/thermal/network.hpp"

using namespace mphs;
using namespace mphs::thermal;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kPi = 3.14159265358979323846;

ThermalNetwork two_body_network() {
  ThermalNetwork net;
  net.n = 2;
  net.C = VectorXd::Ones(2);
  net.Lambda = MatrixXd::Zero(2, 2);
  net.Lambda(0, 1) = net.Lambda(1, 0) = 1.0;
  net.Lambda0 = VectorXd::Ones(2);
  net.P = VectorXd::Zero(2);
  net.P[0] = 1.0;
  net.theta0 = 300.0;
  return net;
}

}  // namespace

TEST_CASE("free-energy coefficients: analytic, finite-difference and guards") {
  const auto log_mat = ThermalMaterial::log_heat(1.0, 2.5, 1.0);
  for (double th : {0.5, 1.0, 7.0}) {
    const auto [c, s] = heat_coefficients(log_mat, th);
    CHECK(std::abs(c - 2.5) <= 1e-12);
    CHECK(std::abs(s - 2.5 * (std::log(th) + 1.0)) <= 1e-12);
    CHECK(std::abs(internal_energy(log_mat, th) - 2.5 * th) <= 1e-12 * 2.5 * th);
  }

  // Same free energy without derivative hooks: coefficients via differences.
  const ThermalMaterial fd_mat(1.0, [](double th) { return -2.5 * th * std::log(th); }, 1.0);
  for (double th : {0.5, 1.0, 7.0}) {
    const auto [c, s] = heat_coefficients(fd_mat, th);
    CHECK(std::abs(c - 2.5) <= 2e-3 * 2.5);
    CHECK(std::abs(s - 2.5 * (std::log(th) + 1.0)) <= 1e-8);
  }

  // First derivative supplied, second by differencing it.
  const ThermalMaterial mixed(
      1.0, [](double th) { return -2.5 * th * std::log(th); },
      [](double th) { return -2.5 * (std::log(th) + 1.0); }, {}, Eigen::Matrix3d::Identity());
  CHECK(std::abs(heat_coefficients(mixed, 0.7).c - 2.5) <= 1e-8 * 2.5);

  // Temperature-dependent specific heat c(θ) = c0 + b·θ.
  const double c0 = 1.0, b = 0.5;
  const ThermalMaterial quad(
      1.0, [=](double th) { return -c0 * th * std::log(th) - 0.5 * b * th * th; },
      [=](double th) { return -c0 * (std::log(th) + 1.0) - b * th; },
      [=](double th) { return -c0 / th - b; }, Eigen::Matrix3d::Identity());
  for (double th : {0.5, 1.3})
    CHECK(std::abs(heat_coefficients(quad, th).c - (c0 + b * th)) <= 1e-12);

  CHECK_THROWS_AS(heat_coefficients(log_mat, 0.0), NonPositiveTemperature);
  CHECK_THROWS_AS(heat_coefficients(log_mat, -3.0), NonPositiveTemperature);
  CHECK_THROWS_AS(ThermalMaterial(-1.0, [](double) { return 0.0; }, 1.0), InvalidArgument);
  CHECK_THROWS_AS(ThermalMaterial(1.0, [](double) { return 0.0; }, -1.0), InvalidArgument);
}

TEST_CASE("conduction assembly: skew structure with zero total flux") {
  const auto mat = ThermalMaterial::log_heat(2.0, 1.5, 0.8);
  HeatGrid1D grid{12, 1.0, ThermalBC::insulated(), ThermalBC::insulated()};
  auto model = assemble_heat_ph(grid, mat, [](double x) { return 0.3 + x; });
  REQUIRE(model.ph.n_state == 12);

  auto rng = make_rng(0x7e301);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  VectorXd theta(12);
  for (int i = 0; i < 12; ++i) theta[i] = dist(rng);

  const MatrixXd j = model.ph.structure_at(theta);
  const double scale = std::max(1.0, j.cwiseAbs().maxCoeff());
  CHECK((j + j.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * scale);
  CHECK(std::abs((j * VectorXd::Ones(12)).sum()) <= 1e-13 * scale);

  // The fast right-hand side agrees with structure·1 plus sources (insulated
  // boundaries contribute nothing).
  const VectorXd direct = model.ph.rhs_at(theta, VectorXd());
  const VectorXd via_structure = j * VectorXd::Ones(12) + model.source_density * model.h;
  CHECK((direct - via_structure).cwiseAbs().maxCoeff() <= 1e-12);

  // Flow map is the heat capacity per cell.
  const MatrixXd e = model.ph.flow_at(theta);
  for (int i = 0; i < 12; ++i)
    CHECK(std::abs(e(i, i) - 2.0 * 1.5 * model.h) <= 1e-13);

  CHECK_THROWS_AS(assemble_heat_ph(HeatGrid1D{1, 1.0, {}, {}}, mat), InvalidArgument);
  auto skewed = mat;
  skewed.kappa(0, 1) = skewed.kappa(1, 0) = 0.1;
  CHECK_THROWS_AS(assemble_heat_ph(grid, skewed), InvalidArgument);
}

TEST_CASE("sine mode on a Dirichlet interval: rate matches the diffusion eigenvalue") {
  const auto mat = ThermalMaterial::log_heat(1.0, 1.0, 1.0);

  auto pointwise_error = [&](int n) {
    HeatGrid1D grid{n, 1.0, ThermalBC::dirichlet(0.0), ThermalBC::dirichlet(0.0)};
    auto model = assemble_heat_ph(grid, mat);
    VectorXd theta(n);
    for (int i = 0; i < n; ++i) theta[i] = std::sin(kPi * model.cell_center(i));
    const VectorXd rate = model.ph.rhs_at(theta, VectorXd()) / model.h;
    return (rate + kPi * kPi * theta).cwiseAbs().maxCoeff();
  };
  const double e25 = pointwise_error(25), e50 = pointwise_error(50);
  CHECK(e50 <= 10.0 * (0.02 * 0.02));
  CHECK(e25 / e50 >= 3.3);
  CHECK(e25 / e50 <= 4.7);

  // Fitted decay rate of the fundamental mode within 1 % of π².
  const int n = 50;
  HeatGrid1D grid{n, 1.0, ThermalBC::dirichlet(0.0), ThermalBC::dirichlet(0.0)};
  auto model = assemble_heat_ph(grid, mat);
  VectorXd theta0(n), mode(n);
  for (int i = 0; i < n; ++i) theta0[i] = mode[i] = std::sin(kPi * model.cell_center(i));
  auto result = core::simulate(model.ph, theta0, core::InputSignal(), 0.1, 1e-3);
  const double a0 = theta0.dot(mode);
  const double at = result.states.back().dot(mode);
  const double rate = std::log(a0 / at) / 0.1;
  CHECK(std::abs(rate - kPi * kPi) <= 0.01 * kPi * kPi);
}

TEST_CASE("uniform insulated temperature is a fixed point") {
  const auto mat = ThermalMaterial::log_heat(1.0, 1.0, 1.0);
  HeatGrid1D grid{10, 1.0, ThermalBC::insulated(), ThermalBC::insulated()};
  auto model = assemble_heat_ph(grid, mat);
  const VectorXd theta0 = VectorXd::Constant(10, 1.4);
  auto result = core::simulate(model.ph, theta0, core::InputSignal(), 1.0, 0.1);
  for (const auto& x : result.states)
    CHECK((x - theta0).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("internal heating shows up exactly in the energy trace") {
  const auto mat = ThermalMaterial::log_heat(2.0, 1.0, 1.0);
  HeatGrid1D grid{20, 1.0, ThermalBC::insulated(), ThermalBC::insulated()};
  auto model = assemble_heat_ph(grid, mat, [](double) { return 0.4; },
                                [](double) { return 0.3; });
  // Total supply: viscous 0.4·1 + specific ρr = 2·0.3·1.
  CHECK(std::abs(model.source_power() - 1.0) <= 1e-13);

  const VectorXd theta0 = VectorXd::Constant(20, 1.0);
  auto result = core::simulate(model.ph, theta0, core::InputSignal(), 1.0, 0.05);
  for (std::size_t k = 1; k < result.trace.supplied_power.size(); ++k)
    CHECK(std::abs(result.trace.supplied_power[k] - 1.0) <= 1e-12);
  CHECK(result.trace.max_abs_residual() <= 1e-10);
  CHECK(std::abs(result.trace.hamiltonian.back() - result.trace.hamiltonian.front() - 1.0) <=
        1e-9);
}

TEST_CASE("implicit stepping honors the maximum principle") {
  const auto mat = ThermalMaterial::log_heat(1.0, 1.0, 1.0);
  const int n = 20;
  HeatGrid1D grid{n, 1.0, ThermalBC::dirichlet(1.0), ThermalBC::dirichlet(1.0)};
  auto model = assemble_heat_ph(grid, mat);
  VectorXd theta0(n);
  for (int i = 0; i < n; ++i) {
    const double x = model.cell_center(i);
    theta0[i] = 1.0 + 0.5 * std::exp(-std::pow((x - 0.5) / 0.1, 2));
  }
  const double peak = theta0.maxCoeff();
  auto result = core::simulate(model.ph, theta0, core::InputSignal(), 0.3, 1.5e-3);
  for (const auto& x : result.states) {
    CHECK(x.maxCoeff() <= peak + 1e-10);
    CHECK(x.minCoeff() >= 1.0 - 1e-10);
  }
}

TEST_CASE("steady states: linear profiles are exact, ill-posed cases throw") {
  const auto mat = ThermalMaterial::log_heat(1.0, 1.0, 1.0);

  HeatGrid1D fixed{16, 1.0, ThermalBC::dirichlet(1.0), ThermalBC::dirichlet(2.0)};
  auto model = assemble_heat_ph(fixed, mat);
  const VectorXd steady = model.steady_state();
  for (int i = 0; i < 16; ++i)
    CHECK(std::abs(steady[i] - (1.0 + model.cell_center(i))) <= 1e-12);
  CHECK(std::abs(model.boundary_inflow(steady)) <= 1e-12);

  // Left wall held at 2, convective exchange on the right: θ(x) = 2 - x.
  HeatGrid1D conv{16, 1.0, ThermalBC::dirichlet(2.0), ThermalBC::convective(2.0, 0.5)};
  auto model_c = assemble_heat_ph(conv, mat);
  const VectorXd steady_c = model_c.steady_state();
  for (int i = 0; i < 16; ++i)
    CHECK(std::abs(steady_c[i] - (2.0 - model_c.cell_center(i))) <= 1e-12);

  // Transient relaxation reaches the same profile.
  auto relax = core::simulate(model_c.ph, VectorXd::Constant(16, 2.0), core::InputSignal(),
                              10.0, 0.05);
  CHECK((relax.states.back() - steady_c).cwiseAbs().maxCoeff() <= 1e-6);

  // Uniform volumetric source with cold walls: converges at second order to
  // θ(x) = x(1-x)/2.
  auto source_error = [&](int n) {
    HeatGrid1D g{n, 1.0, ThermalBC::dirichlet(0.0), ThermalBC::dirichlet(0.0)};
    auto m = assemble_heat_ph(g, mat, [](double) { return 1.0; });
    const VectorXd th = m.steady_state();
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = m.cell_center(i);
      err = std::max(err, std::abs(th[i] - 0.5 * x * (1.0 - x)));
    }
    return err;
  };
  const double ratio = source_error(16) / source_error(32);
  CHECK(ratio >= 3.2);
  CHECK(ratio <= 4.8);

  HeatGrid1D insulated{8, 1.0, ThermalBC::insulated(), ThermalBC::insulated()};
  CHECK_THROWS_AS(assemble_heat_ph(insulated, mat).steady_state(), IllPosedBC);
  CHECK_THROWS_AS(ThermalBC::robin(0.0, 0.0, 1.0), IllPosedBC);
  // Robin weights that cancel against the half-cell conduction factor.
  HeatGrid1D degenerate{10, 1.0, ThermalBC::robin(0.05, 1.0, 0.0), ThermalBC::insulated()};
  CHECK_THROWS_AS(assemble_heat_ph(degenerate, mat), IllPosedBC);
}

TEST_CASE("energy residual of the nonlinear heat model shrinks at third order") {
  // c(θ) = c0 + b·θ² makes the internal energy cubic, so the per-step
  // midpoint energy defect is a genuine O(dt³) term.
  const double c0 = 1.0, b = 0.5;
  const ThermalMaterial mat(
      1.0, [=](double th) { return -c0 * th * std::log(th) - b / 6.0 * th * th * th; },
      [=](double th) { return -c0 * (std::log(th) + 1.0) - 0.5 * b * th * th; },
      [=](double th) { return -c0 / th - b * th; }, Eigen::Matrix3d::Identity());
  HeatGrid1D grid{8, 1.0, ThermalBC::insulated(), ThermalBC::insulated()};
  auto model = assemble_heat_ph(grid, mat);
  VectorXd theta0(8);
  for (int i = 0; i < 8; ++i) theta0[i] = 1.0 + 0.3 * std::sin(2.0 * kPi * model.cell_center(i));

  auto residual = [&](double dt) {
    return core::simulate(model.ph, theta0, core::InputSignal(), 0.2, dt).trace
        .max_abs_residual();
  };
  const double r = residual(0.0025) / residual(0.00125);
  CHECK(r >= 5.0);
  CHECK(r <= 12.0);
}

TEST_CASE("temperature positivity guards") {
  const auto mat = ThermalMaterial::log_heat(1.0, 1.0, 1.0);
  HeatGrid1D grid{4, 1.0, ThermalBC::insulated(), ThermalBC::insulated()};
  auto model = assemble_heat_ph(grid, mat);
  VectorXd bad = VectorXd::Constant(4, 1.0);
  bad[2] = -0.5;
  CHECK_THROWS_AS(model.ph.hamiltonian(bad), NonPositiveTemperature);
  CHECK_THROWS_AS(model.ph.flow_at(bad), NonPositiveTemperature);
}

TEST_CASE("2D conduction: structure, anisotropic steady state and mode decay") {
  auto mat = ThermalMaterial::log_heat(1.0, 1.0, 1.0);

  HeatGrid2D small{3, 4, 1.0, 2.0, ThermalBC::insulated(), ThermalBC::insulated(),
                   ThermalBC::insulated(), ThermalBC::insulated()};
  auto model_s = assemble_heat_ph(small, mat, [](double x, double y) { return x + y; });
  REQUIRE(model_s.ph.n_state == 12);
  auto rng = make_rng(0x7e302);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  VectorXd theta(12);
  for (int i = 0; i < 12; ++i) theta[i] = dist(rng);
  const MatrixXd j = model_s.ph.structure_at(theta);
  CHECK((j + j.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, j.cwiseAbs().maxCoeff()));
  const VectorXd direct = model_s.ph.rhs_at(theta, VectorXd());
  const VectorXd via = j * VectorXd::Ones(12) +
                       model_s.source_density * (model_s.hx * model_s.hy);
  CHECK((direct - via).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK_THROWS_AS(model_s.steady_state(), IllPosedBC);

  // Anisotropic conductivity, linear-in-x steady profile is exact.
  auto aniso = mat;
  aniso.kappa = Eigen::Vector3d(2.0, 0.5, 1.0).asDiagonal();
  HeatGrid2D strip{8, 5, 1.0, 1.0, ThermalBC::dirichlet(1.0), ThermalBC::dirichlet(2.0),
                   ThermalBC::insulated(), ThermalBC::insulated()};
  auto model_a = assemble_heat_ph(strip, aniso);
  const VectorXd steady = model_a.steady_state();
  for (int jj = 0; jj < 5; ++jj)
    for (int i = 0; i < 8; ++i)
      CHECK(std::abs(steady[model_a.cell(i, jj)] - (1.0 + model_a.cell_center_x(i))) <= 1e-12);

  // Fundamental-mode decay at 2π² within 2 %.
  const int n = 12;
  HeatGrid2D box{n, n, 1.0, 1.0, ThermalBC::dirichlet(1.0), ThermalBC::dirichlet(1.0),
                 ThermalBC::dirichlet(1.0), ThermalBC::dirichlet(1.0)};
  auto model_b = assemble_heat_ph(box, mat);
  VectorXd theta0(n * n), mode(n * n);
  for (int jj = 0; jj < n; ++jj)
    for (int i = 0; i < n; ++i) {
      const double m =
          std::sin(kPi * model_b.cell_center_x(i)) * std::sin(kPi * model_b.cell_center_y(jj));
      mode[model_b.cell(i, jj)] = m;
      theta0[model_b.cell(i, jj)] = 1.0 + 0.2 * m;
    }
  const double t_end = 0.025;
  auto result = core::simulate(model_b.ph, theta0, core::InputSignal(), t_end, 2.5e-4);
  const double a0 = (theta0 - VectorXd::Ones(n * n)).dot(mode);
  const double at = (result.states.back() - VectorXd::Ones(n * n)).dot(mode);
  const double rate = std::log(a0 / at) / t_end;
  CHECK(std::abs(rate - 2.0 * kPi * kPi) <= 0.02 * 2.0 * kPi * kPi);

  // Uniform insulated 2D state is a fixed point.
  auto quiet = core::simulate(model_s.ph, VectorXd::Constant(12, 1.2), core::InputSignal(),
                              0.5, 0.1);
  (void)quiet;
}

TEST_CASE("thermal network: assembly matrices and invariant violations") {
  auto net = two_body_network();
  auto sys = assemble_network(net);
  MatrixXd expected(2, 2);
  expected << -2.0, 1.0, 1.0, -2.0;
  CHECK((sys.A - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK((sys.E - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((sys.ph.R + sys.A).cwiseAbs().maxCoeff() == 0.0);

  auto decoupled = net;
  decoupled.Lambda.setZero();
  auto sys_d = assemble_network(decoupled);
  CHECK(std::abs(sys_d.A(0, 1)) == 0.0);
  CHECK(std::abs(sys_d.A(0, 0) + 1.0) == 0.0);

  auto bad = net;
  bad.C[0] = -1.0;
  CHECK_THROWS_AS(assemble_network(bad), StructureError);
  bad = net;
  bad.Lambda(0, 1) = 2.0;  // asymmetric
  CHECK_THROWS_AS(assemble_network(bad), StructureError);
  bad = net;
  bad.Lambda(0, 0) = 0.1;
  CHECK_THROWS_AS(assemble_network(bad), StructureError);
  bad = net;
  bad.Lambda(0, 1) = bad.Lambda(1, 0) = -0.2;
  CHECK_THROWS_AS(assemble_network(bad), StructureError);
  bad = net;
  bad.Lambda0[1] = -1.0;
  CHECK_THROWS_AS(assemble_network(bad), StructureError);
  bad = net;
  bad.P = VectorXd::Ones(3);
  CHECK_THROWS_AS(assemble_network(bad), StructureError);
}

TEST_CASE("thermal network: steady states") {
  auto net = two_body_network();
  auto steady = network_steady_state(net);
  CHECK(std::abs(steady.offset[0] - 2.0 / 3.0) <= 1e-14);
  CHECK(std::abs(steady.offset[1] - 1.0 / 3.0) <= 1e-14);
  CHECK(std::abs(steady.temperature[0] - (300.0 + 2.0 / 3.0)) <= 1e-12);

  ThermalNetwork lone;
  lone.n = 2;
  lone.C = VectorXd::Ones(2);
  lone.Lambda = MatrixXd::Zero(2, 2);
  lone.Lambda0 = Eigen::Vector2d(2.0, 4.0);
  lone.P = Eigen::Vector2d(3.0, 1.0);
  auto steady_l = network_steady_state(lone);
  CHECK(std::abs(steady_l.offset[0] - 1.5) <= 1e-14);
  CHECK(std::abs(steady_l.offset[1] - 0.25) <= 1e-14);

  auto cold = two_body_network();
  cold.P.setZero();
  CHECK(network_steady_state(cold).offset.cwiseAbs().maxCoeff() == 0.0);

  auto isolated = two_body_network();
  isolated.Lambda0.setZero();
  CHECK_THROWS_AS(network_steady_state(isolated), SingularNetwork);
}

TEST_CASE("random network: symmetric strictly stable dynamics") {
  const int n = 20;
  auto rng = make_rng(0x7e303);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  ThermalNetwork net;
  net.n = n;
  net.C = VectorXd::Zero(n);
  net.Lambda = MatrixXd::Zero(n, n);
  net.Lambda0 = VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    net.C[i] = 0.5 + dist(rng);
    net.Lambda0[i] = 0.1 + dist(rng);
    for (int j = i + 1; j < n; ++j)
      net.Lambda(i, j) = net.Lambda(j, i) = dist(rng);
  }
  auto sys = assemble_network(net);
  CHECK((sys.A - sys.A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * sys.A.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sys.A);
  CHECK(es.eigenvalues().maxCoeff() < 0.0);
}

TEST_CASE("thermal network: trajectories approach the steady state") {
  auto net = two_body_network();
  auto steady = network_steady_state(net);
  auto result = network_simulate(net, VectorXd::Zero(2), 20.0, 0.01);
  CHECK((result.states.back() - steady.offset).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(result.trace.max_abs_residual() <= 1e-11);

  // Free cooling: quadratic storage and the norm decay monotonically.
  auto cooling = two_body_network();
  cooling.P.setZero();
  cooling.C = Eigen::Vector2d(1.0, 3.0);
  auto free_run = network_simulate(cooling, Eigen::Vector2d(1.0, -0.5), 5.0, 0.05);
  for (std::size_t k = 1; k < free_run.states.size(); ++k) {
    const auto& prev = free_run.states[k - 1];
    const auto& cur = free_run.states[k];
    const double v_prev = 0.5 * prev.dot(cooling.C.cwiseProduct(prev));
    const double v_cur = 0.5 * cur.dot(cooling.C.cwiseProduct(cur));
    CHECK(v_cur <= v_prev + 1e-12);
  }

  // Tenfold heat capacity: same steady state, slower approach.
  auto heavy = two_body_network();
  heavy.C *= 10.0;
  CHECK((network_steady_state(heavy).offset - steady.offset).cwiseAbs().maxCoeff() <= 1e-14);
  auto fast = network_simulate(net, VectorXd::Zero(2), 2.0, 0.01);
  auto slow = network_simulate(heavy, VectorXd::Zero(2), 2.0, 0.01);
  const double dist_fast = (fast.states.back() - steady.offset).norm();
  const double dist_slow = (slow.states.back() - steady.offset).norm();
  CHECK(dist_slow > dist_fast);

  // Time-varying sources flow through the same balance bookkeeping.
  auto pulsed = two_body_network();
  pulsed.P_time = [](double t) { return Eigen::Vector2d(std::sin(t), 0.0); };
  auto run_p = network_simulate(pulsed, VectorXd::Zero(2), 3.0, 0.01);
  CHECK(run_p.trace.max_abs_residual() <= 1e-10);
  CHECK_THROWS_AS(network_simulate(pulsed, VectorXd::Zero(3), 1.0, 0.1), InvalidArgument);
}
