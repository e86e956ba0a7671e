#include "mphs/mech/elastodynamics.hpp"

#include <cmath>
#include <utility>

namespace mphs::mech {

using Eigen::Matrix3d;
using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd Elastodynamics1D::pack(const VectorXd& v_nodes, const VectorXd& f_cells) const {
  if (v_nodes.size() != n_v() || f_cells.size() != n_cells)
    throw InvalidArgument("field sizes do not match the staggered bar layout");
  VectorXd x(n_v() + n_cells);
  x << v_nodes, f_cells;
  return x;
}

double Elastodynamics1D::axial_stress(double f) const {
  // (1,1) entry of the elastic gradient at F = diag(f, 1, 1).
  return 0.5 * material.hooke.uniaxial_modulus() * f * (f * f - 1.0);
}

Elastodynamics1D assemble_elastodynamics_ph(const MechMaterial& material, int n_cells,
                                            double length, bool body_force_ports) {
  if (n_cells < 2) throw UnsupportedDomain("bar needs at least 2 cells");
  if (length <= 0.0) throw UnsupportedDomain("bar length must be positive");

  Elastodynamics1D model;
  model.n_cells = n_cells;
  model.h = length / n_cells;
  model.material = material;
  model.body_force_ports = body_force_ports;

  const int nv = model.n_v();
  const int N = nv + n_cells;
  const double h = model.h;

  VectorXd flow_diag(N);
  for (int i = 0; i < nv; ++i) flow_diag[i] = material.rho * model.node_volume(i);
  for (int j = 0; j < n_cells; ++j) flow_diag[nv + j] = h;

  // J couples the nodal momentum balance to the stretch evolution:
  //   rho vol dv_i/dt = P_i - P_{i-1} (stress difference across the node),
  //   h df_j/dt = v_{j+1} - v_j,
  // with out-of-range stresses supplied by the traction ports.
  MatrixXd J = MatrixXd::Zero(N, N);
  for (int j = 0; j < n_cells; ++j) {
    J(j, nv + j) += 1.0;
    J(j + 1, nv + j) -= 1.0;
    J(nv + j, j) -= 1.0;
    J(nv + j, j + 1) += 1.0;
  }

  const double elastic_modulus = material.hooke.uniaxial_modulus();
  const double viscous_modulus = material.viscosity.uniaxial_modulus();
  const double rho = material.rho;

  core::PhSystem sys;
  sys.n_state = N;
  sys.E = flow_diag.asDiagonal();
  sys.J = std::move(J);

  sys.hamiltonian = [nv, n_cells, h, rho, elastic_modulus](const VectorXd& x) {
    double acc = 0.0;
    for (int i = 0; i < nv; ++i) {
      const double vol = (i == 0 || i == nv - 1) ? 0.5 * h : h;
      acc += 0.5 * rho * vol * x[i] * x[i];
    }
    for (int j = 0; j < n_cells; ++j) {
      const double s = x[nv + j] * x[nv + j] - 1.0;
      acc += h * 0.125 * elastic_modulus * s * s;
    }
    return acc;
  };

  sys.effort = [nv, n_cells, elastic_modulus](const VectorXd& x) -> VectorXd {
    VectorXd e = x;
    for (int j = 0; j < n_cells; ++j) {
      const double f = x[nv + j];
      e[nv + j] = 0.5 * elastic_modulus * f * (f * f - 1.0);
    }
    return e;
  };

  // Viscous Kelvin-Voigt stress fed back through the transposed difference
  // operator: P_v,j = zeta_eff f_j^2 (v_{j+1} - v_j)/h, dissipation
  // sum_j h zeta_eff f_j^2 (df_j/dt)^2 >= 0.
  if (viscous_modulus > 0.0) {
    sys.dissipation_apply = [nv, n_cells, h, viscous_modulus](const VectorXd& x,
                                                              const VectorXd& e) -> VectorXd {
      VectorXd out = VectorXd::Zero(x.size());
      for (int j = 0; j < n_cells; ++j) {
        const double f = x[nv + j];
        const double pv = viscous_modulus * f * f * (e[j + 1] - e[j]) / h;
        out[j] -= pv;
        out[j + 1] += pv;
      }
      return out;
    };
  }

  const int n_ports = 2 + (body_force_ports ? nv : 0);
  sys.n_input = n_ports;
  MatrixXd B = MatrixXd::Zero(N, n_ports);
  B(0, 0) = -1.0;       // left traction enters the first momentum row
  B(nv - 1, 1) = 1.0;   // right traction enters the last momentum row
  if (body_force_ports)
    for (int i = 0; i < nv; ++i) B(i, 2 + i) = rho * model.node_volume(i);
  sys.B = std::move(B);

  // Domain-valid samples: rest state and a gentle stretch/velocity field.
  VectorXd rest(N);
  rest.head(nv).setZero();
  rest.tail(n_cells).setOnes();
  VectorXd bent = rest;
  for (int i = 0; i < nv; ++i) bent[i] = 0.1 * std::sin(2.0 * i);
  for (int j = 0; j < n_cells; ++j) bent[nv + j] = 1.0 + 0.05 * std::cos(3.0 * j);
  sys.validation_states = {rest, bent};

  model.ph = core::build_ph_system(std::move(sys));
  return model;
}

VectorXd Elastodynamics3D::pack(const MechState& s) const {
  const int nc = grid.cells();
  if (s.v.cols() != nc || s.F.cols() != nc)
    throw InvalidArgument("field sizes do not match the grid");
  VectorXd x(12 * nc);
  for (int c = 0; c < nc; ++c) {
    for (int r = 0; r < 3; ++r) x[v_index(c, r)] = s.v(r, c);
    for (int e = 0; e < 9; ++e) x[f_index(c, e)] = s.F(e, c);
  }
  return x;
}

MechState Elastodynamics3D::unpack(const VectorXd& state) const {
  const int nc = grid.cells();
  if (state.size() != 12 * nc) throw InvalidArgument("state size does not match the grid");
  MechState s;
  s.v.resize(3, nc);
  s.F.resize(9, nc);
  for (int c = 0; c < nc; ++c) {
    for (int r = 0; r < 3; ++r) s.v(r, c) = state[v_index(c, r)];
    for (int e = 0; e < 9; ++e) s.F(e, c) = state[f_index(c, e)];
  }
  return s;
}

MechState Elastodynamics3D::rate(const VectorXd& state) const {
  const VectorXd rhs = ph.rhs_at(state, VectorXd());
  const int nc = grid.cells();
  const double vol = grid.cell_volume();
  MechState out;
  out.v.resize(3, nc);
  out.F.resize(9, nc);
  for (int c = 0; c < nc; ++c) {
    for (int r = 0; r < 3; ++r) out.v(r, c) = rhs[v_index(c, r)] / (material.rho * vol);
    for (int e = 0; e < 9; ++e) out.F(e, c) = rhs[f_index(c, e)] / vol;
  }
  return out;
}

Elastodynamics3D assemble_elastodynamics_ph(const MechMaterial& material,
                                            const fd::PeriodicGrid3& grid) {
  if (grid.n < 2) throw UnsupportedDomain("periodic box needs at least 2 cells per axis");
  if (grid.h <= 0.0) throw UnsupportedDomain("cell size must be positive");

  Elastodynamics3D model;
  model.grid = grid;
  model.material = material;

  const int nc = grid.cells();
  const int N = 12 * nc;
  const double vol = grid.cell_volume();
  const double w = vol / (2.0 * grid.h);  // volume-scaled central-difference weight

  VectorXd flow_diag(N);
  for (int c = 0; c < nc; ++c) {
    for (int r = 0; r < 3; ++r) flow_diag[model.v_index(c, r)] = material.rho * vol;
    for (int e = 0; e < 9; ++e) flow_diag[model.f_index(c, e)] = vol;
  }

  // vol dv_r/dt = vol d(P_ra)/dx_a  and  vol dF_ij/dt = vol dv_i/dx_j; the
  // paired ± entries make J exactly skew-symmetric on the periodic grid.
  MatrixXd J = MatrixXd::Zero(N, N);
  for (int c = 0; c < nc; ++c)
    for (int a = 0; a < 3; ++a) {
      const int cp = grid.shift(c, a, +1), cm = grid.shift(c, a, -1);
      for (int r = 0; r < 3; ++r) {
        J(model.v_index(c, r), model.f_index(cp, 3 * r + a)) += w;
        J(model.v_index(c, r), model.f_index(cm, 3 * r + a)) -= w;
        J(model.f_index(cp, 3 * r + a), model.v_index(c, r)) -= w;
        J(model.f_index(cm, 3 * r + a), model.v_index(c, r)) += w;
      }
    }

  const MechMaterial mat = material;
  const Elastodynamics3D layout = model;  // copy for capture (ph not yet set)

  core::PhSystem sys;
  sys.n_state = N;
  sys.E = flow_diag.asDiagonal();
  sys.J = std::move(J);

  sys.hamiltonian = [layout, mat, vol](const VectorXd& x) {
    double acc = 0.0;
    for (int c = 0; c < layout.grid.cells(); ++c) {
      Eigen::Vector3d v;
      Matrix3d F;
      for (int r = 0; r < 3; ++r) v[r] = x[layout.v_index(c, r)];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) F(i, j) = x[layout.f_index(c, 3 * i + j)];
      acc += vol * (0.5 * mat.rho * v.squaredNorm() + elastic_energy_and_gradient(mat, F).first);
    }
    return acc;
  };

  sys.effort = [layout, mat](const VectorXd& x) -> VectorXd {
    VectorXd e = x;
    for (int c = 0; c < layout.grid.cells(); ++c) {
      Matrix3d F;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) F(i, j) = x[layout.f_index(c, 3 * i + j)];
      const Matrix3d P = elastic_energy_and_gradient(mat, F).second;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) e[layout.f_index(c, 3 * i + j)] = P(i, j);
    }
    return e;
  };

  const bool viscous = mat.viscosity.c_trace != 0.0 || mat.viscosity.c_dev != 0.0;
  if (viscous) {
    sys.dissipation_apply = [layout, mat, vol](const VectorXd& x, const VectorXd& e) -> VectorXd {
      const int ncells = layout.grid.cells();
      fd::Field3 vfield(3, ncells);
      for (int c = 0; c < ncells; ++c)
        for (int r = 0; r < 3; ++r) vfield(r, c) = e[layout.v_index(c, r)];

      fd::Field9 pv(9, ncells);
      for (int c = 0; c < ncells; ++c) {
        Matrix3d F;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) F(i, j) = x[layout.f_index(c, 3 * i + j)];
        const Matrix3d Fdot = layout.grid.grad_vector(vfield, c);
        const Matrix3d S = Fdot.transpose() * F + F.transpose() * Fdot;
        fd::pack9(pv, c, 0.5 * F * mat.viscosity.apply(S));
      }

      VectorXd out = VectorXd::Zero(x.size());
      for (int c = 0; c < ncells; ++c) {
        const Eigen::Vector3d divp = layout.grid.div_matrix(pv, c);
        for (int r = 0; r < 3; ++r) out[layout.v_index(c, r)] = -vol * divp[r];
      }
      return out;
    };
  }

  VectorXd rest = VectorXd::Zero(N);
  for (int c = 0; c < nc; ++c)
    for (int i = 0; i < 3; ++i) rest[model.f_index(c, 3 * i + i)] = 1.0;
  VectorXd bent = rest;
  for (int c = 0; c < nc; ++c) {
    for (int r = 0; r < 3; ++r) bent[model.v_index(c, r)] = 0.05 * std::sin(1.0 + c + r);
    for (int e = 0; e < 9; ++e) bent[model.f_index(c, e)] += 0.02 * std::cos(2.0 + c + e);
  }
  sys.validation_states = {rest, bent};

  model.ph = core::build_ph_system(std::move(sys));
  return model;
}

}  // namespace mphs::mech
