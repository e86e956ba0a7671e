#include <mphs/core/integrate.hpp>

#include <Eigen/LU>
#include <cmath>
#include <sstream>

#include <mphs/io/csv.hpp>

namespace mphs::core {

double EnergyTrace::max_abs_residual() const {
  double m = 0.0;
  for (double r : balance_residual) m = std::max(m, std::abs(r));
  return m;
}

std::string EnergyTrace::to_csv() const {
  std::ostringstream os;
  os << "t,H,P_diss,P_supplied,residual\n";
  for (std::size_t k = 0; k < times.size(); ++k) {
    os << io::format_double(times[k]) << ',' << io::format_double(hamiltonian[k]) << ','
       << io::format_double(dissipated_power[k]) << ',' << io::format_double(supplied_power[k])
       << ',' << io::format_double(balance_residual[k]) << '\n';
  }
  return os.str();
}

namespace {

bool has_linear_fast_path(const PhSystem& sys) {
  return sys.effort_linear.size() > 0 && !sys.flow_map && !sys.structure &&
         !sys.dissipation_apply && !sys.rhs;
}

// Residual of the midpoint step equation F(x_+) = E(x_m)(x_+ - x_-) - dt g(x_m, u).
Vector midpoint_residual(const PhSystem& sys, const Vector& x_minus, const Vector& x_plus,
                         const Vector& u, double dt) {
  const Vector x_m = 0.5 * (x_minus + x_plus);
  Vector r;
  if (sys.flow_map)
    r.noalias() = sys.flow_map(x_m) * (x_plus - x_minus);
  else if (sys.flow_identity)
    r = x_plus - x_minus;
  else
    r.noalias() = sys.E * (x_plus - x_minus);
  r -= dt * sys.rhs_at(x_m, u);
  return r;
}

}  // namespace

Vector step_implicit_midpoint(const PhSystem& sys, const Vector& x, const Vector& u_mid,
                              double dt, const NewtonOptions& opts) {
  if (!(dt > 0.0)) throw InvalidArgument("step size must be positive");

  if (has_linear_fast_path(sys)) {
    // E x' = E x + dt (J - R) K (x + x')/2 + dt B u with e(x) = K x.
    const Matrix JR = (sys.J - sys.R) * sys.effort_linear;
    const Matrix lhs = sys.E - 0.5 * dt * JR;
    Vector b = (sys.E + 0.5 * dt * JR) * x;
    if (sys.n_input > 0 && u_mid.size() > 0) b += dt * sys.B * u_mid;
    Eigen::FullPivLU<Matrix> lu(lhs);
    if (!lu.isInvertible()) throw SingularFlowMap("linear midpoint step matrix is singular");
    return lu.solve(b);
  }

  // Newton iteration with a finite-difference Jacobian of the residual map,
  // factored once and refreshed when progress stalls.
  Vector xp = x;
  Vector F = midpoint_residual(sys, x, xp, u_mid, dt);
  const double f0 = std::max(1.0, F.norm());
  Eigen::PartialPivLU<Matrix> lu;
  bool have_jacobian = false;
  double last_norm = F.norm();

  for (int it = 0; it < opts.max_iter; ++it) {
    if (F.norm() <= opts.tol * f0) return xp;

    if (!have_jacobian) {
      const int n = sys.n_state;
      Matrix Jf(F.size(), n);
      Vector xpert = xp;
      for (int i = 0; i < n; ++i) {
        const double h = opts.fd_step * std::max(1.0, std::abs(xp[i]));
        xpert[i] = xp[i] + h;
        Jf.col(i) = (midpoint_residual(sys, x, xpert, u_mid, dt) - F) / h;
        xpert[i] = xp[i];
      }
      lu.compute(Jf);
      // Partial pivoting cannot certify rank; a suspicious pivot triggers the
      // definitive (and much slower) full-pivot check.
      const double pivot_floor = 1e-13 * std::max(1.0, Jf.cwiseAbs().maxCoeff());
      if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() <= pivot_floor &&
          !Eigen::FullPivLU<Matrix>(Jf).isInvertible())
        throw SingularFlowMap("midpoint step Jacobian is rank deficient");
      have_jacobian = true;
    }

    xp -= lu.solve(F);
    F = midpoint_residual(sys, x, xp, u_mid, dt);

    // Refresh the Jacobian if the residual stopped contracting.
    if (F.norm() > 0.5 * last_norm) have_jacobian = false;
    last_norm = F.norm();
  }
  if (F.norm() <= opts.tol * f0) return xp;
  throw NonConvergence(F.norm(), "implicit midpoint Newton iteration did not converge");
}

SimulateResult simulate(const PhSystem& sys, const Vector& x0, const InputSignal& u,
                        double t_end, double dt, const NewtonOptions& opts) {
  if (!(dt > 0.0)) throw InvalidArgument("step size must be positive");
  if (!(t_end > 0.0)) throw InvalidArgument("end time must be positive");

  const int n_steps = static_cast<int>(std::ceil(t_end / dt - 1e-12));

  SimulateResult out;
  out.states.reserve(n_steps + 1);
  out.states.push_back(x0);
  out.trace.times.push_back(0.0);
  out.trace.hamiltonian.push_back(sys.hamiltonian(x0));
  out.trace.dissipated_power.push_back(0.0);
  out.trace.supplied_power.push_back(0.0);
  out.trace.balance_residual.push_back(0.0);

  // Factor the linear step matrix once for constant-structure linear systems.
  const bool linear = has_linear_fast_path(sys);
  Eigen::FullPivLU<Matrix> lu;
  Matrix rhs_mat;
  if (linear) {
    const Matrix JR = (sys.J - sys.R) * sys.effort_linear;
    lu.compute(sys.E - 0.5 * dt * JR);
    if (!lu.isInvertible()) throw SingularFlowMap("linear midpoint step matrix is singular");
    rhs_mat = sys.E + 0.5 * dt * JR;
  }

  Vector x = x0;
  for (int k = 0; k < n_steps; ++k) {
    const double t_mid = (k + 0.5) * dt;
    const Vector u_mid = u ? u(t_mid) : Vector();
    Vector x_next;
    try {
      if (linear) {
        Vector b = rhs_mat * x;
        if (sys.n_input > 0 && u_mid.size() > 0) b += dt * sys.B * u_mid;
        x_next = lu.solve(b);
      } else {
        x_next = step_implicit_midpoint(sys, x, u_mid, dt, opts);
      }
    } catch (const Error& err) {
      throw NonConvergence(0.0, "step " + std::to_string(k) + " failed: " + err.what());
    }

    const Vector x_m = 0.5 * (x + x_next);
    const double p_diss = sys.dissipated_power_at(x_m);
    const double p_sup = sys.supplied_power_at(x_m, u_mid);
    const double h_prev = out.trace.hamiltonian.back();
    const double h_next = sys.hamiltonian(x_next);

    out.trace.times.push_back((k + 1) * dt);
    out.trace.hamiltonian.push_back(h_next);
    out.trace.dissipated_power.push_back(p_diss);
    out.trace.supplied_power.push_back(p_sup);
    out.trace.balance_residual.push_back(h_next - h_prev - dt * (p_sup - p_diss));

    out.states.push_back(x_next);
    x = x_next;
  }
  return out;
}

SimulateResult simulate(const PhSystem& sys, const Vector& x0, const Vector& u_const,
                        double t_end, double dt, const NewtonOptions& opts) {
  InputSignal u;
  if (u_const.size() > 0) u = [u_const](double) { return u_const; };
  return simulate(sys, x0, u, t_end, dt, opts);
}

PhSystem interconnect(const PhSystem& a, const PhSystem& b, const std::vector<int>& ports_a,
                      const std::vector<int>& ports_b) {
  if (ports_a.size() != ports_b.size())
    throw PortMismatch("port lists have different lengths");
  if (a.rhs || b.rhs || a.flow_map || b.flow_map || a.structure || b.structure ||
      a.dissipation_apply || b.dissipation_apply)
    throw InvalidArgument("interconnect requires constant-structure systems");
  for (int p : ports_a)
    if (p < 0 || p >= a.n_input) throw PortMismatch("port index out of range on first system");
  for (int p : ports_b)
    if (p < 0 || p >= b.n_input) throw PortMismatch("port index out of range on second system");

  const int ne_a = a.n_effort(), ne_b = b.n_effort();
  const int n = a.n_state + b.n_state;
  const int k = static_cast<int>(ports_a.size());

  Matrix Ba_p(ne_a, k), Bb_p(ne_b, k);
  for (int i = 0; i < k; ++i) {
    Ba_p.col(i) = a.B.col(ports_a[i]);
    Bb_p.col(i) = b.B.col(ports_b[i]);
  }

  PhSystem c;
  c.n_state = n;
  c.E = Matrix::Zero(ne_a + ne_b, n);
  c.E.topLeftCorner(ne_a, a.n_state) = a.E;
  c.E.bottomRightCorner(ne_b, b.n_state) = b.E;

  // Gyrator coupling u_a = y_b, u_b = -y_a folds into a block-skew structure.
  c.J = Matrix::Zero(ne_a + ne_b, ne_a + ne_b);
  c.J.topLeftCorner(ne_a, ne_a) = a.J;
  c.J.bottomRightCorner(ne_b, ne_b) = b.J;
  c.J.topRightCorner(ne_a, ne_b) = Ba_p * Bb_p.transpose();
  c.J.bottomLeftCorner(ne_b, ne_a) = -Bb_p * Ba_p.transpose();

  c.R = Matrix::Zero(ne_a + ne_b, ne_a + ne_b);
  c.R.topLeftCorner(ne_a, ne_a) = a.R;
  c.R.bottomRightCorner(ne_b, ne_b) = b.R;

  // Remaining (uncoupled) inputs keep their order: first a's, then b's.
  std::vector<int> rest_a, rest_b;
  for (int i = 0; i < a.n_input; ++i)
    if (std::find(ports_a.begin(), ports_a.end(), i) == ports_a.end()) rest_a.push_back(i);
  for (int i = 0; i < b.n_input; ++i)
    if (std::find(ports_b.begin(), ports_b.end(), i) == ports_b.end()) rest_b.push_back(i);
  c.n_input = static_cast<int>(rest_a.size() + rest_b.size());
  c.B = Matrix::Zero(ne_a + ne_b, c.n_input);
  for (std::size_t i = 0; i < rest_a.size(); ++i) c.B.col(i).head(ne_a) = a.B.col(rest_a[i]);
  for (std::size_t i = 0; i < rest_b.size(); ++i)
    c.B.col(rest_a.size() + i).tail(ne_b) = b.B.col(rest_b[i]);

  const int na = a.n_state;
  auto ea = a.effort, eb = b.effort;
  const int nb = b.n_state;
  c.effort = [ea, eb, na, nb, ne_a, ne_b](const Vector& x) {
    Vector e(ne_a + ne_b);
    const Vector xa = x.head(na), xb = x.tail(nb);
    e.head(ne_a) = ea ? ea(xa) : xa;
    e.tail(ne_b) = eb ? eb(xb) : xb;
    return e;
  };
  auto Ha = a.hamiltonian, Hb = b.hamiltonian;
  c.hamiltonian = [Ha, Hb, na, nb](const Vector& x) {
    return Ha(x.head(na)) + Hb(x.tail(nb));
  };
  if (a.grad_H && b.grad_H) {
    auto ga = a.grad_H, gb = b.grad_H;
    c.grad_H = [ga, gb, na, nb](const Vector& x) {
      Vector g(na + nb);
      g.head(na) = ga(x.head(na));
      g.tail(nb) = gb(x.tail(nb));
      return g;
    };
  }
  if (a.effort_linear.size() > 0 && b.effort_linear.size() > 0) {
    c.effort_linear = Matrix::Zero(ne_a + ne_b, n);
    c.effort_linear.topLeftCorner(ne_a, na) = a.effort_linear;
    c.effort_linear.bottomRightCorner(ne_b, nb) = b.effort_linear;
  }
  for (const Vector& xa : a.validation_states)
    for (const Vector& xb : b.validation_states) {
      Vector x(n);
      x.head(na) = xa;
      x.tail(nb) = xb;
      c.validation_states.push_back(x);
      break;  // one pairing per state of a keeps validation cheap
    }
  return build_ph_system(std::move(c));
}

}  // namespace mphs::core
