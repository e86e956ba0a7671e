#include <mphs/thermal/network.hpp>

#include <Eigen/LU>
#include <string>
#include <utility>

namespace mphs::thermal {

using core::Matrix;
using core::Vector;

namespace {

void validate_network(const ThermalNetwork& net) {
  if (net.n <= 0) throw StructureError("network", "node count must be positive");
  const int n = net.n;
  if (net.C.size() != n) throw StructureError("network", "C must have one entry per node");
  for (int i = 0; i < n; ++i)
    if (!(net.C[i] > 0.0)) throw StructureError("network", "heat capacities must be positive");
  if (net.Lambda.rows() != n || net.Lambda.cols() != n)
    throw StructureError("network", "Lambda must be N x N");
  const double scale = std::max(1.0, net.Lambda.cwiseAbs().maxCoeff());
  if ((net.Lambda - net.Lambda.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw StructureError("network", "Lambda must be symmetric");
  for (int i = 0; i < n; ++i) {
    if (net.Lambda(i, i) != 0.0)
      throw StructureError("network", "Lambda diagonal must be zero");
    for (int j = 0; j < n; ++j)
      if (net.Lambda(i, j) < 0.0)
        throw StructureError("network", "Lambda entries must be nonnegative");
  }
  if (net.Lambda0.size() != n)
    throw StructureError("network", "Lambda0 must have one entry per node");
  for (int i = 0; i < n; ++i)
    if (net.Lambda0[i] < 0.0)
      throw StructureError("network", "Lambda0 entries must be nonnegative");
  if (net.P.size() != 0 && net.P.size() != n)
    throw StructureError("network", "P must be empty or have one entry per node");
}

}  // namespace

NetworkSystem assemble_network(const ThermalNetwork& net) {
  validate_network(net);
  const int n = net.n;

  Matrix a = net.Lambda;
  for (int i = 0; i < n; ++i) a(i, i) = -net.Lambda0[i] - net.Lambda.row(i).sum();

  NetworkSystem out;
  out.E = net.C.asDiagonal();
  out.A = a;
  out.P = net.P.size() == n ? net.P : Vector::Zero(n);

  core::PhSystem sys;
  sys.n_state = n;
  sys.n_input = n;
  sys.E = out.E;
  sys.J = Matrix::Zero(n, n);
  sys.R = -a;
  sys.B = Matrix::Identity(n, n);
  sys.effort_linear = Matrix::Identity(n, n);
  const Vector c = net.C;
  sys.hamiltonian = [c](const Vector& x) { return 0.5 * x.dot(c.cwiseProduct(x)); };
  sys.grad_H = [c](const Vector& x) { return Vector(c.cwiseProduct(x)); };
  out.ph = core::build_ph_system(std::move(sys));
  return out;
}

NetworkSteadyState network_steady_state(const ThermalNetwork& net) {
  NetworkSystem sys = assemble_network(net);
  Eigen::FullPivLU<Matrix> lu(sys.A);
  if (!lu.isInvertible())
    throw SingularNetwork("network has no unique steady state; some component is isolated "
                          "from the ambient");
  NetworkSteadyState out;
  out.offset = lu.solve(-sys.P);
  out.temperature = out.offset.array() + net.theta0;
  return out;
}

core::SimulateResult network_simulate(const ThermalNetwork& net, const Vector& x0, double t_end,
                                      double dt) {
  NetworkSystem sys = assemble_network(net);
  const int n = net.n;
  if (x0.size() != n) throw InvalidArgument("initial offsets must have one entry per node");

  core::InputSignal u;
  if (net.P_time) {
    auto p_time = net.P_time;
    u = [p_time, n](double t) {
      Vector p = p_time(t);
      if (p.size() != n) throw InvalidArgument("time-varying source has wrong dimension");
      return p;
    };
  } else {
    const Vector p = sys.P;
    u = [p](double) { return p; };
  }
  return core::simulate(sys.ph, x0, u, t_end, dt);
}

}  // namespace mphs::thermal
