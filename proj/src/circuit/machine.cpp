#include <mphs/circuit/machine.hpp>

#include <cmath>
#include <string>

namespace mphs::circuit {

using std::complex;

void MachineParams::validate() const {
  if (R1 < 0.0 || R2p < 0.0) throw InvalidArgument("winding resistances must be nonnegative");
  if (X1 < 0.0 || X2p < 0.0 || X3 < 0.0)
    throw InvalidArgument("reactances must be nonnegative");
  if (Np < 1) throw InvalidArgument("phase count must be at least 1");
  if (!(n_s > 0.0)) throw InvalidArgument("synchronous speed must be positive");
}

MachineParams MachineParams::with_resistance_scale(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("resistance scale must be positive");
  MachineParams scaled = *this;
  scaled.R1 *= factor;
  scaled.R2p *= factor;
  return scaled;
}

double slip(double n, double n_s) {
  if (!(n_s > 0.0)) throw InvalidArgument("synchronous speed must be positive");
  return (n_s - n) / n_s;
}

PhasorCurrents solve_phasors(const MachineParams& p, double s) {
  p.validate();
  const complex<double> j(0.0, 1.0);

  PhasorCurrents out;
  if (s == 0.0) {
    // Synchronous operation: infinite rotor impedance, rotor branch open.
    const complex<double> z1 = p.R1 + j * (p.X1 + p.X3);
    if (std::abs(z1) < 1e-14) throw SingularCircuit("stator impedance vanishes at s = 0");
    out.I1 = p.U1 / z1;
    out.I2p = complex<double>(0.0, 0.0);
    return out;
  }

  const complex<double> m00 = p.R1 + j * (p.X1 + p.X3);
  const complex<double> m01 = -j * p.X3;
  const complex<double> m10 = j * p.X3;
  const complex<double> m11 = -(p.R2p / s) - j * (p.X2p + p.X3);

  const complex<double> det = m00 * m11 - m01 * m10;
  const double scale = std::max({std::abs(m00) * std::abs(m11), std::abs(m01) * std::abs(m10),
                                 1e-300});
  if (std::abs(det) < 1e-14 * scale)
    throw SingularCircuit("equivalent-circuit matrix is singular");

  out.I1 = (p.U1 * m11 - m01 * p.U2p) / det;
  out.I2p = (m00 * p.U2p - m10 * p.U1) / det;
  return out;
}

WindingLosses winding_losses(const MachineParams& p, complex<double> I1, complex<double> I2p) {
  return {p.Np * p.R1 * std::norm(I1), p.Np * p.R2p * std::norm(I2p)};
}

LossBreakdown total_loss(double P_w1, double P_w2, double P_Fe, double P_R, double p_Z_fraction,
                         double P_total) {
  if (p_Z_fraction < 0.0 || p_Z_fraction > 1.0)
    throw InvalidArgument("supplementary-loss fraction must lie in [0, 1]");
  LossBreakdown out;
  out.P_w1 = P_w1;
  out.P_w2 = P_w2;
  out.P_Fe = P_Fe;
  out.P_R = P_R;
  out.P_Z = p_Z_fraction * P_total;
  for (double component : {out.P_Fe, out.P_R, out.P_w1, out.P_w2, out.P_Z})
    if (component < 0.0)
      throw NegativeLoss("loss component " + std::to_string(component) + " W is negative");
  out.P_V = out.P_Fe + out.P_R + out.P_w1 + out.P_w2 + out.P_Z;
  return out;
}

AirgapResult torque_power(const MachineParams& p, double s, complex<double> I2p) {
  if (s == 0.0) throw ZeroSlip("air-gap power is undefined at synchronous speed");
  AirgapResult out;
  out.P_airgap = p.Np * std::norm(I2p) * p.R2p / s;
  out.T_e = out.P_airgap / (2.0 * 3.14159265358979323846 * p.n_s);
  return out;
}

Eigen::VectorXd flux_linkage(const Eigen::MatrixXd& L, const Eigen::VectorXd& I, double psi_m) {
  if (L.rows() != L.cols()) throw AsymmetricInductance("inductance matrix must be square");
  const double scale = std::max(1.0, L.cwiseAbs().maxCoeff());
  if ((L - L.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw AsymmetricInductance("inductance matrix must be symmetric");
  if (I.size() != L.rows()) throw InvalidArgument("current vector size does not match L");
  return L * I + Eigen::VectorXd::Constant(L.rows(), psi_m);
}

std::vector<SweepPoint> slip_sweep(const MachineParams& p, const std::vector<double>& slips) {
  std::vector<SweepPoint> out;
  out.reserve(slips.size());
  for (double s : slips) {
    const PhasorCurrents currents = solve_phasors(p, s);
    const WindingLosses w = winding_losses(p, currents.I1, currents.I2p);
    SweepPoint point;
    point.s = s;
    point.abs_I1 = std::abs(currents.I1);
    point.abs_I2p = std::abs(currents.I2p);
    point.P_w1 = w.P_w1;
    point.P_w2 = w.P_w2;
    if (s != 0.0) {
      const AirgapResult ag = torque_power(p, s, currents.I2p);
      point.P_airgap = ag.P_airgap;
      point.T_e = ag.T_e;
    }
    out.push_back(point);
  }
  return out;
}

}  // namespace mphs::circuit
