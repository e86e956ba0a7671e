#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include <mphs/errors.hpp>

namespace mphs::circuit {

// Equivalent-circuit matrix is numerically singular.
class SingularCircuit : public Error {
public:
  explicit SingularCircuit(const std::string& detail) : Error("SingularCircuit", detail) {}
};

// Air-gap power and torque are undefined at synchronous speed.
class ZeroSlip : public Error {
public:
  explicit ZeroSlip(const std::string& detail) : Error("ZeroSlip", detail) {}
};

class AsymmetricInductance : public Error {
public:
  explicit AsymmetricInductance(const std::string& detail)
      : Error("AsymmetricInductance", detail) {}
};

class NegativeLoss : public Error {
public:
  explicit NegativeLoss(const std::string& detail) : Error("NegativeLoss", detail) {}
};

// Per-phase steady-state parameters of an induction machine: stator
// resistance/leakage reactance (R1, X1), rotor quantities referred to the
// stator (R2p, X2p), magnetizing reactance X3, phase count Np, terminal
// voltage phasors and synchronous speed n_s (rev/s). Reactances are taken at
// the operating frequency.
struct MachineParams {
  double R1 = 0.0, X1 = 0.0, X3 = 0.0;
  double R2p = 0.0, X2p = 0.0;
  int Np = 3;
  std::complex<double> U1{0.0, 0.0};
  std::complex<double> U2p{0.0, 0.0};  // 0 = short-circuited rotor
  double n_s = 0.0;

  void validate() const;

  // Same machine with temperature-adjusted winding resistances (reactances
  // unchanged).
  MachineParams with_resistance_scale(double factor) const;
};

double slip(double n, double n_s);

struct PhasorCurrents {
  std::complex<double> I1{0.0, 0.0};
  std::complex<double> I2p{0.0, 0.0};
};

// Solves the two phasor mesh equations
//   U1  = (R1 + j(X1+X3)) I1 - jX3 I2p
//   U2p = jX3 I1 - (R2p/s + j(X2p+X3)) I2p
// for the stator and referred rotor currents. s = 0 is the synchronous
// limit: the rotor branch is open, I2p = 0 exactly.
PhasorCurrents solve_phasors(const MachineParams& p, double s);

struct WindingLosses {
  double P_w1 = 0.0, P_w2 = 0.0;
};

// Ohmic losses Np·R1·|I1|² and Np·R2p·|I2p|².
WindingLosses winding_losses(const MachineParams& p, std::complex<double> I1,
                             std::complex<double> I2p);

struct LossBreakdown {
  double P_Fe = 0.0, P_R = 0.0, P_w1 = 0.0, P_w2 = 0.0, P_Z = 0.0;
  double P_V = 0.0;  // sum of the five components
};

// Combines iron, friction and winding losses with supplementary losses taken
// as a fraction of the total converted power.
LossBreakdown total_loss(double P_w1, double P_w2, double P_Fe, double P_R, double p_Z_fraction,
                         double P_total);

struct AirgapResult {
  double P_airgap = 0.0;  // power crossing the air gap, W
  double T_e = 0.0;       // electromagnetic torque, N·m
};

// Standard air-gap relations P = Np·|I2p|²·R2p/s and T = P/(2π·n_s). These
// are surrogate-level outputs without an error bound; the rotor winding loss
// is the slip fraction s·P_airgap and the mechanical share is (1-s)·P_airgap.
AirgapResult torque_power(const MachineParams& p, double s, std::complex<double> I2p);

// ψ = L·I + psi_m·1 with a symmetric inductance matrix.
Eigen::VectorXd flux_linkage(const Eigen::MatrixXd& L, const Eigen::VectorXd& I, double psi_m);

struct SweepPoint {
  double s = 0.0;
  double abs_I1 = 0.0, abs_I2p = 0.0;
  double P_w1 = 0.0, P_w2 = 0.0;
  double P_airgap = 0.0, T_e = 0.0;
};

// Characteristic curves over a list of slip values; s = 0 entries report the
// synchronous limit (zero rotor current, power and torque).
std::vector<SweepPoint> slip_sweep(const MachineParams& p, const std::vector<double>& slips);

}  // namespace mphs::circuit
