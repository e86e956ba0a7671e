#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include <mphs/circuit/machine.hpp>
#include <mphs/coupled/model.hpp>
#include <mphs/em/types.hpp>
#include <mphs/mech/rotor.hpp>
#include <mphs/mor/reduce.hpp>
#include <mphs/thermal/network.hpp>

namespace mphs::io {

// ---------------------------------------------------------------------------
// Files. Read failures and malformed content surface as InvalidArgument so
// front ends can map them to a configuration-error exit uniformly.
// ---------------------------------------------------------------------------
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// ---------------------------------------------------------------------------
// JSON forms. Matrices are nested arrays of rows (row-major), vectors are
// flat arrays, complex numbers are [re, im] pairs. Doubles serialize with
// shortest round-trip formatting, so write -> read -> write is byte-stable.
// ---------------------------------------------------------------------------

// {"N", "C", "Lambda", "Lambda0", "P", "theta0"}
std::string to_json(const thermal::ThermalNetwork& net);
thermal::ThermalNetwork thermal_network_from_json(const std::string& text);

// {"R1","X1","X3","R2p","X2p","Np","U1":[re,im],"U2p":[re,im],"ns"}
std::string to_json(const circuit::MachineParams& params);
circuit::MachineParams machine_params_from_json(const std::string& text);

// {"M","D","K","G","Z","K_G","omega"}; empty optional blocks serialize as [].
std::string to_json(const mech::SecondOrderSystem& sys);
mech::SecondOrderSystem second_order_from_json(const std::string& text);

// {"E","A","B","C"}
std::string to_json(const mor::LtiSystem& sys);
mor::LtiSystem lti_from_json(const std::string& text);

// {"E","A","B","C","V","W","hsv","error_bound"}; round-trips losslessly.
std::string to_json(const mor::ReducedModel& model);
mor::ReducedModel reduced_model_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// CSV tables. All numeric cells use the shortest round-trip representation.
// ---------------------------------------------------------------------------

// Generic trajectory: header "t,<labels...>", one row per sample.
std::string trajectory_csv(const std::vector<std::string>& labels,
                           const std::vector<double>& times,
                           const std::vector<Eigen::VectorXd>& states);

// Thermal-network trajectory "t,theta_1..theta_N" in absolute temperatures
// (simulation states are offsets; theta0 is added per cell).
std::string network_trajectory_csv(const std::vector<double>& times,
                                   const std::vector<Eigen::VectorXd>& offsets, double theta0);

// Slip sweep "s,|I1|,|I2p|,Pw1,Pw2,Pairgap,Te".
std::string slip_sweep_csv(const std::vector<circuit::SweepPoint>& points);

// Flat field table "i,j,value" (i = row, j = column) and its inverse; the
// parsed size is taken from the largest indices present.
std::string field_csv(const Eigen::MatrixXd& field);
Eigen::MatrixXd field_from_csv(const std::string& text);

// JSON header describing grid extents and staggered field placement,
// written alongside field tables.
std::string grid_header_json(const em::EmGrid1D& grid, const std::string& staggering);
std::string grid_header_json(const em::EmGrid2D& grid, const std::string& staggering);

// ---------------------------------------------------------------------------
// Coupled-state snapshots: a JSON header naming the grid and the column
// layout plus a CSV with one row per cell in the fixed field order
// E,B,v,F(row-major),theta.
// ---------------------------------------------------------------------------
std::string coupled_snapshot_header_json(int n, double h, const std::string& data_path);
std::string coupled_state_csv(const coupled::CoupledState& state);
coupled::CoupledState coupled_state_from_csv(const std::string& text);

}  // namespace mphs::io
