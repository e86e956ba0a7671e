#include <mphs/io/serialize.hpp>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <mphs/errors.hpp>
#include <mphs/io/csv.hpp>

namespace mphs::io {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw InvalidArgument(std::string("missing JSON key '") + key + "'");
  return *it;
}

double number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw InvalidArgument(std::string("JSON key '") + key + "' must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer())
    throw InvalidArgument(std::string("JSON key '") + key + "' must be an integer");
  return v.get<int>();
}

json vector_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json complex_json(const std::complex<double>& z) { return json::array({z.real(), z.imag()}); }

Eigen::VectorXd vector_from(const json& j, const char* key) {
  const json& arr = require(j, key);
  if (!arr.is_array()) throw InvalidArgument(std::string("JSON key '") + key + "' must be an array");
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw InvalidArgument(std::string("JSON key '") + key + "' must hold numbers");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_from(const json& j, const char* key) {
  const json& rows = require(j, key);
  if (!rows.is_array()) throw InvalidArgument(std::string("JSON key '") + key + "' must be an array");
  if (rows.empty()) return Eigen::MatrixXd();
  const std::size_t n_cols = rows[0].is_array() ? rows[0].size() : 0;
  Eigen::MatrixXd m(rows.size(), n_cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const json& row = rows[r];
    if (!row.is_array() || row.size() != n_cols)
      throw InvalidArgument(std::string("JSON key '") + key + "' must be rectangular rows");
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (!row[c].is_number())
        throw InvalidArgument(std::string("JSON key '") + key + "' must hold numbers");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
    }
  }
  return m;
}

std::complex<double> complex_from(const json& j, const char* key) {
  const json& pair = require(j, key);
  if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
    throw InvalidArgument(std::string("JSON key '") + key + "' must be a [re, im] pair");
  return {pair[0].get<double>(), pair[1].get<double>()};
}

double parse_cell(const std::string& token, const char* what) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw InvalidArgument(std::string("malformed CSV ") + what + " '" + token + "'");
  return value;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Rows of the table body (header stripped), ignoring a trailing newline.
std::vector<std::string> body_lines(const std::string& text, const std::string& header,
                                    const char* what) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw InvalidArgument(std::string(what) + ": expected header '" + header + "'");
  std::vector<std::string> lines;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write file '" + path + "'");
  out << text;
  if (!out) throw InvalidArgument("write failed for '" + path + "'");
}

std::string to_json(const thermal::ThermalNetwork& net) {
  json j;
  j["N"] = net.n;
  j["C"] = vector_json(net.C);
  j["Lambda"] = matrix_json(net.Lambda);
  j["Lambda0"] = vector_json(net.Lambda0);
  j["P"] = vector_json(net.P.size() ? net.P : Eigen::VectorXd::Zero(net.n).eval());
  j["theta0"] = net.theta0;
  return j.dump(2) + "\n";
}

thermal::ThermalNetwork thermal_network_from_json(const std::string& text) {
  const json j = parse(text);
  thermal::ThermalNetwork net;
  net.n = integer(j, "N");
  net.C = vector_from(j, "C");
  net.Lambda = matrix_from(j, "Lambda");
  net.Lambda0 = vector_from(j, "Lambda0");
  net.P = vector_from(j, "P");
  net.theta0 = number(j, "theta0");
  return net;
}

std::string to_json(const circuit::MachineParams& params) {
  json j;
  j["R1"] = params.R1;
  j["X1"] = params.X1;
  j["X3"] = params.X3;
  j["R2p"] = params.R2p;
  j["X2p"] = params.X2p;
  j["Np"] = params.Np;
  j["U1"] = complex_json(params.U1);
  j["U2p"] = complex_json(params.U2p);
  j["ns"] = params.n_s;
  return j.dump(2) + "\n";
}

circuit::MachineParams machine_params_from_json(const std::string& text) {
  const json j = parse(text);
  circuit::MachineParams p;
  p.R1 = number(j, "R1");
  p.X1 = number(j, "X1");
  p.X3 = number(j, "X3");
  p.R2p = number(j, "R2p");
  p.X2p = number(j, "X2p");
  p.Np = integer(j, "Np");
  p.U1 = complex_from(j, "U1");
  p.U2p = complex_from(j, "U2p");
  p.n_s = number(j, "ns");
  return p;
}

std::string to_json(const mech::SecondOrderSystem& sys) {
  json j;
  j["M"] = matrix_json(sys.M);
  j["D"] = matrix_json(sys.D);
  j["K"] = matrix_json(sys.K);
  j["G"] = matrix_json(sys.G);
  j["Z"] = matrix_json(sys.Z);
  j["K_G"] = matrix_json(sys.K_G);
  j["omega"] = sys.omega;
  return j.dump(2) + "\n";
}

mech::SecondOrderSystem second_order_from_json(const std::string& text) {
  const json j = parse(text);
  mech::SecondOrderSystem sys;
  sys.M = matrix_from(j, "M");
  sys.D = matrix_from(j, "D");
  sys.K = matrix_from(j, "K");
  if (j.contains("G")) sys.G = matrix_from(j, "G");
  if (j.contains("Z")) sys.Z = matrix_from(j, "Z");
  if (j.contains("K_G")) sys.K_G = matrix_from(j, "K_G");
  if (j.contains("omega")) sys.omega = number(j, "omega");
  return sys;
}

std::string to_json(const mor::LtiSystem& sys) {
  json j;
  j["E"] = matrix_json(sys.E);
  j["A"] = matrix_json(sys.A);
  j["B"] = matrix_json(sys.B);
  j["C"] = matrix_json(sys.C);
  return j.dump(2) + "\n";
}

mor::LtiSystem lti_from_json(const std::string& text) {
  const json j = parse(text);
  mor::LtiSystem sys;
  sys.E = matrix_from(j, "E");
  sys.A = matrix_from(j, "A");
  sys.B = matrix_from(j, "B");
  sys.C = matrix_from(j, "C");
  return sys;
}

std::string to_json(const mor::ReducedModel& model) {
  json j;
  j["E"] = matrix_json(model.E);
  j["A"] = matrix_json(model.A);
  j["B"] = matrix_json(model.B);
  j["C"] = matrix_json(model.C);
  j["V"] = matrix_json(model.V);
  j["W"] = matrix_json(model.W);
  j["hsv"] = vector_json(model.hsv);
  j["error_bound"] = model.error_bound;
  return j.dump(2) + "\n";
}

mor::ReducedModel reduced_model_from_json(const std::string& text) {
  const json j = parse(text);
  mor::ReducedModel m;
  m.E = matrix_from(j, "E");
  m.A = matrix_from(j, "A");
  m.B = matrix_from(j, "B");
  m.C = matrix_from(j, "C");
  m.V = matrix_from(j, "V");
  m.W = matrix_from(j, "W");
  m.hsv = vector_from(j, "hsv");
  m.error_bound = number(j, "error_bound");
  return m;
}

std::string trajectory_csv(const std::vector<std::string>& labels,
                           const std::vector<double>& times,
                           const std::vector<Eigen::VectorXd>& states) {
  if (times.size() != states.size())
    throw InvalidArgument("trajectory needs one state per time sample");
  std::ostringstream out;
  out << "t";
  for (const auto& label : labels) out << ',' << label;
  out << '\n';
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (states[k].size() != static_cast<Eigen::Index>(labels.size()))
      throw InvalidArgument("trajectory state size does not match the label count");
    out << format_double(times[k]);
    for (Eigen::Index i = 0; i < states[k].size(); ++i) out << ',' << format_double(states[k][i]);
    out << '\n';
  }
  return out.str();
}

std::string network_trajectory_csv(const std::vector<double>& times,
                                   const std::vector<Eigen::VectorXd>& offsets, double theta0) {
  if (offsets.empty()) throw InvalidArgument("trajectory needs at least one sample");
  std::vector<std::string> labels;
  for (Eigen::Index i = 0; i < offsets.front().size(); ++i)
    labels.push_back("theta_" + std::to_string(i + 1));
  std::vector<Eigen::VectorXd> absolute;
  absolute.reserve(offsets.size());
  for (const auto& x : offsets) absolute.push_back(x.array() + theta0);
  return trajectory_csv(labels, times, absolute);
}

std::string slip_sweep_csv(const std::vector<circuit::SweepPoint>& points) {
  std::ostringstream out;
  out << "s,|I1|,|I2p|,Pw1,Pw2,Pairgap,Te\n";
  for (const auto& p : points) {
    out << format_double(p.s) << ',' << format_double(p.abs_I1) << ','
        << format_double(p.abs_I2p) << ',' << format_double(p.P_w1) << ','
        << format_double(p.P_w2) << ',' << format_double(p.P_airgap) << ','
        << format_double(p.T_e) << '\n';
  }
  return out.str();
}

std::string field_csv(const Eigen::MatrixXd& field) {
  std::ostringstream out;
  out << "i,j,value\n";
  for (Eigen::Index i = 0; i < field.rows(); ++i)
    for (Eigen::Index j = 0; j < field.cols(); ++j)
      out << i << ',' << j << ',' << format_double(field(i, j)) << '\n';
  return out.str();
}

Eigen::MatrixXd field_from_csv(const std::string& text) {
  const auto lines = body_lines(text, "i,j,value", "field table");
  Eigen::Index rows = 0, cols = 0;
  std::vector<std::array<double, 3>> entries;
  entries.reserve(lines.size());
  for (const auto& line : lines) {
    const auto tokens = split_line(line);
    if (tokens.size() != 3) throw InvalidArgument("field table rows need i,j,value");
    const double i = parse_cell(tokens[0], "index");
    const double j = parse_cell(tokens[1], "index");
    const double v = parse_cell(tokens[2], "value");
    if (i < 0 || j < 0 || i != static_cast<Eigen::Index>(i) || j != static_cast<Eigen::Index>(j))
      throw InvalidArgument("field table indices must be non-negative integers");
    rows = std::max(rows, static_cast<Eigen::Index>(i) + 1);
    cols = std::max(cols, static_cast<Eigen::Index>(j) + 1);
    entries.push_back({i, j, v});
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  for (const auto& e : entries)
    m(static_cast<Eigen::Index>(e[0]), static_cast<Eigen::Index>(e[1])) = e[2];
  return m;
}

std::string grid_header_json(const em::EmGrid1D& grid, const std::string& staggering) {
  json j;
  j["dimension"] = 1;
  j["n_cells"] = grid.n_cells;
  j["length"] = grid.length;
  j["h"] = grid.h();
  j["boundary"] = {em::boundary_name(grid.left.kind), em::boundary_name(grid.right.kind)};
  j["staggering"] = staggering;
  return j.dump(2) + "\n";
}

std::string grid_header_json(const em::EmGrid2D& grid, const std::string& staggering) {
  json j;
  j["dimension"] = 2;
  j["nx"] = grid.nx;
  j["ny"] = grid.ny;
  j["lx"] = grid.lx;
  j["ly"] = grid.ly;
  j["hx"] = grid.hx();
  j["hy"] = grid.hy();
  j["boundary"] = {em::boundary_name(grid.left.kind), em::boundary_name(grid.right.kind),
                   em::boundary_name(grid.bottom.kind), em::boundary_name(grid.top.kind)};
  j["staggering"] = staggering;
  return j.dump(2) + "\n";
}

namespace {

const char* kCoupledCsvHeader =
    "cell,E_x,E_y,E_z,B_x,B_y,B_z,v_x,v_y,v_z,"
    "F_11,F_12,F_13,F_21,F_22,F_23,F_31,F_32,F_33,theta";

}  // namespace

std::string coupled_snapshot_header_json(int n, double h, const std::string& data_path) {
  json j;
  j["kind"] = "coupled_state";
  j["n"] = n;
  j["h"] = h;
  j["cells"] = n * n * n;
  j["fields"] = {"E", "B", "v", "F", "theta"};
  j["layout"] = "one CSV row per cell; F in row-major order";
  j["data"] = data_path;
  return j.dump(2) + "\n";
}

std::string coupled_state_csv(const coupled::CoupledState& state) {
  const Eigen::Index cells = state.theta.size();
  if (state.E.cols() != cells || state.B.cols() != cells || state.v.cols() != cells ||
      state.F.cols() != cells)
    throw InvalidArgument("snapshot fields must share one cell count");
  std::ostringstream out;
  out << kCoupledCsvHeader << '\n';
  for (Eigen::Index c = 0; c < cells; ++c) {
    out << c;
    for (int k = 0; k < 3; ++k) out << ',' << format_double(state.E(k, c));
    for (int k = 0; k < 3; ++k) out << ',' << format_double(state.B(k, c));
    for (int k = 0; k < 3; ++k) out << ',' << format_double(state.v(k, c));
    for (int k = 0; k < 9; ++k) out << ',' << format_double(state.F(k, c));
    out << ',' << format_double(state.theta[c]) << '\n';
  }
  return out.str();
}

coupled::CoupledState coupled_state_from_csv(const std::string& text) {
  const auto lines = body_lines(text, kCoupledCsvHeader, "snapshot table");
  const int cells = static_cast<int>(lines.size());
  if (cells == 0) throw InvalidArgument("snapshot table has no cells");
  coupled::CoupledState s;
  s.E.resize(3, cells);
  s.B.resize(3, cells);
  s.v.resize(3, cells);
  s.F.resize(9, cells);
  s.theta.resize(cells);
  for (int c = 0; c < cells; ++c) {
    const auto tokens = split_line(lines[c]);
    if (tokens.size() != 20) throw InvalidArgument("snapshot rows need 20 columns");
    if (parse_cell(tokens[0], "cell index") != c)
      throw InvalidArgument("snapshot rows must be ordered by cell index");
    int t = 1;
    for (int k = 0; k < 3; ++k) s.E(k, c) = parse_cell(tokens[t++], "value");
    for (int k = 0; k < 3; ++k) s.B(k, c) = parse_cell(tokens[t++], "value");
    for (int k = 0; k < 3; ++k) s.v(k, c) = parse_cell(tokens[t++], "value");
    for (int k = 0; k < 9; ++k) s.F(k, c) = parse_cell(tokens[t++], "value");
    s.theta[c] = parse_cell(tokens[t], "value");
  }
  return s;
}

}  // namespace mphs::io
