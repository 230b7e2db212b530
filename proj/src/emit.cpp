#include "cvqt/emit.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "cvqt/errors.hpp"

namespace cvqt {
namespace {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string opt_real(const std::optional<double>& v) { return v ? fmt_real(*v) : ""; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::optional<double> parse_opt_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw Error("malformed number '" + s + "' in table");
  return v;
}

// The value a %.12g round trip produces, so JSON and CSV agree.
double rounded(double v) { return std::strtod(fmt_real(v).c_str(), nullptr); }

nlohmann::ordered_json json_real(const std::optional<double>& v) {
  if (!v) return nullptr;
  return rounded(*v);
}

}  // namespace

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  for (std::size_t i = 0; i < kColumns.size(); ++i) out << (i ? "," : "") << kColumns[i];
  out << '\n';
  for (const auto& r : table) {
    out << csv_field(r.experiment) << ',' << csv_field(r.input) << ','
        << (r.n_qubits ? std::to_string(*r.n_qubits) : "") << ',' << opt_real(r.lambda) << ','
        << csv_field(r.param_name) << ',' << opt_real(r.param_value) << ',' << opt_real(r.epsilon) << ','
        << opt_real(r.fidelity) << ',' << opt_real(r.mean) << ',' << opt_real(r.std) << ','
        << csv_field(r.diagnostics) << '\n';
  }
  return out.str();
}

std::string to_json(const ResultTable& table) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : table) {
    nlohmann::ordered_json o;
    o["experiment"] = r.experiment;
    o["input"] = r.input;
    o["N"] = r.n_qubits ? nlohmann::ordered_json(*r.n_qubits) : nlohmann::ordered_json(nullptr);
    o["lambda"] = json_real(r.lambda);
    o["param_name"] = r.param_name;
    o["param_value"] = json_real(r.param_value);
    o["epsilon"] = json_real(r.epsilon);
    o["fidelity"] = json_real(r.fidelity);
    o["mean"] = json_real(r.mean);
    o["std"] = json_real(r.std);
    o["diagnostics"] = r.diagnostics;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

ResultTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("table has no header");
  const auto header = split_csv_line(line);
  if (header.size() != kColumns.size()) throw Error("unexpected table header");
  for (std::size_t i = 0; i < kColumns.size(); ++i) {
    if (header[i] != kColumns[i]) throw Error("unexpected column '" + header[i] + "'");
  }
  ResultTable out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != kColumns.size()) throw Error("row with " + std::to_string(f.size()) + " fields");
    ResultRow r;
    r.experiment = f[0];
    r.input = f[1];
    if (!f[2].empty()) r.n_qubits = std::stoi(f[2]);
    r.lambda = parse_opt_real(f[3]);
    r.param_name = f[4];
    r.param_value = parse_opt_real(f[5]);
    r.epsilon = parse_opt_real(f[6]);
    r.fidelity = parse_opt_real(f[7]);
    r.mean = parse_opt_real(f[8]);
    r.std = parse_opt_real(f[9]);
    r.diagnostics = f[10];
    out.push_back(std::move(r));
  }
  return out;
}

void emit(const ResultTable& table, OutputFormat format, const std::string& path) {
  const std::string text = format == OutputFormat::Csv ? to_csv(table) : to_json(table);
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw Error("failed writing table to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error("failed writing '" + path + "'");
}

void write_grid_dump(const std::string& path, const RMatrix& values, std::span<const double> qgrid,
                     std::span<const double> pgrid, const std::string& title) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "# " << title << '\n';
  out << "# dim " << values.rows() << ' ' << values.cols() << '\n';
  out << "# grid q " << fmt_real(qgrid.front()) << ' ' << fmt_real(qgrid.back()) << ' ' << qgrid.size() << " p "
      << fmt_real(pgrid.front()) << ' ' << fmt_real(pgrid.back()) << ' ' << pgrid.size() << '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) out << (j ? " " : "") << fmt_real(values(i, j));
    out << '\n';
  }
  out.close();
  if (!out) throw Error("failed writing '" + path + "'");
}

void write_state_dump(const std::string& path, const CVector& amps, const std::string& title) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "# " << title << '\n';
  out << "# dim " << amps.size() << '\n';
  out << "# grid fock 0 " << amps.size() - 1 << " columns re im\n";
  for (Eigen::Index n = 0; n < amps.size(); ++n) out << fmt_real(amps[n].real()) << ' ' << fmt_real(amps[n].imag()) << '\n';
  out.close();
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace cvqt
