#include "cvqt/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cvqt/errors.hpp"
#include "cvqt/hilbert.hpp"

namespace cvqt {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_real(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError(field, "expected a number, got '" + text + "'");
  }
  return v;
}

long long to_int(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError(field, "expected an integer, got '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(field, "expected true or false, got '" + text + "'");
}

std::vector<std::string> to_list(const std::string& field, const std::string& text) {
  std::vector<std::string> out;
  for (auto& item : split(text, ',')) {
    if (item.empty()) throw ConfigError(field, "empty list entry");
    out.push_back(item);
  }
  if (out.empty()) throw ConfigError(field, "list is empty");
  return out;
}

const std::set<std::string> kKnownKeys = {
    "experiment", "inputs",       "N",         "lambda",        "noise",         "channels",
    "nbar",       "ensemble_size", "tune_samples", "n_terms",   "dim",           "seed",
    "engine",     "fidelity",     "lambda_min", "lambda_max",   "coarse_points", "dump_dir",
    "wigner_extent", "wigner_points", "format", "out",          "threads"};

const std::set<std::string> kExperiments = {"sweep-lambda", "fock-scaling", "random-ensemble",
                                            "noise-sweep",  "cat-demo",     "tilde0-report"};

KeyValues defaults_for(const std::string& experiment) {
  if (experiment == "sweep-lambda") return {{"inputs", "fock:1"}, {"N", "4"}, {"lambda", "lin:0.02:0.8:40"}};
  if (experiment == "fock-scaling") return {{"inputs", "fock:1,fock:3,fock:7"}, {"N", "3..10"}, {"fidelity", "false"}};
  if (experiment == "random-ensemble") {
    return {{"nbar", "1,3,5,7"}, {"N", "3..7"}, {"fidelity", "false"}};
  }
  if (experiment == "noise-sweep") {
    return {{"inputs", "fock:5,random:3"},
            {"N", "6"},
            {"lambda", "0.07"},
            {"noise", "lin:0:0.15:7"},
            {"channels", "dephasing,amplitude-damping"}};
  }
  if (experiment == "cat-demo") return {{"inputs", "cat:2"}, {"N", "4"}, {"lambda", "0.29"}};
  return {{"N", "10"}, {"lambda", "0.05,0.1,0.2,0.3"}, {"dim", "300"}};
}

void check_input(const std::string& spec, long dim, int n_terms) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts[0];
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) throw ConfigError("inputs", "malformed input '" + spec + "'");
  };
  if (kind == "vacuum") {
    need(1, 1);
  } else if (kind == "fock") {
    need(2, 2);
    const long long m = to_int("inputs", parts[1]);
    if (m < 0 || m >= dim) throw ConfigError("inputs", "'" + spec + "' does not fit dim=" + std::to_string(dim));
  } else if (kind == "cat" || kind == "coherent") {
    need(2, 2);
    const double a = to_real("inputs", parts[1]);
    const double leak = coherent_tail(dim, a);
    if (leak > kLeakageThreshold) {
      throw ConfigError("inputs", "'" + spec + "' leaks " + std::to_string(leak) + " outside dim");
    }
  } else if (kind == "squeezed") {
    need(2, 2);
    const double leak = squeezed_tail(dim, to_real("inputs", parts[1]));
    if (leak > kLeakageThreshold) {
      throw ConfigError("inputs", "'" + spec + "' leaks " + std::to_string(leak) + " outside dim");
    }
  } else if (kind == "random") {
    need(2, 3);
    const double nbar = to_real("inputs", parts[1]);
    if (!(nbar > 0.0) || !(nbar < n_terms / 2.0)) throw ConfigError("inputs", "'" + spec + "' needs 0 < nbar < n_terms/2");
    if (parts.size() == 3 && to_int("inputs", parts[2]) < 0) throw ConfigError("inputs", "negative member index");
    if (n_terms > dim) throw ConfigError("n_terms", "exceeds dim");
  } else {
    throw ConfigError("inputs", "unknown input kind '" + kind + "'");
  }
}

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where, "expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(where, "empty key");
    if (out.count(key)) throw ConfigError(key, "duplicate key at " + where);
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  return parse_key_values(in, path);
}

std::pair<std::string, std::string> parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || trim(text.substr(0, eq)).empty()) {
    throw ConfigError("--set", "expected key=value, got '" + text + "'");
  }
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

std::vector<int> parse_int_range(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(field, "range is empty");
  std::vector<int> out;
  const auto dots = t.find("..");
  if (dots != std::string::npos) {
    const long long lo = to_int(field, t.substr(0, dots));
    const long long hi = to_int(field, t.substr(dots + 2));
    if (hi < lo) throw ConfigError(field, "range '" + t + "' is empty");
    for (long long v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
    return out;
  }
  for (const auto& item : to_list(field, t)) out.push_back(static_cast<int>(to_int(field, item)));
  return out;
}

std::vector<double> parse_real_grid(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError(field, "grid is empty");
  if (t.rfind("lin:", 0) == 0 || t.rfind("log:", 0) == 0) {
    const auto parts = split(t, ':');
    if (parts.size() != 4) throw ConfigError(field, "expected " + parts[0] + ":start:stop:count");
    const double a = to_real(field, parts[1]);
    const double b = to_real(field, parts[2]);
    const long long n = to_int(field, parts[3]);
    if (n < 1) throw ConfigError(field, "grid is empty");
    if (parts[0] == "log" && !(a > 0.0 && b > 0.0)) throw ConfigError(field, "log grid needs positive ends");
    std::vector<double> out;
    for (long long i = 0; i < n; ++i) {
      const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      out.push_back(parts[0] == "lin" ? a + (b - a) * f : a * std::pow(b / a, f));
    }
    out.back() = n == 1 ? a : b;
    return out;
  }
  std::vector<double> out;
  for (const auto& item : to_list(field, t)) out.push_back(to_real(field, item));
  return out;
}

ExperimentConfig build_config(const KeyValues& given) {
  for (const auto& [key, value] : given) {
    if (!kKnownKeys.count(key)) throw ConfigError(key, "unknown key");
  }
  const auto exp_it = given.find("experiment");
  if (exp_it == given.end()) throw ConfigError("experiment", "missing");
  if (!kExperiments.count(exp_it->second)) throw ConfigError("experiment", "unknown experiment '" + exp_it->second + "'");

  KeyValues kv = defaults_for(exp_it->second);
  for (const auto& [key, value] : given) kv[key] = value;
  auto has = [&](const char* key) { return kv.count(key) > 0; };

  ExperimentConfig c;
  c.experiment = kv["experiment"];
  if (has("dim")) c.dim = static_cast<long>(to_int("dim", kv["dim"]));
  if (c.dim < 2) throw ConfigError("dim", "must be >= 2");
  if (has("seed")) {
    const long long s = to_int("seed", kv["seed"]);
    if (s < 0) throw ConfigError("seed", "must be non-negative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (has("n_terms")) {
    c.n_terms = static_cast<int>(to_int("n_terms", kv["n_terms"]));
  } else {
    c.n_terms = static_cast<int>(std::min<long>(c.n_terms, c.dim));
  }
  if (c.n_terms < 2 || c.n_terms > c.dim) throw ConfigError("n_terms", "must lie in 2..dim");
  if (has("threads")) c.threads = static_cast<int>(to_int("threads", kv["threads"]));
  if (c.threads < 1 || c.threads > 256) throw ConfigError("threads", "must lie in 1..256");
  if (has("format")) {
    if (kv["format"] == "csv") {
      c.format = OutputFormat::Csv;
    } else if (kv["format"] == "json") {
      c.format = OutputFormat::Json;
    } else {
      throw ConfigError("format", "expected csv or json");
    }
  }
  if (has("out")) c.out = kv["out"];
  if (has("dump_dir")) c.dump_dir = kv["dump_dir"];
  if (has("engine")) {
    if (kv["engine"] == "fock") {
      c.engine = Engine::Fock;
    } else if (kv["engine"] == "grid") {
      c.engine = Engine::Grid;
    } else {
      throw ConfigError("engine", "expected fock or grid");
    }
  }
  if (has("fidelity")) c.fidelity = to_bool("fidelity", kv["fidelity"]);
  if (c.engine == Engine::Grid && c.fidelity && given.count("fidelity")) {
    throw ConfigError("fidelity", "the grid engine computes epsilon only");
  }
  if (c.engine == Engine::Grid) c.fidelity = false;

  if (has("N")) c.n_qubits = parse_int_range("N", kv["N"]);
  const int n_max = c.engine == Engine::Grid ? 16 : 12;
  for (int n : c.n_qubits) {
    if (n < 2 || n > n_max) throw ConfigError("N", "qubit counts must lie in 2.." + std::to_string(n_max));
  }
  if (has("lambda")) c.lambdas = parse_real_grid("lambda", kv["lambda"]);
  for (double l : c.lambdas) {
    if (!(l > 0.0)) throw ConfigError("lambda", "values must be positive");
  }
  if (has("lambda_min")) c.lambda_min = to_real("lambda_min", kv["lambda_min"]);
  if (has("lambda_max")) c.lambda_max = to_real("lambda_max", kv["lambda_max"]);
  if (!(c.lambda_min > 0.0 && c.lambda_max > c.lambda_min)) {
    throw ConfigError("lambda_min", "need 0 < lambda_min < lambda_max");
  }
  if (has("coarse_points")) c.coarse_points = static_cast<int>(to_int("coarse_points", kv["coarse_points"]));
  if (c.coarse_points < 3) throw ConfigError("coarse_points", "must be >= 3");
  if (has("noise")) c.noise = parse_real_grid("noise", kv["noise"]);
  for (double p : c.noise) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("noise", "values must lie in [0, 1]");
  }
  if (has("channels")) c.channels = to_list("channels", kv["channels"]);
  for (const auto& ch : c.channels) {
    if (ch != "dephasing" && ch != "amplitude-damping") throw ConfigError("channels", "unknown channel '" + ch + "'");
  }
  if (has("nbar")) c.nbar = parse_real_grid("nbar", kv["nbar"]);
  for (double n : c.nbar) {
    if (!(n > 0.0) || !(n < c.n_terms / 2.0)) throw ConfigError("nbar", "values must lie in (0, n_terms/2)");
  }
  if (has("ensemble_size")) c.ensemble_size = static_cast<int>(to_int("ensemble_size", kv["ensemble_size"]));
  if (c.ensemble_size < 1) throw ConfigError("ensemble_size", "must be >= 1");
  if (has("tune_samples")) c.tune_samples = static_cast<int>(to_int("tune_samples", kv["tune_samples"]));
  if (c.tune_samples < 1 || c.tune_samples > c.ensemble_size) {
    throw ConfigError("tune_samples", "must lie in 1..ensemble_size");
  }
  if (has("wigner_extent")) c.wigner_extent = to_real("wigner_extent", kv["wigner_extent"]);
  if (!(c.wigner_extent > 0.0)) throw ConfigError("wigner_extent", "must be positive");
  if (has("wigner_points")) c.wigner_points = static_cast<int>(to_int("wigner_points", kv["wigner_points"]));
  if (c.wigner_points < 2 || c.wigner_points > 2001) throw ConfigError("wigner_points", "must lie in 2..2001");
  if (has("inputs")) c.inputs = to_list("inputs", kv["inputs"]);
  for (const auto& in : c.inputs) check_input(in, c.dim, c.n_terms);

  // Per-experiment requirements.
  const std::string& e = c.experiment;
  if (e != "random-ensemble" && e != "tilde0-report" && c.inputs.empty()) throw ConfigError("inputs", "list is empty");
  if (c.n_qubits.empty()) throw ConfigError("N", "range is empty");
  if ((e == "sweep-lambda" || e == "noise-sweep" || e == "cat-demo" || e == "tilde0-report") && c.lambdas.empty()) {
    throw ConfigError("lambda", "grid is empty");
  }
  if (e == "noise-sweep" && (c.noise.empty() || c.channels.empty())) throw ConfigError("noise", "grid is empty");
  if (e == "random-ensemble" && c.nbar.empty()) throw ConfigError("nbar", "list is empty");
  if ((e == "noise-sweep" || e == "cat-demo") && c.engine == Engine::Grid) {
    throw ConfigError("engine", e + " needs the fock engine");
  }
  return c;
}

}  // namespace cvqt
