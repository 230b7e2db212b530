#pragma once

// Experiment configuration: a flat key=value file with '#' comments, plus
// command-line overrides that take precedence.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cvqt {

using KeyValues = std::map<std::string, std::string>;

/// Parses "key = value" lines; blank lines and '#' comments are skipped.
/// Throws ConfigError naming the line on malformed input or duplicate keys.
KeyValues parse_key_values(std::istream& in, const std::string& source);
KeyValues load_key_values(const std::string& path);
/// "key=value" as given to --set.
std::pair<std::string, std::string> parse_override(const std::string& text);

enum class Engine { Fock, Grid };
enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  std::string experiment;           // sweep-lambda | fock-scaling | random-ensemble | noise-sweep | cat-demo | tilde0-report
  std::vector<std::string> inputs;  // fock:m, vacuum, cat:a, coherent:a, squeezed:r, random:nbar[:member]
  std::vector<int> n_qubits;
  std::vector<double> lambdas;
  std::vector<double> noise;
  std::vector<std::string> channels;  // dephasing, amplitude-damping
  std::vector<double> nbar;
  int ensemble_size = 100;
  int tune_samples = 5;
  int n_terms = 200;  // capped at dim when not given
  long dim = 200;
  std::uint64_t seed = 1;
  Engine engine = Engine::Fock;
  bool fidelity = true;
  double lambda_min = 0.02;
  double lambda_max = 0.8;
  int coarse_points = 30;
  std::string dump_dir;
  double wigner_extent = 6.0;
  int wigner_points = 121;
  OutputFormat format = OutputFormat::Csv;
  std::string out;  // empty: standard output
  int threads = 1;
};

/// Fills experiment-specific defaults for absent keys and validates every
/// field. Unknown keys are rejected. Errors are ConfigError with the key name.
ExperimentConfig build_config(const KeyValues& values);

/// "3..8" or "4,5,6".
std::vector<int> parse_int_range(const std::string& field, const std::string& text);
/// "0.1,0.2", "lin:a:b:n" or "log:a:b:n".
std::vector<double> parse_real_grid(const std::string& field, const std::string& text);

}  // namespace cvqt
