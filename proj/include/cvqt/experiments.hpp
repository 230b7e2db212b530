#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvqt/config.hpp"
#include "cvqt/hilbert.hpp"

namespace cvqt {

struct ResultRow {
  std::string experiment;
  std::string input;
  std::optional<int> n_qubits;
  std::optional<double> lambda;
  std::string param_name;
  std::optional<double> param_value;
  std::optional<double> epsilon;
  std::optional<double> fidelity;
  std::optional<double> mean;
  std::optional<double> std;
  std::string diagnostics;
  double wall_time = 0.0;  // seconds; kept for callers, never emitted
};

using ResultTable = std::vector<ResultRow>;

/// Builds the CV input named by an `inputs` entry. Random inputs
/// "random:nbar[:member]" draw from derive_seed(seed, member).
CvState make_input(const std::string& spec, Eigen::Index dim, std::uint64_t seed, int n_terms = 200);

/// Runs the configured experiment. Independent cells run on `threads`
/// workers; rows are collected in cell order, so the table does not depend
/// on the thread count. Wigner and state dumps go to dump_dir when set.
ResultTable run(const ExperimentConfig& config);

}  // namespace cvqt
