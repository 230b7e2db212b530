// cvqt run <config> [--set key=value]... [--format csv|json] [--out path] [--threads n]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical convergence
// failure, 1 anything else.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvqt/config.hpp"
#include "cvqt/emit.hpp"
#include "cvqt/errors.hpp"
#include "cvqt/experiments.hpp"

namespace {

int run_command(const std::string& config_path, const std::vector<std::string>& overrides,
                const std::string& format, const std::string& out, int threads) {
  cvqt::KeyValues kv = cvqt::load_key_values(config_path);
  for (const auto& text : overrides) {
    auto [key, value] = cvqt::parse_override(text);
    kv[key] = value;
  }
  if (!format.empty()) kv["format"] = format;
  if (!out.empty()) kv["out"] = out;
  if (threads > 0) kv["threads"] = std::to_string(threads);
  const cvqt::ExperimentConfig config = cvqt::build_config(kv);
  const cvqt::ResultTable table = cvqt::run(config);
  cvqt::emit(table, config.format, config.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Encode a continuous-variable mode into qubits and back: experiment runner"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "Run the experiment described by a key=value config file");
  std::string config_path;
  std::vector<std::string> overrides;
  std::string format;
  std::string out;
  int threads = 0;
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--set", overrides, "Override a config key (key=value); repeatable")->allow_extra_args(false);
  run->add_option("--format", format, "csv or json");
  run->add_option("--out", out, "Output file (default: standard output)");
  run->add_option("--threads", threads, "Worker threads over independent cells")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return run_command(config_path, overrides, format, out, threads);
  } catch (const cvqt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const cvqt::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << " (achieved " << e.achieved() << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
