#include "cvqt/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <numeric>
#include <thread>

#include "cvqt/emit.hpp"
#include "cvqt/errors.hpp"
#include "cvqt/grid_engine.hpp"
#include "cvqt/oracle.hpp"
#include "cvqt/protocol.hpp"
#include "cvqt/randgen.hpp"

namespace cvqt {
namespace {

using Cell = std::function<ResultTable()>;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::vector<std::string> split_colon(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(':', start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

// Runs cells on `threads` workers and concatenates their rows in cell order.
ResultTable run_cells(const std::vector<Cell>& cells, int threads) {
  std::vector<ResultTable> results(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const auto start = std::chrono::steady_clock::now();
      try {
        results[i] = cells[i]();
      } catch (...) {
        errors[i] = std::current_exception();
      }
      const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (auto& row : results[i]) row.wall_time = wall;
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  ResultTable out;
  for (auto& r : results) out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  return out;
}

ResultRow base_row(const ExperimentConfig& c, const std::string& input, int n, std::optional<double> lambda) {
  ResultRow r;
  r.experiment = c.experiment;
  r.input = input;
  r.n_qubits = n;
  r.lambda = lambda;
  return r;
}

double eps_for(const ExperimentConfig& c, const CvState& in, double lambda, int n, Diagnostics* diag) {
  if (c.engine == Engine::Grid) {
    const GridProjection g = grid_project(in.amps(), lambda, n);
    if (g.leakage > 1e-10) warn_to(diag, "grid-leakage", "amplitude shifted off the position grid", g.leakage);
    return g.epsilon;
  }
  return epsilon(in, ProtocolParams{lambda, n, c.dim}, diag);
}

// epsilon and, when requested, the recovered fidelity (no channel) into `row`.
void fill_eps(const ExperimentConfig& c, const CvState& in, double lambda, int n, ResultRow& row) {
  Diagnostics diag;
  if (c.engine == Engine::Fock && c.fidelity) {
    const Recovery rec = recover(in, ProtocolParams{lambda, n, c.dim}, nullptr, DecodeMode::Overlap);
    row.epsilon = rec.epsilon;
    row.fidelity = rec.fidelity;
    diag.merge(rec.diagnostics);
  } else {
    row.epsilon = eps_for(c, in, lambda, n, &diag);
  }
  row.diagnostics = diag.summary();
}

std::string dump_path(const ExperimentConfig& c, std::string name) {
  for (char& ch : name) {
    if (ch == ':' || ch == '/' || ch == ' ' || ch == '(' || ch == ')') ch = '_';
  }
  return (std::filesystem::path(c.dump_dir) / (name + ".txt")).string();
}

void dump_wigner(const ExperimentConfig& c, const std::string& name, const CvDensity& rho) {
  const auto grid = linspace(-c.wigner_extent, c.wigner_extent, c.wigner_points);
  write_grid_dump(dump_path(c, name), wigner(rho, grid, grid), grid, grid, "wigner " + name + " rows q cols p");
}

std::vector<Cell> sweep_lambda(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (const auto& input : c.inputs) {
    for (int n : c.n_qubits) {
      for (double lambda : c.lambdas) {
        cells.push_back([&c, input, n, lambda] {
          const CvState in = make_input(input, c.dim, c.seed, c.n_terms);
          ResultRow row = base_row(c, input, n, lambda);
          fill_eps(c, in, lambda, n, row);
          return ResultTable{row};
        });
      }
    }
  }
  return cells;
}

LambdaSearch search_of(const ExperimentConfig& c) {
  LambdaSearch s;
  s.lo = c.lambda_min;
  s.hi = c.lambda_max;
  s.coarse_points = c.coarse_points;
  return s;
}

std::vector<Cell> fock_scaling(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (const auto& input : c.inputs) {
    for (int n : c.n_qubits) {
      cells.push_back([&c, input, n] {
        const CvState in = make_input(input, c.dim, c.seed, c.n_terms);
        const LambdaOptimum best =
            optimize_lambda([&](double lam) { return eps_for(c, in, lam, n, nullptr); }, search_of(c));
        ResultRow row = base_row(c, input, n, best.lambda);
        fill_eps(c, in, best.lambda, n, row);
        return ResultTable{row};
      });
    }
  }
  return cells;
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / (v.size() - 1));
}

std::vector<Cell> random_ensemble(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (double nbar : c.nbar) {
    for (int n : c.n_qubits) {
      cells.push_back([&c, nbar, n] {
        const std::string label = "random:" + fmt("%g", nbar);
        std::vector<CvState> states;
        for (int i = 0; i < c.ensemble_size; ++i) {
          states.push_back(make_input(label + ":" + std::to_string(i), c.dim, c.seed, c.n_terms));
        }
        const LambdaOptimum best = optimize_lambda(
            [&](double lam) {
              double total = 0.0;
              for (int i = 0; i < c.tune_samples; ++i) total += eps_for(c, states[static_cast<std::size_t>(i)], lam, n, nullptr);
              return total / c.tune_samples;
            },
            search_of(c));
        ResultTable rows;
        std::vector<double> eps;
        std::vector<double> fids;
        Diagnostics all;
        for (int i = 0; i < c.ensemble_size; ++i) {
          ResultRow row = base_row(c, label + ":" + std::to_string(i), n, best.lambda);
          row.param_name = "member";
          row.param_value = i;
          fill_eps(c, states[static_cast<std::size_t>(i)], best.lambda, n, row);
          eps.push_back(*row.epsilon);
          if (row.fidelity) fids.push_back(*row.fidelity);
          rows.push_back(std::move(row));
        }
        ResultRow summary = base_row(c, label, n, best.lambda);
        summary.param_name = "ensemble_size";
        summary.param_value = c.ensemble_size;
        summary.mean = mean_of(eps);
        summary.std = std_of(eps);
        rows.push_back(std::move(summary));
        if (!fids.empty()) {
          ResultRow fs = base_row(c, label, n, best.lambda);
          fs.param_name = "ensemble_size_fidelity";
          fs.param_value = c.ensemble_size;
          fs.mean = mean_of(fids);
          fs.std = std_of(fids);
          rows.push_back(std::move(fs));
        }
        return rows;
      });
    }
  }
  return cells;
}

std::vector<Cell> noise_sweep(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (const auto& input : c.inputs) {
    for (int n : c.n_qubits) {
      for (double lambda : c.lambdas) {
        for (const auto& channel : c.channels) {
          for (double p : c.noise) {
            cells.push_back([&c, input, n, lambda, channel, p] {
              const CvState in = make_input(input, c.dim, c.seed, c.n_terms);
              const KrausChannel k =
                  channel == "dephasing" ? KrausChannel::dephasing(p) : KrausChannel::amplitude_damping(p);
              const Recovery rec = recover(in, ProtocolParams{lambda, n, c.dim}, &k, DecodeMode::Full);
              ResultRow row = base_row(c, input, n, lambda);
              row.param_name = channel == "dephasing" ? "p_z" : "gamma";
              row.param_value = p;
              row.epsilon = rec.epsilon;
              row.fidelity = rec.fidelity;
              row.diagnostics = rec.diagnostics.summary();
              if (!c.dump_dir.empty()) {
                dump_wigner(c, "noise-sweep_" + input + "_N" + std::to_string(n) + "_lambda" + fmt("%g", lambda) + "_" +
                                   channel + fmt("%g", p),
                            CvDensity(*rec.cv_density));
              }
              return ResultTable{row};
            });
          }
        }
      }
    }
  }
  return cells;
}

std::vector<Cell> cat_demo(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (const auto& input : c.inputs) {
    for (int n : c.n_qubits) {
      for (double lambda : c.lambdas) {
        cells.push_back([&c, input, n, lambda] {
          const CvState in = make_input(input, c.dim, c.seed, c.n_terms);
          const ProtocolParams params{lambda, n, c.dim};
          const Encoder enc(params);
          Diagnostics diag;
          const HybridState encoded = enc.encode(in, &diag);
          const Recovery rec = recover(in, params, nullptr, DecodeMode::Full);
          diag.merge(rec.diagnostics);
          ResultRow row = base_row(c, input, n, lambda);
          row.epsilon = rec.epsilon;
          row.fidelity = rec.fidelity;
          row.diagnostics = diag.summary();
          ResultTable rows{row};

          // Register distribution in the sign basis, in increasing q_s.
          const Eigen::Index m = params.register_dim();
          RVector prob = RVector::Zero(m);
          for (Eigen::Index k = 0; k < encoded.cv_dim(); ++k) {
            prob += to_phi_basis(encoded.block().row(k).transpose()).cwiseAbs2();
          }
          std::vector<std::pair<double, Eigen::Index>> order;
          for (Eigen::Index s = 0; s < m; ++s) {
            order.emplace_back(grid_point(SignVector::from_index(static_cast<std::uint64_t>(s), n), lambda), s);
          }
          std::sort(order.begin(), order.end());
          for (const auto& [qs, s] : order) {
            ResultRow pr = base_row(c, input, n, lambda);
            pr.param_name = "q_s";
            pr.param_value = qs;
            pr.mean = prob[s];
            rows.push_back(std::move(pr));
          }
          if (!c.dump_dir.empty()) {
            const std::string stem = "cat-demo_" + input + "_N" + std::to_string(n) + "_lambda" + fmt("%g", lambda);
            dump_wigner(c, stem + "_input", CvDensity::pure(in));
            const CMatrix reduced = encoded.block() * encoded.block().adjoint();
            dump_wigner(c, stem + "_encoded", CvDensity(0.5 * (reduced + reduced.adjoint()) / reduced.trace().real()));
            dump_wigner(c, stem + "_recovered", CvDensity(*rec.cv_density));
            write_state_dump(dump_path(c, stem + "_input_state"), in.amps(), "state " + input);
          }
          return rows;
        });
      }
    }
  }
  return cells;
}

std::vector<Cell> tilde0_report(const ExperimentConfig& c) {
  std::vector<Cell> cells;
  for (int n : c.n_qubits) {
    for (double lambda : c.lambdas) {
      cells.push_back([&c, n, lambda] {
        const ProtocolParams params{lambda, n, c.dim};
        ResultTable rows;
        const Tilde0Report& rep = tilde0_sinc(lambda, c.dim);
        const CvState& t0 = rep.state;

        ResultRow sinc = base_row(c, "tilde0:sinc", n, lambda);
        sinc.param_name = "captured_norm";
        sinc.param_value = rep.captured_norm;
        sinc.mean = rep.achieved_tolerance;
        rows.push_back(sinc);

        const CMatrix rho = tilde0_iterated_density(params);
        ResultRow iter = base_row(c, "tilde0:iterated", n, lambda);
        iter.param_name = "principal_weight";
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
        iter.param_value = es.eigenvalues().maxCoeff();
        iter.fidelity = std::real(t0.amps().dot(rho * t0.amps()));
        rows.push_back(iter);

        const double r = std::log(1.12 / lambda);
        ResultRow sq = base_row(c, "tilde0:squeezed", n, lambda);
        sq.param_name = "r";
        sq.param_value = r;
        try {
          sq.fidelity = fidelity_pure(squeezed_vacuum(c.dim, r), t0);
        } catch (const TruncationError& e) {
          Diagnostics d;
          d.warn("truncation", e.what(), e.leakage());
          sq.diagnostics = d.summary();
        }
        rows.push_back(sq);

        ResultRow closed = base_row(c, "tilde0:squeezed-closed-form", n, lambda);
        closed.param_name = "r";
        closed.param_value = r;
        closed.fidelity = squeezed_overlap(lambda, r);
        rows.push_back(closed);
        return rows;
      });
    }
  }
  return cells;
}

}  // namespace

CvState make_input(const std::string& spec, Eigen::Index dim, std::uint64_t seed, int n_terms) {
  const auto parts = split_colon(spec);
  const std::string& kind = parts[0];
  auto real_at = [&](std::size_t i) {
    if (parts.size() <= i) throw InvalidArgument("input '" + spec + "' is missing a parameter");
    return std::stod(parts[i]);
  };
  if (kind == "vacuum") return fock(dim, 0);
  if (kind == "fock") return fock(dim, static_cast<Eigen::Index>(std::stoll(parts.at(1))));
  if (kind == "cat") return cat(dim, real_at(1));
  if (kind == "coherent") return coherent(dim, real_at(1));
  if (kind == "squeezed") return squeezed_vacuum(dim, real_at(1));
  if (kind == "random") {
    RandomStateSpec rs;
    rs.n_terms = n_terms;
    rs.target_nbar = real_at(1);
    rs.dim = dim;
    const std::uint64_t member = parts.size() > 2 ? std::stoull(parts[2]) : 0;
    rs.seed = derive_seed(seed, member);
    return random_state(rs);
  }
  throw InvalidArgument("unknown input kind '" + kind + "'");
}

ResultTable run(const ExperimentConfig& c) {
  if (!c.dump_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(c.dump_dir, ec);
    if (ec) throw Error("cannot create dump directory '" + c.dump_dir + "': " + ec.message());
  }
  std::vector<Cell> cells;
  if (c.experiment == "sweep-lambda") {
    cells = sweep_lambda(c);
  } else if (c.experiment == "fock-scaling") {
    cells = fock_scaling(c);
  } else if (c.experiment == "random-ensemble") {
    cells = random_ensemble(c);
  } else if (c.experiment == "noise-sweep") {
    cells = noise_sweep(c);
  } else if (c.experiment == "cat-demo") {
    cells = cat_demo(c);
  } else if (c.experiment == "tilde0-report") {
    cells = tilde0_report(c);
  } else {
    throw ConfigError("experiment", "unknown experiment '" + c.experiment + "'");
  }
  return run_cells(cells, c.threads);
}

}  // namespace cvqt
