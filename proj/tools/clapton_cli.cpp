// Copyright 2026 The clapton-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clapton/benchmarks.hpp"
#include "clapton/circuit.hpp"
#include "clapton/dense.hpp"
#include "clapton/ga.hpp"
#include "clapton/hamiltonian.hpp"
#include "clapton/noise_model.hpp"
#include "clapton/pipeline.hpp"

namespace {

using namespace clapton;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : ""; }

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  return out;
}

struct GAFlags {
  GAConfig cfg;
  std::size_t samples = 4096;
  std::size_t samples_final = 100000;
  int threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--ga-instances", cfg.instance_count, "parallel GA instances (s)");
    cmd->add_option("--ga-iterations", cfg.iterations_per_round, "GA iterations per round (m)");
    cmd->add_option("--ga-top-k", cfg.top_k, "solutions pooled per instance (k)");
    cmd->add_option("--ga-population", cfg.population_size, "population size |S|");
    cmd->add_option("--ga-retry-rounds", cfg.retry_rounds, "non-improving rounds tolerated");
    cmd->add_option("--ga-mutation-rate", cfg.mutation_rate, "per-gene mutation probability");
    cmd->add_option("--ga-tournament", cfg.tournament_size, "tournament size");
    cmd->add_option("--ga-crossover", cfg.crossover_rate, "crossover probability");
    cmd->add_option("--ga-epsilon", cfg.convergence_epsilon, "convergence epsilon");
    cmd->add_option("--ga-max-rounds", cfg.max_rounds, "hard round cap (0 = until convergence)");
    cmd->add_option("--samples", samples, "noisy-loss samples per evaluation");
    cmd->add_option("--samples-final", samples_final, "samples for reported noisy energies");
    cmd->add_option("--threads", threads, "worker thread cap (0 = hardware)");
  }

  GAConfig config() const {
    GAConfig c = cfg;
    c.threads = threads;
    return c;
  }
  PipelineOptions options() const {
    PipelineOptions o;
    o.optimization_samples = samples;
    o.reporting_samples = samples_final;
    return o;
  }
};

Topology parse_topology(const std::string& name) {
  if (name == "ring") return Topology::Ring;
  if (name == "line") return Topology::Line;
  throw UsageError("unknown topology '" + name + "' (expected ring or line)");
}

void write_result_csv(const fs::path& path, const std::string& method, std::uint64_t seed,
                      int n_qubits, const OptimizationTrace& trace, const EnergyReport& energies,
                      const std::vector<int>& params) {
  auto out = open_out(path);
  out << "method,seed,n_qubits,best_loss,rounds,evaluations,L0,LN_mean,LN_std_error,LN_samples,"
         "E_full,E0,E_mixed,params\n";
  std::ostringstream ps;
  for (std::size_t i = 0; i < params.size(); ++i) ps << (i ? " " : "") << params[i];
  out << method << "," << seed << "," << n_qubits << ","
      << fmt(trace.best_loss_per_round.empty() ? 0.0 : trace.best_loss_per_round.back()) << ","
      << trace.rounds << "," << trace.evaluations << "," << fmt(energies.l0) << ","
      << (energies.ln_clifford ? fmt(energies.ln_clifford->mean) : "") << ","
      << (energies.ln_clifford ? fmt(energies.ln_clifford->std_error) : "") << ","
      << (energies.ln_clifford ? std::to_string(energies.ln_clifford->n_samples) : "") << ","
      << fmt_opt(energies.e_full) << "," << fmt_opt(energies.e0) << "," << fmt(energies.e_mixed)
      << "," << ps.str() << "\n";
}

void write_trace_csv(const fs::path& path, const OptimizationTrace& trace) {
  auto out = open_out(path);
  out << "round,best_loss\n";
  for (std::size_t r = 0; r < trace.best_loss_per_round.size(); ++r)
    out << r << "," << fmt(trace.best_loss_per_round[r]) << "\n";
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string model;
  int n = 0;
  double j = 1.0;
  std::string out;
};

void run_bench(const BenchArgs& a) {
  Hamiltonian h = a.model == "ising" ? make_ising(a.n, a.j) : make_xxz(a.n, a.j);
  hamiltonian_to_file(h, a.out);
  std::cout << "wrote " << a.out << " (" << h.size() << " terms, " << h.n_qubits()
            << " qubits)\n";
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

struct OptimizeArgs {
  std::string method;
  std::string hamiltonian_path;
  std::string noise_path;
  std::string ansatz_circuit_path;
  std::string topology = "ring";
  std::uint64_t seed = 0;
  std::string out_dir;
  GAFlags ga;
  bool no_full_model = false;
};

void run_optimize(const OptimizeArgs& a) {
  Hamiltonian h = hamiltonian_from_file(a.hamiltonian_path);
  AnsatzSpec spec{h.n_qubits(), parse_topology(a.topology), std::nullopt};
  if (!a.ansatz_circuit_path.empty()) spec.skeleton = circuit_from_file(a.ansatz_circuit_path);

  if (a.method != "cafqa" && a.noise_path.empty())
    throw UsageError("--noise is required for method '" + a.method + "'");
  std::optional<NoiseModel> nm;
  if (!a.noise_path.empty()) nm = noise_model_from_file(a.noise_path);

  PipelineOptions opts = a.ga.options();
  if (a.no_full_model) opts.evaluate_full_model = false;
  fs::create_directories(a.out_dir);
  fs::path dir(a.out_dir);

  if (a.method == "clapton") {
    ClaptonResult result = run_clapton(h, spec, *nm, a.ga.config(), a.seed, opts);
    std::vector<int> params(result.gamma_hat.gamma.begin(), result.gamma_hat.gamma.end());
    write_result_csv(dir / "result.csv", "clapton", a.seed, h.n_qubits(), result.loss_trace,
                     result.energies, params);
    write_trace_csv(dir / "loss_trace.csv", result.loss_trace);
    hamiltonian_to_file(result.transformed_hamiltonian, (dir / "transformed.ham").string());
    clifford_gates_to_file(result.transform_gates, h.n_qubits(),
                           (dir / "transform_circuit.txt").string());
    std::cout << "clapton: best loss "
              << fmt(result.loss_trace.best_loss_per_round.back()) << " after "
              << result.loss_trace.rounds << " rounds ("
              << result.loss_trace.evaluations << " evaluations)\n";
    if (result.energies.e_full) std::cout << "E_full " << fmt(*result.energies.e_full) << "\n";
  } else if (a.method == "cafqa" || a.method == "ncafqa") {
    BaselineResult result =
        a.method == "cafqa"
            ? run_cafqa(h, spec, a.ga.config(), a.seed, opts)
            : run_ncafqa(h, spec, *nm, a.ga.config(), a.seed, opts);
    if (a.method == "cafqa" && nm)
      evaluate_baseline_energies(result, h, spec, *nm, a.seed, opts);
    std::vector<int> params;
    for (double t : result.theta_init.theta)
      params.push_back(*clifford_angle_step(t));
    write_result_csv(dir / "result.csv", a.method, a.seed, h.n_qubits(), result.loss_trace,
                     result.energies, params);
    write_trace_csv(dir / "loss_trace.csv", result.loss_trace);
    std::cout << a.method << ": best loss "
              << fmt(result.loss_trace.best_loss_per_round.back()) << " after "
              << result.loss_trace.rounds << " rounds\n";
    if (result.energies.e_full) std::cout << "E_full " << fmt(*result.energies.e_full) << "\n";
  } else {
    throw UsageError("unknown method '" + a.method + "'");
  }
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string channel;
  std::string hamiltonian_path;
  int grid = 10;
  std::vector<double> t1_list = {50e-6, 100e-6, 150e-6};
  std::uint64_t seed = 0;
  std::string out;
  std::string topology = "ring";
  GAFlags ga;
};

std::vector<double> log_spaced(double lo, double hi, int points) {
  std::vector<double> grid;
  if (points == 1) return {lo};
  for (int i = 0; i < points; ++i)
    grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  return grid;
}

void run_sweep(const SweepArgs& a) {
  if (a.channel != "gate" && a.channel != "meas")
    throw UsageError("unknown sweep channel '" + a.channel + "' (expected gate or meas)");
  Hamiltonian h = hamiltonian_from_file(a.hamiltonian_path);
  if (h.n_qubits() > kMaxDensityMatrixQubits)
    throw UsageError("sweep needs the dense reference; n_qubits must be <= 12");
  AnsatzSpec spec{h.n_qubits(), parse_topology(a.topology), std::nullopt};
  double e0 = exact_ground_energy(h);

  std::vector<double> grid = a.channel == "gate" ? log_spaced(5e-4, 5e-3, a.grid)
                                                 : log_spaced(5e-3, 9.5e-2, a.grid);
  auto out = open_out(a.out);
  out << "p,t1,method,eta\n";
  PipelineOptions opts = a.ga.options();
  std::uint64_t cell = 0;
  for (double t1 : a.t1_list) {
    for (double p : grid) {
      NoiseModel nm = a.channel == "gate" ? NoiseModel(p, 10 * p, 0.0, t1)
                                          : NoiseModel(0.0, 0.0, p, t1);
      std::uint64_t run_seed = derive_seed(a.seed, 0x5eedc, cell++);
      ClaptonResult clapton = run_clapton(h, spec, nm, a.ga.config(), run_seed, opts);
      BaselineResult ncafqa = run_ncafqa(h, spec, nm, a.ga.config(), run_seed + 1, opts);
      double eta = relative_improvement(e0, *ncafqa.energies.e_full, *clapton.energies.e_full);
      out << fmt(p) << "," << fmt(t1) << ",ncafqa," << fmt(eta) << "\n";
      out.flush();
      std::cout << "p=" << p << " t1=" << t1 << " eta(ncafqa)=" << eta << "\n";
    }
  }
}

// ---------------------------------------------------------------------------
// scaling
// ---------------------------------------------------------------------------

struct ScalingArgs {
  int n_min = 8;
  int n_max = 24;
  int n_step = 1;
  int guesses = 5;
  double j = 0.25;
  std::uint64_t seed = 0;
  std::string out;
  std::string noise_path;
  GAFlags ga;
};

void run_scaling(const ScalingArgs& a) {
  if (a.guesses < 1) throw UsageError("--guesses must be >= 1");
  if (a.n_min < 2 || a.n_max < a.n_min || a.n_step < 1)
    throw UsageError("invalid n range");
  NoiseModel nm = a.noise_path.empty() ? NoiseModel(1e-3, 1e-2, 2e-2, 100e-6)
                                       : noise_model_from_file(a.noise_path);
  auto out = open_out(a.out);
  out << "n,guess,total_time,rounds,time_per_round\n";
  PipelineOptions opts = a.ga.options();
  opts.evaluate_full_model = false;      // timing runs skip the dense reference
  opts.reporting_samples = opts.optimization_samples;
  for (int n = a.n_min; n <= a.n_max; n += a.n_step) {
    Hamiltonian h = make_ising(n, a.j);
    AnsatzSpec spec{n, Topology::Ring, std::nullopt};
    for (int guess = 0; guess < a.guesses; ++guess) {
      std::uint64_t run_seed = derive_seed(a.seed, static_cast<std::uint64_t>(n),
                                           static_cast<std::uint64_t>(guess));
      auto start = std::chrono::steady_clock::now();
      ClaptonResult result = run_clapton(h, spec, nm, a.ga.config(), run_seed, opts);
      std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      double per_round = elapsed.count() / result.loss_trace.rounds;
      out << n << "," << guess << "," << fmt(elapsed.count()) << ","
          << result.loss_trace.rounds << "," << fmt(per_round) << "\n";
      out.flush();
      std::cout << "n=" << n << " guess=" << guess << " total=" << elapsed.count()
                << "s rounds=" << result.loss_trace.rounds << "\n";
    }
  }
}

// ---------------------------------------------------------------------------
// vqe
// ---------------------------------------------------------------------------

struct VqeArgs {
  std::string hamiltonian_path;
  std::string noise_path;
  std::string init = "zeros";
  std::string init_from;
  int iters = 300;
  std::uint64_t seed = 0;
  std::string out;
  std::string topology = "ring";
};

struct InitPoint {
  Hamiltonian problem;
  AnsatzParams theta0;
};

InitPoint resolve_init(const VqeArgs& a, const Hamiltonian& original) {
  if (a.init_from.empty()) {
    if (a.init != "zeros") throw UsageError("--init must be 'zeros' or use --init-from");
    return {original,
            AnsatzParams{std::vector<double>(4 * static_cast<std::size_t>(original.n_qubits()), 0.0)}};
  }
  fs::path dir(a.init_from);
  std::ifstream in(dir / "result.csv");
  if (!in) throw std::runtime_error("cannot open result file: " + (dir / "result.csv").string());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  std::vector<std::string> fields;
  std::stringstream ss(row);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (fields.empty()) throw std::runtime_error("malformed result file in " + a.init_from);
  const std::string& method = fields[0];
  if (method == "clapton") {
    // The post-transformation VQE starts at theta = 0 on the transformed problem.
    Hamiltonian transformed = hamiltonian_from_file((dir / "transformed.ham").string());
    return {transformed,
            AnsatzParams{std::vector<double>(4 * static_cast<std::size_t>(transformed.n_qubits()), 0.0)}};
  }
  // Baselines restart from theta_init on the original problem.
  AnsatzParams theta;
  std::stringstream ps(fields.back());
  int step;
  while (ps >> step) theta.theta.push_back(step * (M_PI / 2));
  if (theta.theta.size() != 4 * static_cast<std::size_t>(original.n_qubits()))
    throw std::runtime_error("result params in " + a.init_from + " do not match the Hamiltonian");
  return {original, theta};
}

void run_vqe(const VqeArgs& a) {
  Hamiltonian original = hamiltonian_from_file(a.hamiltonian_path);
  NoiseModel nm = noise_model_from_file(a.noise_path);
  InitPoint init = resolve_init(a, original);
  AnsatzSpec spec{init.problem.n_qubits(), parse_topology(a.topology), std::nullopt};
  auto trajectory = spsa_vqe(init.problem, spec, init.theta0, nm, a.iters,
                             VqeBackend::DensityMatrix, a.seed);
  auto out = open_out(a.out);
  out << "iteration,energy\n";
  for (const auto& point : trajectory) out << point.iteration << "," << fmt(point.energy) << "\n";
  std::cout << "vqe: initial " << fmt(trajectory.front().energy) << " final "
            << fmt(trajectory.back().energy) << " (" << trajectory.size() - 1 << " iterations)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford-assisted VQE problem transformation toolkit"};
  app.require_subcommand(1);

  BenchArgs bench;
  auto* cmd_bench = app.add_subcommand("bench", "generate a benchmark Hamiltonian file");
  cmd_bench->add_option("--model", bench.model, "ising or xxz")
      ->required()
      ->check(CLI::IsMember({"ising", "xxz"}));
  cmd_bench->add_option("--n", bench.n, "number of qubits")->required();
  cmd_bench->add_option("--j", bench.j, "coupling strength J")->required();
  cmd_bench->add_option("--out", bench.out, "output Hamiltonian file")->required();

  OptimizeArgs opt;
  auto* cmd_opt = app.add_subcommand("optimize", "run clapton, cafqa or ncafqa");
  cmd_opt->add_option("--method", opt.method, "clapton, cafqa or ncafqa")
      ->required()
      ->check(CLI::IsMember({"clapton", "cafqa", "ncafqa"}));
  cmd_opt->add_option("--hamiltonian", opt.hamiltonian_path, "Hamiltonian file")->required();
  cmd_opt->add_option("--noise", opt.noise_path, "noise model file");
  cmd_opt->add_option("--ansatz-circuit", opt.ansatz_circuit_path,
                      "pre-routed Clifford ansatz circuit file (replaces the builder)");
  cmd_opt->add_option("--topology", opt.topology, "ring or line");
  cmd_opt->add_option("--seed", opt.seed, "random seed")->required();
  cmd_opt->add_option("--out-dir", opt.out_dir, "output directory")->required();
  cmd_opt->add_flag("--no-full-model", opt.no_full_model, "skip the dense E_full evaluation");
  opt.ga.attach(cmd_opt);

  SweepArgs sweep;
  auto* cmd_sweep = app.add_subcommand("sweep", "noise-channel sweep, eta vs nCAFQA");
  cmd_sweep->add_option("--channel", sweep.channel, "gate or meas")->required();
  cmd_sweep->add_option("--hamiltonian", sweep.hamiltonian_path, "Hamiltonian file")->required();
  cmd_sweep->add_option("--grid", sweep.grid, "number of log-spaced grid points");
  cmd_sweep->add_option("--t1", sweep.t1_list, "T1 decay times in seconds");
  cmd_sweep->add_option("--seed", sweep.seed, "random seed")->required();
  cmd_sweep->add_option("--out", sweep.out, "output CSV")->required();
  cmd_sweep->add_option("--topology", sweep.topology, "ring or line");
  sweep.ga.attach(cmd_sweep);

  ScalingArgs scaling;
  auto* cmd_scaling = app.add_subcommand("scaling", "optimization-time scaling measurement");
  cmd_scaling->add_option("--n-min", scaling.n_min, "smallest qubit count");
  cmd_scaling->add_option("--n-max", scaling.n_max, "largest qubit count");
  cmd_scaling->add_option("--n-step", scaling.n_step, "qubit count step");
  cmd_scaling->add_option("--guesses", scaling.guesses, "runs per qubit count")->required();
  cmd_scaling->add_option("--j", scaling.j, "Ising coupling");
  cmd_scaling->add_option("--noise", scaling.noise_path, "noise model file (default synthetic)");
  cmd_scaling->add_option("--seed", scaling.seed, "random seed")->required();
  cmd_scaling->add_option("--out", scaling.out, "output CSV")->required();
  scaling.ga.attach(cmd_scaling);

  VqeArgs vqe;
  auto* cmd_vqe = app.add_subcommand("vqe", "SPSA VQE refinement from an initial point");
  cmd_vqe->add_option("--hamiltonian", vqe.hamiltonian_path, "Hamiltonian file")->required();
  cmd_vqe->add_option("--noise", vqe.noise_path, "noise model file")->required();
  cmd_vqe->add_option("--init", vqe.init, "zeros (default)");
  cmd_vqe->add_option("--init-from", vqe.init_from, "result directory of an optimize run");
  cmd_vqe->add_option("--iters", vqe.iters, "SPSA iterations");
  cmd_vqe->add_option("--seed", vqe.seed, "random seed")->required();
  cmd_vqe->add_option("--out", vqe.out, "trajectory CSV")->required();
  cmd_vqe->add_option("--topology", vqe.topology, "ring or line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_bench) run_bench(bench);
    if (*cmd_opt) run_optimize(opt);
    if (*cmd_sweep) run_sweep(sweep);
    if (*cmd_scaling) run_scaling(scaling);
    if (*cmd_vqe) run_vqe(vqe);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
