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

#ifndef CLAPTON_PIPELINE_HPP_
#define CLAPTON_PIPELINE_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "clapton/circuit.hpp"
#include "clapton/clifford.hpp"
#include "clapton/dense.hpp"
#include "clapton/estimator.hpp"
#include "clapton/ga.hpp"
#include "clapton/hamiltonian.hpp"
#include "clapton/noise_model.hpp"
#include "clapton/stabilizer.hpp"

namespace clapton {

/// VQE ansatz description. A pre-routed Clifford skeleton circuit may replace
/// the built-in line/ring builder for the zero-parameter ansatz A(0).
struct AnsatzSpec {
  int n_qubits = 0;
  Topology topology = Topology::Ring;
  std::optional<Circuit> skeleton;
};

struct PipelineOptions {
  std::size_t optimization_samples = 4096;  // per loss evaluation in the GA
  std::size_t reporting_samples = 100000;   // final noisy-energy estimates
  bool evaluate_full_model = true;          // density-matrix E_full when N fits
  bool include_t1_in_full_model = true;
};

struct EnergyReport {
  double l0 = 0.0;                          // noiseless all-zeros energy
  std::optional<ShotEstimate> ln_clifford;  // Clifford-model noisy energy
  std::optional<double> e_full;             // full-model (density matrix) energy
  std::optional<double> e0;                 // exact ground energy (dense cap)
  double e_mixed = 0.0;                     // fully mixed state energy
};

struct ClaptonResult {
  TransformParams gamma_hat;
  Hamiltonian transformed_hamiltonian;
  std::vector<CliffordGate> transform_gates;
  OptimizationTrace loss_trace;
  EnergyReport energies;

  ClaptonResult() : transformed_hamiltonian(1) {}
};

struct BaselineResult {
  AnsatzParams theta_init;  // radians, all multiples of pi/2
  OptimizationTrace loss_trace;
  EnergyReport energies;
};

// ---------------------------------------------------------------------------
// Ansatz assembly
// ---------------------------------------------------------------------------

/// The zero-parameter ansatz A(0): every rotation reduces to the identity
/// and drops out, leaving only the CX skeleton. The transformed problem's
/// VQE therefore starts from a circuit whose only noisy ops are the
/// entangling gates.
inline Circuit zero_ansatz(const AnsatzSpec& spec) {
  if (spec.skeleton) {
    Circuit c = *spec.skeleton;
    if (c.n_qubits != spec.n_qubits)
      throw std::invalid_argument("ansatz skeleton width mismatch");
    return c;
  }
  Circuit c(spec.n_qubits);
  for (auto [a, b] : entangling_pairs(spec.n_qubits, spec.topology))
    c.push(Gate{GateKind::Cx, a, b, 0});
  return c;
}

/// The noise-equipped ansatz at the zero point.
inline Circuit noisy_zero_ansatz(const AnsatzSpec& spec, const NoiseModel& nm) {
  return apply_gate_noise(zero_ansatz(spec), nm);
}

inline AnsatzParams theta_from_steps(const Genome& steps) {
  AnsatzParams p;
  p.theta.reserve(steps.size());
  for (auto s : steps) p.theta.push_back(s * (M_PI / 2));
  return p;
}

inline TransformParams gamma_from_genome(const Genome& genome) {
  TransformParams p;
  p.gamma.assign(genome.begin(), genome.end());
  return p;
}

/// Recovers the entangling topology from a transform parameter count.
inline Topology transform_topology_for(int n_qubits, std::size_t gamma_len) {
  if (gamma_len == transform_param_count(n_qubits, Topology::Ring)) return Topology::Ring;
  if (gamma_len == transform_param_count(n_qubits, Topology::Line)) return Topology::Line;
  throw std::invalid_argument("TransformParams length matches neither ring nor line layout");
}

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

/// Clapton cost: noisy energy of the transformed Hamiltonian on the
/// noise-equipped zero ansatz plus its noiseless all-zeros energy.
inline double clapton_loss(const TransformParams& gamma, const Hamiltonian& h,
                           const Circuit& noisy_ansatz_zero, const NoiseModel& nm,
                           std::size_t n_samples, std::uint64_t seed) {
  Topology topo = transform_topology_for(h.n_qubits(), gamma.gamma.size());
  auto gates = build_transform_circuit(h.n_qubits(), gamma, topo);
  Hamiltonian transformed = transform_hamiltonian(h, tableau_from_gates(gates, h.n_qubits()));
  CliffordNoisyEvaluator evaluator(noisy_ansatz_zero, nm, n_samples, seed);
  return evaluator.mean(transformed) + noiseless_energy_zero_state(transformed);
}

// ---------------------------------------------------------------------------
// Full-model (density matrix) evaluation of the measured energy
// ---------------------------------------------------------------------------

/// Reference energy of the measured process: evolve the noisy preparation
/// circuit exactly, then per term rotate into the measurement basis (with
/// gate noise and optional relaxation), attenuate by the readout confusion
/// and read off the Z-string expectation.
inline double full_noise_energy(const Circuit& prepared, const Hamiltonian& h,
                                const NoiseModel& nm, bool include_t1) {
  if (prepared.n_qubits != h.n_qubits())
    throw std::invalid_argument("full_noise_energy: width mismatch");
  DensityMatrix base = density_matrix_run(prepared, nm, include_t1);
  double total = 0.0;
  for (const auto& t : h.terms()) {
    DensityMatrix d = base;
    std::vector<CircuitOp> ops;
    for (std::uint64_t rest = t.pauli.x_mask | t.pauli.z_mask; rest != 0; rest &= rest - 1) {
      int q = std::countr_zero(rest);
      bool x = (t.pauli.x_mask >> q) & 1, z = (t.pauli.z_mask >> q) & 1;
      if (x && z) {
        ops.push_back(Gate{GateKind::SDag, q, -1, 0});
        ops.push_back(Depolarize1{q, nm.p1(q)});
        ops.push_back(Gate{GateKind::H, q, -1, 0});
        ops.push_back(Depolarize1{q, nm.p1(q)});
      } else if (x) {
        ops.push_back(Gate{GateKind::H, q, -1, 0});
        ops.push_back(Depolarize1{q, nm.p1(q)});
      }
    }
    apply_ops_to_density_matrix(d, ops, nm, include_t1);
    std::uint64_t support = t.pauli.x_mask | t.pauli.z_mask;
    double factor = 1.0;
    for (std::uint64_t rest = support; rest != 0; rest &= rest - 1) {
      int q = std::countr_zero(rest);
      if (include_t1) {
        double dur = nm.duration("MEASURE");
        if (dur > 0) apply_amplitude_damping(d, q, 1.0 - std::exp(-dur / nm.t1(q)));
      }
      factor *= 1.0 - 2.0 * nm.p_meas(q);
    }
    double parity = 0.0;
    for (std::int64_t j = 0; j < d.rho.rows(); ++j) {
      double sign = (std::popcount(static_cast<std::uint64_t>(j) & support) & 1) ? -1.0 : 1.0;
      parity += sign * d.rho(j, j).real();
    }
    total += t.coefficient * t.pauli.sign * factor * parity;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Shared reporting
// ---------------------------------------------------------------------------

inline EnergyReport report_energies(const Circuit& prepared_noisy, const Hamiltonian& eval_h,
                                    const Hamiltonian& original_h, double l0,
                                    const NoiseModel& nm, const PipelineOptions& opts,
                                    std::uint64_t seed) {
  EnergyReport report;
  report.l0 = l0;
  report.e_mixed = fully_mixed_energy(original_h);
  report.ln_clifford = noisy_energy(prepared_noisy, eval_h, nm, opts.reporting_samples,
                                    EstimatorMode::ExactExpectation, seed);
  if (original_h.n_qubits() <= kMaxDensityMatrixQubits) {
    report.e0 = exact_ground_energy(original_h);
    if (opts.evaluate_full_model)
      report.e_full =
          full_noise_energy(prepared_noisy, eval_h, nm, opts.include_t1_in_full_model);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Clapton
// ---------------------------------------------------------------------------

inline ClaptonResult run_clapton(const Hamiltonian& h, const AnsatzSpec& spec,
                                 const NoiseModel& nm, GAConfig ga_cfg, std::uint64_t seed,
                                 const PipelineOptions& opts = {}) {
  if (spec.n_qubits != h.n_qubits())
    throw std::invalid_argument("run_clapton: ansatz/Hamiltonian width mismatch");
  Circuit noisy = noisy_zero_ansatz(spec, nm);
  Topology topo = spec.topology;

  ga_cfg.genome_length = static_cast<int>(transform_param_count(h.n_qubits(), topo));
  ga_cfg.gene_values = 4;
  ga_cfg.seed = seed;

  // One fault-frame set per round, shared by every genome evaluated in it
  // (the circuit does not depend on gamma).
  std::shared_ptr<const CliffordNoisyEvaluator> evaluator;
  auto round_hook = [&](int, std::uint64_t eval_seed) {
    evaluator = std::make_shared<CliffordNoisyEvaluator>(noisy, nm, opts.optimization_samples,
                                                         eval_seed);
  };
  auto loss = [&](const Genome& genome, std::uint64_t) -> double {
    auto gates = build_transform_circuit(h.n_qubits(), gamma_from_genome(genome), topo);
    Hamiltonian transformed = transform_hamiltonian(h, tableau_from_gates(gates, h.n_qubits()));
    return evaluator->mean(transformed) + noiseless_energy_zero_state(transformed);
  };

  ClaptonResult result;
  result.loss_trace = multi_instance_optimize(loss, ga_cfg, round_hook);
  result.gamma_hat = gamma_from_genome(result.loss_trace.best_genome);
  result.transform_gates = build_transform_circuit(h.n_qubits(), result.gamma_hat, topo);
  result.transformed_hamiltonian =
      transform_hamiltonian(h, tableau_from_gates(result.transform_gates, h.n_qubits()));

  double l0 = noiseless_energy_zero_state(result.transformed_hamiltonian);
  result.energies = report_energies(noisy, result.transformed_hamiltonian, h, l0, nm, opts,
                                    derive_seed(seed, 0xf1a1));
  if (result.energies.e0 && l0 < *result.energies.e0 - 1e-9)
    throw std::logic_error("run_clapton: L0 below the ground energy (broken evaluation)");
  return result;
}

// ---------------------------------------------------------------------------
// CAFQA and nCAFQA baselines
// ---------------------------------------------------------------------------

namespace pipeline_detail {

inline Circuit clifford_ansatz_from_steps(const AnsatzSpec& spec, const Genome& steps) {
  if (spec.skeleton)
    throw std::invalid_argument("baseline search over a fixed skeleton is not supported");
  return build_vqe_ansatz(spec.n_qubits, theta_from_steps(steps), spec.topology);
}

}  // namespace pipeline_detail

/// Noiseless Clifford initialization search over the 4N quarter-turn angles.
inline BaselineResult run_cafqa(const Hamiltonian& h, const AnsatzSpec& spec, GAConfig ga_cfg,
                                std::uint64_t seed, const PipelineOptions& opts = {}) {
  if (spec.n_qubits != h.n_qubits())
    throw std::invalid_argument("run_cafqa: ansatz/Hamiltonian width mismatch");
  ga_cfg.genome_length = 4 * h.n_qubits();
  ga_cfg.gene_values = 4;
  ga_cfg.seed = seed;

  auto loss = [&](const Genome& genome, std::uint64_t) -> double {
    Circuit c = pipeline_detail::clifford_ansatz_from_steps(spec, genome);
    return stabilizer_energy(run_clifford_gates(c), h);
  };

  BaselineResult result;
  result.loss_trace = multi_instance_optimize(loss, ga_cfg);
  result.theta_init = theta_from_steps(result.loss_trace.best_genome);
  Circuit best = pipeline_detail::clifford_ansatz_from_steps(spec, result.loss_trace.best_genome);
  result.energies.l0 = stabilizer_energy(run_clifford_gates(best), h);
  result.energies.e_mixed = fully_mixed_energy(h);
  if (h.n_qubits() <= kMaxDensityMatrixQubits) result.energies.e0 = exact_ground_energy(h);
  (void)opts;
  return result;
}

/// Noise-aware CAFQA: same search space, but the loss adds the noisy energy
/// of the noise-equipped ansatz to the noiseless term.
inline BaselineResult run_ncafqa(const Hamiltonian& h, const AnsatzSpec& spec,
                                 const NoiseModel& nm, GAConfig ga_cfg, std::uint64_t seed,
                                 const PipelineOptions& opts = {}) {
  if (spec.n_qubits != h.n_qubits())
    throw std::invalid_argument("run_ncafqa: ansatz/Hamiltonian width mismatch");
  ga_cfg.genome_length = 4 * h.n_qubits();
  ga_cfg.gene_values = 4;
  ga_cfg.seed = seed;

  auto loss = [&](const Genome& genome, std::uint64_t eval_seed) -> double {
    Circuit c = pipeline_detail::clifford_ansatz_from_steps(spec, genome);
    Circuit noisy = apply_gate_noise(c, nm);
    CliffordNoisyEvaluator evaluator(noisy, nm, opts.optimization_samples, eval_seed);
    return evaluator.mean(h) + stabilizer_energy(evaluator.base_state(), h);
  };

  BaselineResult result;
  result.loss_trace = multi_instance_optimize(loss, ga_cfg);
  result.theta_init = theta_from_steps(result.loss_trace.best_genome);
  Circuit best = pipeline_detail::clifford_ansatz_from_steps(spec, result.loss_trace.best_genome);
  double l0 = stabilizer_energy(run_clifford_gates(best), h);
  result.energies =
      report_energies(apply_gate_noise(best, nm), h, h, l0, nm, opts, derive_seed(seed, 0xf1a2));
  return result;
}

/// Fills the noisy-energy fields of a baseline result under a noise model
/// (run_cafqa itself is noise-blind).
inline void evaluate_baseline_energies(BaselineResult& result, const Hamiltonian& h,
                                       const AnsatzSpec& spec, const NoiseModel& nm,
                                       std::uint64_t seed, const PipelineOptions& opts = {}) {
  Circuit c = build_vqe_ansatz(spec.n_qubits, result.theta_init, spec.topology);
  result.energies = report_energies(apply_gate_noise(c, nm), h, h, result.energies.l0, nm, opts,
                                    derive_seed(seed, 0xf1a3));
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

/// Relative improvement eta = (E0 - E_baseline) / (E0 - E_clapton).
/// A closed Clapton gap (denominator below tolerance) returns +infinity.
/// Noisy energies below E0 signal a broken evaluation and are rejected.
inline double relative_improvement(double e0, double e_baseline, double e_clapton,
                                   double tolerance = 1e-9) {
  if (e_baseline < e0 - tolerance || e_clapton < e0 - tolerance)
    throw std::invalid_argument("relative_improvement: noisy energy below the ground energy");
  double denom = e_clapton - e0;
  if (denom < tolerance) return std::numeric_limits<double>::infinity();
  return (e_baseline - e0) / denom;
}

/// Affine rescaling sending E0 to 0 and the fully-mixed energy to 1.
inline double normalized_energy(double e, double e0, double e_mixed, double tolerance = 1e-12) {
  if (std::abs(e_mixed - e0) < tolerance)
    throw std::invalid_argument("normalized_energy: degenerate fixpoints");
  return (e - e0) / (e_mixed - e0);
}

// ---------------------------------------------------------------------------
// SPSA-driven VQE refinement
// ---------------------------------------------------------------------------

enum class VqeBackend { DensityMatrix, StabilizerIfClifford };

struct SpsaPoint {
  int iteration;
  AnsatzParams theta;
  double energy;
};

struct SpsaOptions {
  double alpha = 0.602;
  double gamma = 0.101;
  double c = 0.1;
  double initial_step = 0.1;  // target norm of the first update vector (rad)
  int tail_average = 0;       // iterates averaged into the returned solution
                              // (0 = one tenth of the iteration count)
  std::size_t stabilizer_samples = 4096;
  bool include_t1 = true;
};

namespace pipeline_detail {

inline double vqe_energy(const Hamiltonian& h, const AnsatzSpec& spec, const AnsatzParams& theta,
                         const NoiseModel& nm, VqeBackend backend, const SpsaOptions& opts,
                         std::uint64_t eval_seed) {
  Circuit c = build_vqe_ansatz(spec.n_qubits, theta, spec.topology);
  if (backend == VqeBackend::DensityMatrix) {
    if (spec.n_qubits > kMaxDensityMatrixQubits)
      throw std::invalid_argument("vqe energy backend: density matrix cap exceeded (n <= 12)");
    return full_noise_energy(apply_gate_noise(c, nm), h, nm, opts.include_t1);
  }
  for (double a : theta.theta)
    if (!clifford_angle_step(a))
      throw std::invalid_argument("stabilizer backend requires Clifford angles");
  return noisy_energy(apply_gate_noise(c, nm), h, nm, opts.stabilizer_samples,
                      EstimatorMode::ExactExpectation, eval_seed)
      .mean;
}

inline double wrap_angle(double a) {
  a = std::fmod(a, 2 * M_PI);
  return a < 0 ? a + 2 * M_PI : a;
}

}  // namespace pipeline_detail

/// Standard SPSA minimization of the noisy VQE energy. Gain sequences
/// a_k = a / (A + k + 1)^alpha and c_k = c / (k + 1)^gamma, with `a`
/// calibrated so the first update vector has norm ~initial_step and every
/// later update clipped to the same decaying schedule (the calibration can
/// misjudge the gradient scale near stationary starting points).
///
/// Entries 0..iters-1 of the returned trajectory are the raw iterates; the
/// last entry is the optimizer's solution, the average of the final
/// tail_average iterates (last iterates of SPSA bounce around the located
/// minimum, their average sits at its center).
inline std::vector<SpsaPoint> spsa_vqe(const Hamiltonian& h, const AnsatzSpec& spec,
                                       const AnsatzParams& theta0, const NoiseModel& nm,
                                       int iters, VqeBackend backend, std::uint64_t seed,
                                       const SpsaOptions& opts = {}) {
  if (theta0.theta.size() != 4 * static_cast<std::size_t>(spec.n_qubits))
    throw std::invalid_argument("spsa_vqe: theta0 must have length 4N");
  std::size_t dim = theta0.theta.size();
  // Angles accumulate unwrapped so that averaging works; circuits and
  // recorded points are wrapped into [0, 2pi).
  auto wrapped = [&](const std::vector<double>& raw) {
    AnsatzParams p;
    p.theta.reserve(dim);
    for (double a : raw) p.theta.push_back(pipeline_detail::wrap_angle(a));
    return p;
  };
  auto energy = [&](const std::vector<double>& raw, std::uint64_t k) {
    return pipeline_detail::vqe_energy(h, spec, wrapped(raw), nm, backend, opts,
                                       derive_seed(seed, 0xe9, k));
  };

  std::vector<SpsaPoint> trajectory;
  std::vector<double> theta = theta0.theta;
  trajectory.push_back({0, wrapped(theta), energy(theta, 0)});
  if (iters <= 0) return trajectory;

  double big_a = 0.1 * iters;
  SplitMix64 rng(derive_seed(seed, 0x59a5));
  double component_step = opts.initial_step / std::sqrt(static_cast<double>(dim));

  // Calibrate `a` from a few gradient probes at the starting point.
  double avg_delta = 0.0;
  const int probes = 3;
  for (int p = 0; p < probes; ++p) {
    std::vector<double> plus = theta, minus = theta;
    for (std::size_t i = 0; i < dim; ++i) {
      int d = (rng() >> 63) ? 1 : -1;
      plus[i] += opts.c * d;
      minus[i] -= opts.c * d;
    }
    avg_delta += std::abs(energy(plus, 1000 + static_cast<std::uint64_t>(p)) -
                          energy(minus, 2000 + static_cast<std::uint64_t>(p)));
  }
  avg_delta /= probes;
  double gain_a = avg_delta > 1e-12
                      ? component_step * std::pow(big_a + 1.0, opts.alpha) * 2.0 * opts.c /
                            avg_delta
                      : component_step;

  int tail = opts.tail_average > 0 ? opts.tail_average : std::max(1, iters / 10);
  tail = std::min(tail, iters);
  std::vector<double> tail_sum(dim, 0.0);

  for (int k = 0; k < iters; ++k) {
    double ak = gain_a / std::pow(big_a + k + 1.0, opts.alpha);
    double ck = opts.c / std::pow(k + 1.0, opts.gamma);
    std::vector<double> plus = theta, minus = theta;
    std::vector<int> delta(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      delta[i] = (rng() >> 63) ? 1 : -1;
      plus[i] += ck * delta[i];
      minus[i] -= ck * delta[i];
    }
    auto ku = static_cast<std::uint64_t>(k);
    double diff = energy(plus, 3000 + ku) - energy(minus, 3000 + ku);
    double scale = ak * diff / (2.0 * ck);
    double step_cap =
        component_step * std::pow((big_a + 1.0) / (big_a + k + 1.0), opts.alpha);
    if (std::abs(scale) > step_cap) scale = std::copysign(step_cap, scale);
    for (std::size_t i = 0; i < dim; ++i) theta[i] -= scale * delta[i];
    if (k + 1 < iters)
      trajectory.push_back({k + 1, wrapped(theta), energy(theta, ku)});
    if (k >= iters - tail)
      for (std::size_t i = 0; i < dim; ++i) tail_sum[i] += theta[i];
  }
  std::vector<double> solution(dim);
  for (std::size_t i = 0; i < dim; ++i) solution[i] = tail_sum[i] / tail;
  trajectory.push_back({iters, wrapped(solution), energy(solution, static_cast<std::uint64_t>(iters))});
  return trajectory;
}

}  // namespace clapton

#endif  // CLAPTON_PIPELINE_HPP_
