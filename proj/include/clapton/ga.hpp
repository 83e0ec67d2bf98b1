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

#ifndef CLAPTON_GA_HPP_
#define CLAPTON_GA_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "clapton/rng.hpp"

namespace clapton {

/// Discrete genome: genome_length genes, each in [0, gene_values).
using Genome = std::vector<std::uint8_t>;

/// Loss callback. The eval_seed is fixed for a whole optimization round so
/// stochastic losses face identical noise realizations across a round
/// (common random numbers); deterministic losses may ignore it.
using GALoss = std::function<double(const Genome&, std::uint64_t eval_seed)>;

/// Called once at the start of each round with that round's eval_seed, before
/// any instance starts evaluating. Lets callers precompute shared state.
using GARoundHook = std::function<void(int round, std::uint64_t eval_seed)>;

struct GAConfig {
  int instance_count = 10;       // parallel GA instances per round
  int iterations_per_round = 100;
  int top_k = 20;                // solutions taken per instance into the mix
  int population_size = 100;
  int retry_rounds = 2;          // consecutive non-improving rounds allowed
  int genome_length = 0;
  int gene_values = 4;
  std::uint64_t seed = 0;
  double mutation_rate = 0.05;   // per gene
  int tournament_size = 3;
  double convergence_epsilon = 1e-9;
  double crossover_rate = 0.9;
  int max_rounds = 0;            // 0 = run until convergence
  int threads = 0;               // 0 = hardware concurrency
  bool cache_losses = true;      // memoize within a round (losses are
                                 // deterministic per eval_seed)

  void validate() const {
    if (instance_count < 1) throw std::invalid_argument("GAConfig: instance_count must be >= 1");
    if (iterations_per_round < 1)
      throw std::invalid_argument("GAConfig: iterations_per_round must be >= 1");
    if (top_k < 1 || top_k > population_size)
      throw std::invalid_argument("GAConfig: top_k must be in [1, population_size]");
    if (population_size < 2) throw std::invalid_argument("GAConfig: population_size must be >= 2");
    if (genome_length < 1) throw std::invalid_argument("GAConfig: genome_length must be >= 1");
    if (gene_values < 2 || gene_values > 256)
      throw std::invalid_argument("GAConfig: gene_values must be in [2, 256]");
    if (!(mutation_rate > 0.0 && mutation_rate < 1.0))
      throw std::invalid_argument("GAConfig: mutation_rate must be in (0, 1)");
    if (tournament_size < 1) throw std::invalid_argument("GAConfig: tournament_size must be >= 1");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
      throw std::invalid_argument("GAConfig: crossover_rate must be in [0, 1]");
    if (convergence_epsilon < 0)
      throw std::invalid_argument("GAConfig: convergence_epsilon must be >= 0");
    if (retry_rounds < 0) throw std::invalid_argument("GAConfig: retry_rounds must be >= 0");
  }
};

struct ScoredGenome {
  Genome genome;
  double loss = std::numeric_limits<double>::infinity();
};

struct OptimizationTrace {
  std::vector<double> best_loss_per_round;  // running best; non-increasing
  Genome best_genome;
  std::uint64_t evaluations = 0;  // actual loss invocations (cache misses)
  int rounds = 0;
};

/// Thrown when the loss function returns a non-finite value.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(std::string what, Genome genome)
      : std::runtime_error(std::move(what)), genome(std::move(genome)) {}
  Genome genome;
};

/// Thrown out of multi_instance_optimize when an evaluation failed; carries
/// the trace accumulated up to the failing round.
class OptimizationAborted : public std::runtime_error {
 public:
  OptimizationAborted(const EvaluationError& cause, OptimizationTrace partial)
      : std::runtime_error(cause.what()), genome(cause.genome), partial_trace(std::move(partial)) {}
  Genome genome;
  OptimizationTrace partial_trace;
};

namespace ga_detail {

inline bool better(const ScoredGenome& a, const ScoredGenome& b) {
  if (a.loss != b.loss) return a.loss < b.loss;
  return a.genome < b.genome;  // deterministic tie-break
}

template <typename Rng>
Genome random_genome(const GAConfig& cfg, Rng& rng) {
  Genome g(static_cast<std::size_t>(cfg.genome_length));
  for (auto& gene : g)
    gene = static_cast<std::uint8_t>(uniform_below(rng, static_cast<std::uint64_t>(cfg.gene_values)));
  return g;
}

class RoundEvaluator {
 public:
  RoundEvaluator(const GALoss& loss, std::uint64_t eval_seed, bool cache)
      : loss_(loss), eval_seed_(eval_seed), cache_enabled_(cache) {}

  double operator()(const Genome& g) {
    if (cache_enabled_) {
      auto it = cache_.find(g);
      if (it != cache_.end()) return it->second;
    }
    double value = loss_(g, eval_seed_);
    ++evaluations_;
    if (!std::isfinite(value))
      throw EvaluationError("loss returned a non-finite value", g);
    if (cache_enabled_) cache_.emplace(g, value);
    return value;
  }

  std::uint64_t evaluations() const { return evaluations_; }

 private:
  const GALoss& loss_;
  std::uint64_t eval_seed_;
  bool cache_enabled_;
  std::uint64_t evaluations_ = 0;
  std::map<Genome, double> cache_;
};

}  // namespace ga_detail

/// Runs `generations` of tournament selection, single-point crossover,
/// per-gene uniform mutation and single-elite survival on one population.
/// Returns the final population sorted by loss ascending.
template <typename Rng>
std::vector<ScoredGenome> ga_round(ga_detail::RoundEvaluator& evaluate,
                                   std::vector<Genome> population, int generations,
                                   const GAConfig& cfg, Rng& rng) {
  if (population.size() != static_cast<std::size_t>(cfg.population_size))
    throw std::invalid_argument("ga_round: population size mismatch");

  std::vector<ScoredGenome> scored(population.size());
  for (std::size_t i = 0; i < population.size(); ++i)
    scored[i] = {std::move(population[i]), 0.0};
  for (auto& s : scored) s.loss = evaluate(s.genome);

  auto best_of = [&](const std::vector<ScoredGenome>& pop) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
      if (ga_detail::better(pop[i], pop[best])) best = i;
    return best;
  };

  auto tournament = [&](const std::vector<ScoredGenome>& pop) -> const Genome& {
    std::size_t winner = uniform_below(rng, pop.size());
    for (int t = 1; t < cfg.tournament_size; ++t) {
      std::size_t challenger = uniform_below(rng, pop.size());
      if (ga_detail::better(pop[challenger], pop[winner])) winner = challenger;
    }
    return pop[winner].genome;
  };

  for (int gen = 0; gen < generations; ++gen) {
    std::vector<ScoredGenome> next;
    next.reserve(scored.size());
    next.push_back(scored[best_of(scored)]);  // elite survives untouched
    while (next.size() < scored.size()) {
      const Genome& pa = tournament(scored);
      const Genome& pb = tournament(scored);
      Genome child = pa;
      if (cfg.genome_length > 1 && bernoulli(rng, cfg.crossover_rate)) {
        std::size_t cut = 1 + uniform_below(rng, static_cast<std::uint64_t>(cfg.genome_length - 1));
        std::copy(pb.begin() + static_cast<std::ptrdiff_t>(cut), pb.end(),
                  child.begin() + static_cast<std::ptrdiff_t>(cut));
      }
      for (auto& gene : child)
        if (bernoulli(rng, cfg.mutation_rate))
          gene = static_cast<std::uint8_t>(
              uniform_below(rng, static_cast<std::uint64_t>(cfg.gene_values)));
      next.push_back({std::move(child), 0.0});
    }
    for (std::size_t i = 1; i < next.size(); ++i) next[i].loss = evaluate(next[i].genome);
    scored = std::move(next);
  }

  std::stable_sort(scored.begin(), scored.end(), ga_detail::better);
  return scored;
}

/// Convenience overload evaluating against a bare loss function.
template <typename Rng>
std::vector<ScoredGenome> ga_round(const GALoss& loss, std::vector<Genome> population,
                                   int generations, const GAConfig& cfg, Rng& rng,
                                   std::uint64_t eval_seed = 0) {
  ga_detail::RoundEvaluator evaluate(loss, eval_seed, cfg.cache_losses);
  return ga_round(evaluate, std::move(population), generations, cfg, rng);
}

/// Multi-instance engine: instance_count GAs search independently each round;
/// the top_k of every final population are pooled, and the next starting
/// populations draw half from the pool and half fresh at random. Rounds
/// repeat until the global best stops improving by more than
/// convergence_epsilon for retry_rounds consecutive rounds.
///
/// Instances run concurrently; every random stream is derived from
/// (seed, instance, round), so the trace is independent of scheduling.
inline OptimizationTrace multi_instance_optimize(const GALoss& loss, const GAConfig& cfg,
                                                 const GARoundHook& round_hook = {}) {
  cfg.validate();
  OptimizationTrace trace;
  ScoredGenome global_best;
  std::vector<Genome> pool;

  int n_threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  n_threads = std::min(n_threads, cfg.instance_count);

  int stale_rounds = 0;
  for (int round = 0;; ++round) {
    std::uint64_t eval_seed = derive_seed(cfg.seed, 0x90c4d, static_cast<std::uint64_t>(round));
    if (round_hook) round_hook(round, eval_seed);

    std::vector<std::vector<ScoredGenome>> finals(static_cast<std::size_t>(cfg.instance_count));
    std::vector<std::uint64_t> eval_counts(static_cast<std::size_t>(cfg.instance_count), 0);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.instance_count));

    auto run_instance = [&](int i) {
      try {
        SplitMix64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i) + 1,
                                   static_cast<std::uint64_t>(round)));
        std::vector<Genome> start;
        start.reserve(static_cast<std::size_t>(cfg.population_size));
        if (round == 0 || pool.empty()) {
          for (int p = 0; p < cfg.population_size; ++p)
            start.push_back(ga_detail::random_genome(cfg, rng));
        } else {
          // Half pool draws, half fresh random guesses. The incumbent takes
          // the first slot so it is re-evaluated under this round's seed.
          int pool_draws = cfg.population_size / 2;
          start.push_back(global_best.genome);
          for (int p = 1; p < pool_draws; ++p)
            start.push_back(pool[uniform_below(rng, pool.size())]);
          while (start.size() < static_cast<std::size_t>(cfg.population_size))
            start.push_back(ga_detail::random_genome(cfg, rng));
        }
        ga_detail::RoundEvaluator evaluate(loss, eval_seed, cfg.cache_losses);
        finals[static_cast<std::size_t>(i)] =
            ga_round(evaluate, std::move(start), cfg.iterations_per_round, cfg, rng);
        eval_counts[static_cast<std::size_t>(i)] = evaluate.evaluations();
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    };

    if (n_threads <= 1) {
      for (int i = 0; i < cfg.instance_count; ++i) run_instance(i);
    } else {
      std::vector<std::thread> workers;
      std::atomic<int> next{0};
      for (int t = 0; t < n_threads; ++t) {
        workers.emplace_back([&] {
          for (int i = next.fetch_add(1); i < cfg.instance_count; i = next.fetch_add(1))
            run_instance(i);
        });
      }
      for (auto& w : workers) w.join();
    }

    for (auto c : eval_counts) trace.evaluations += c;
    for (auto& err : errors) {
      if (err) {
        try {
          std::rethrow_exception(err);
        } catch (const EvaluationError& e) {
          throw OptimizationAborted(e, trace);
        }
      }
    }

    // Pool the top k of each instance and update the incumbent.
    pool.clear();
    ScoredGenome round_best;
    for (const auto& fin : finals) {
      for (int k = 0; k < cfg.top_k && k < static_cast<int>(fin.size()); ++k)
        pool.push_back(fin[static_cast<std::size_t>(k)].genome);
      if (!fin.empty() && ga_detail::better(fin.front(), round_best)) round_best = fin.front();
    }

    bool improved = round_best.loss < global_best.loss - cfg.convergence_epsilon;
    if (ga_detail::better(round_best, global_best)) global_best = round_best;
    trace.best_loss_per_round.push_back(global_best.loss);
    trace.rounds = round + 1;

    if (improved)
      stale_rounds = 0;
    else
      ++stale_rounds;
    if (stale_rounds > cfg.retry_rounds) break;
    if (cfg.max_rounds > 0 && round + 1 >= cfg.max_rounds) break;
  }

  trace.best_genome = global_best.genome;
  return trace;
}

}  // namespace clapton

#endif  // CLAPTON_GA_HPP_
