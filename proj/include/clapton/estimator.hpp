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

#ifndef CLAPTON_ESTIMATOR_HPP_
#define CLAPTON_ESTIMATOR_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "clapton/circuit.hpp"
#include "clapton/rng.hpp"
#include "clapton/stabilizer.hpp"

namespace clapton {

struct ShotEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
};

enum class EstimatorMode {
  ExactExpectation,     // fault-frame propagation + analytic readout factor
  MeasurementSampling,  // explicit per-term measurement circuits and parities
};

namespace detail {

/// Standard error of the mean, computed around a pivot so that a constant
/// sample stream yields exactly zero.
inline double std_error_of_samples(const std::vector<double>& v) {
  std::size_t n = v.size();
  if (n < 2) return 0.0;
  double pivot = v[0], sum_d = 0, sum_d2 = 0;
  for (double x : v) {
    double d = x - pivot;
    sum_d += d;
    sum_d2 += d * d;
  }
  double var = (sum_d2 - sum_d * sum_d / static_cast<double>(n)) / static_cast<double>(n - 1);
  return std::sqrt(std::max(0.0, var) / static_cast<double>(n));
}

}  // namespace detail

/// Draws one realization of all depolarizing channels in a circuit.
/// Depolarize1 inserts one of {X,Y,Z} with probability p/3 each; Depolarize2
/// one of the 15 non-identity two-qubit Paulis with probability p/15 each.
/// Returns (op index, error) pairs in circuit order.
template <typename Rng>
std::vector<std::pair<std::size_t, PauliString>> sample_pauli_errors(const Circuit& c, Rng& rng) {
  std::vector<std::pair<std::size_t, PauliString>> errors;
  for (std::size_t i = 0; i < c.ops.size(); ++i) {
    if (const auto* d = std::get_if<Depolarize1>(&c.ops[i])) {
      if (d->p > 0 && bernoulli(rng, d->p)) {
        // r = 0,1,2 -> X, Y, Z
        auto r = uniform_below(rng, 3);
        std::uint64_t bit = std::uint64_t{1} << d->qubit;
        errors.emplace_back(i, PauliString(c.n_qubits, r < 2 ? bit : 0, r > 0 ? bit : 0, +1));
      }
    } else if (const auto* d2 = std::get_if<Depolarize2>(&c.ops[i])) {
      if (d2->p > 0 && bernoulli(rng, d2->p)) {
        auto pattern = uniform_below(rng, 15) + 1;  // 4 bits: xa, za, xb, zb
        std::uint64_t ba = std::uint64_t{1} << d2->qubit_a;
        std::uint64_t bb = std::uint64_t{1} << d2->qubit_b;
        std::uint64_t x = ((pattern >> 0) & 1 ? ba : 0) | ((pattern >> 2) & 1 ? bb : 0);
        std::uint64_t z = ((pattern >> 1) & 1 ? ba : 0) | ((pattern >> 3) & 1 ? bb : 0);
        errors.emplace_back(i, PauliString(c.n_qubits, x, z, +1));
      }
    }
  }
  return errors;
}

/// Sampled Pauli fault frames of a noisy Clifford circuit, stored bit-sliced:
/// one bit plane per qubit across all samples. Frame f of sample s is the
/// product of that sample's errors conjugated to the end of the circuit; the
/// noisy expectation of P in that sample is the noiseless one times -1 if f
/// anticommutes with P (frame signs never matter).
class PauliFrameSet {
 public:
  static PauliFrameSet sample(const Circuit& c, std::size_t n_samples, std::uint64_t seed) {
    if (n_samples == 0) throw std::invalid_argument("PauliFrameSet: zero samples");
    PauliFrameSet fs;
    fs.n_qubits_ = c.n_qubits;
    fs.n_samples_ = n_samples;
    fs.words_ = (n_samples + 63) / 64;
    fs.fx_.assign(static_cast<std::size_t>(c.n_qubits), std::vector<std::uint64_t>(fs.words_, 0));
    fs.fz_.assign(static_cast<std::size_t>(c.n_qubits), std::vector<std::uint64_t>(fs.words_, 0));
    SplitMix64 rng(derive_seed(seed, 0xf7a3e5));

    for (const auto& op : c.ops) {
      if (const auto* g = std::get_if<Gate>(&op)) {
        fs.propagate(to_clifford_gate(*g));
      } else if (const auto* d = std::get_if<Depolarize1>(&op)) {
        fs.inject_depolarize1(*d, rng);
      } else if (const auto* d2 = std::get_if<Depolarize2>(&op)) {
        fs.inject_depolarize2(*d2, rng);
      } else {
        throw std::invalid_argument("fault-frame sampling: circuit must contain only gates and "
                                    "depolarizing channels");
      }
    }
    return fs;
  }

  std::size_t n_samples() const { return n_samples_; }
  std::size_t words() const { return words_; }

  /// Writes, for every sample, the anticommutation bit of its frame with P.
  void anticommute_bits(const PauliString& p, std::vector<std::uint64_t>& out) const {
    out.assign(words_, 0);
    for (std::uint64_t rest = p.z_mask; rest != 0; rest &= rest - 1) {
      const auto& plane = fx_[static_cast<std::size_t>(std::countr_zero(rest))];
      for (std::size_t w = 0; w < words_; ++w) out[w] ^= plane[w];
    }
    for (std::uint64_t rest = p.x_mask; rest != 0; rest &= rest - 1) {
      const auto& plane = fz_[static_cast<std::size_t>(std::countr_zero(rest))];
      for (std::size_t w = 0; w < words_; ++w) out[w] ^= plane[w];
    }
  }

  std::size_t count_anticommuting(const PauliString& p) const {
    std::size_t flips = 0;
    thread_local std::vector<std::uint64_t> bits;
    anticommute_bits(p, bits);
    for (std::size_t w = 0; w < words_; ++w) flips += static_cast<std::size_t>(std::popcount(bits[w]));
    return flips;
  }

  /// Gathers the (x, z) frame masks of one sample.
  std::pair<std::uint64_t, std::uint64_t> frame_masks(std::size_t s) const {
    std::uint64_t x = 0, z = 0;
    std::size_t w = s / 64, b = s % 64;
    for (int q = 0; q < n_qubits_; ++q) {
      x |= ((fx_[static_cast<std::size_t>(q)][w] >> b) & 1) << q;
      z |= ((fz_[static_cast<std::size_t>(q)][w] >> b) & 1) << q;
    }
    return {x, z};
  }

 private:
  PauliFrameSet() = default;

  void propagate(const CliffordGate& g) {
    auto& fx0 = fx_[static_cast<std::size_t>(g.q0)];
    auto& fz0 = fz_[static_cast<std::size_t>(g.q0)];
    switch (g.kind) {
      case CliffordGateKind::H:
        fx0.swap(fz0);
        break;
      case CliffordGateKind::S:
      case CliffordGateKind::SDag:
        for (std::size_t w = 0; w < words_; ++w) fz0[w] ^= fx0[w];
        break;
      case CliffordGateKind::X:
      case CliffordGateKind::Y:
      case CliffordGateKind::Z:
        break;  // Pauli conjugation only flips signs
      case CliffordGateKind::RxStep:
      case CliffordGateKind::RyStep:
      case CliffordGateKind::RzStep: {
        const auto& m = detail::rotation_map(g.kind, g.angle_step);
        std::uint64_t mxx = m.xx ? ~std::uint64_t{0} : 0, mxz = m.xz ? ~std::uint64_t{0} : 0;
        std::uint64_t mzx = m.zx ? ~std::uint64_t{0} : 0, mzz = m.zz ? ~std::uint64_t{0} : 0;
        for (std::size_t w = 0; w < words_; ++w) {
          std::uint64_t x = fx0[w], z = fz0[w];
          fx0[w] = (x & mxx) ^ (z & mzx);
          fz0[w] = (x & mxz) ^ (z & mzz);
        }
        break;
      }
      case CliffordGateKind::Cx: {
        auto& fxt = fx_[static_cast<std::size_t>(g.q1)];
        auto& fzt = fz_[static_cast<std::size_t>(g.q1)];
        for (std::size_t w = 0; w < words_; ++w) {
          fxt[w] ^= fx0[w];
          fz0[w] ^= fzt[w];
        }
        break;
      }
      case CliffordGateKind::Swap:
        fx0.swap(fx_[static_cast<std::size_t>(g.q1)]);
        fz0.swap(fz_[static_cast<std::size_t>(g.q1)]);
        break;
    }
  }

  // Error events are rare, so hit samples are located with geometric skips
  // rather than one draw per sample.
  template <typename Rng>
  void inject_depolarize1(const Depolarize1& d, Rng& rng) {
    if (d.p <= 0) return;
    auto& fx = fx_[static_cast<std::size_t>(d.qubit)];
    auto& fz = fz_[static_cast<std::size_t>(d.qubit)];
    for (std::uint64_t s = geometric_skip(rng, d.p); s < n_samples_;
         s += 1 + geometric_skip(rng, d.p)) {
      auto r = uniform_below(rng, 3);  // 0,1,2 -> X, Y, Z
      std::uint64_t bit = std::uint64_t{1} << (s % 64);
      if (r < 2) fx[s / 64] ^= bit;
      if (r > 0) fz[s / 64] ^= bit;
    }
  }

  template <typename Rng>
  void inject_depolarize2(const Depolarize2& d, Rng& rng) {
    if (d.p <= 0) return;
    auto& fxa = fx_[static_cast<std::size_t>(d.qubit_a)];
    auto& fza = fz_[static_cast<std::size_t>(d.qubit_a)];
    auto& fxb = fx_[static_cast<std::size_t>(d.qubit_b)];
    auto& fzb = fz_[static_cast<std::size_t>(d.qubit_b)];
    for (std::uint64_t s = geometric_skip(rng, d.p); s < n_samples_;
         s += 1 + geometric_skip(rng, d.p)) {
      auto pattern = uniform_below(rng, 15) + 1;
      std::uint64_t bit = std::uint64_t{1} << (s % 64);
      if (pattern & 1) fxa[s / 64] ^= bit;
      if (pattern & 2) fza[s / 64] ^= bit;
      if (pattern & 4) fxb[s / 64] ^= bit;
      if (pattern & 8) fzb[s / 64] ^= bit;
    }
  }

  int n_qubits_ = 0;
  std::size_t n_samples_ = 0, words_ = 0;
  std::vector<std::vector<std::uint64_t>> fx_, fz_;
};

/// Shared machinery for the exact-expectation estimator: the noiseless final
/// stabilizer state plus one set of sampled fault frames, reused across every
/// Hamiltonian evaluated against the same circuit and seed.
class CliffordNoisyEvaluator {
 public:
  CliffordNoisyEvaluator(const Circuit& c_noisy, const NoiseModel& nm, std::size_t n_samples,
                         std::uint64_t seed)
      : base_(run_clifford_gates(c_noisy)),
        frames_(PauliFrameSet::sample(c_noisy, n_samples, seed)),
        nm_(&nm) {}

  const StabilizerState& base_state() const { return base_; }
  const PauliFrameSet& frames() const { return frames_; }
  std::size_t n_samples() const { return frames_.n_samples(); }

  /// Deterministic per-term measurement attenuation: (1 - 2 p_meas) per
  /// support qubit, times (1 - 4 p1 / 3) per basis-change gate the qubit
  /// needs (one for X, two for Y, none for Z).
  double measurement_factor(const PauliString& p) const {
    double f = 1.0;
    for (std::uint64_t rest = p.x_mask | p.z_mask; rest != 0; rest &= rest - 1) {
      int q = std::countr_zero(rest);
      f *= 1.0 - 2.0 * nm_->p_meas(q);
      bool x = (p.x_mask >> q) & 1, z = (p.z_mask >> q) & 1;
      int basis_gates = x ? (z ? 2 : 1) : 0;
      for (int g = 0; g < basis_gates; ++g) f *= 1.0 - (4.0 / 3.0) * nm_->p1(q);
    }
    return f;
  }

  /// Estimator mean. Summed in term order; bitwise identical to the mean of
  /// estimate() so that optimization and reporting agree exactly.
  double mean(const Hamiltonian& h) const {
    double total = 0.0;
    double inv_n = 1.0 / static_cast<double>(frames_.n_samples());
    for (const auto& t : h.terms()) {
      int b = base_.expectation(t.pauli);
      if (b == 0) continue;
      double flips = static_cast<double>(frames_.count_anticommuting(t.pauli));
      total += t.coefficient * b * measurement_factor(t.pauli) * (1.0 - 2.0 * flips * inv_n);
    }
    return total;
  }

  ShotEstimate estimate(const Hamiltonian& h) const {
    std::size_t n = frames_.n_samples();
    ShotEstimate est;
    est.n_samples = static_cast<std::int64_t>(n);
    est.mean = mean(h);
    if (n < 2) return est;
    // Per-sample totals reconstructed from the anticommutation bit planes.
    std::vector<double> v(n, 0.0);
    std::vector<std::uint64_t> bits;
    for (const auto& t : h.terms()) {
      int b = base_.expectation(t.pauli);
      if (b == 0) continue;
      double w = t.coefficient * b * measurement_factor(t.pauli);
      frames_.anticommute_bits(t.pauli, bits);
      for (std::size_t s = 0; s < n; ++s)
        v[s] += ((bits[s / 64] >> (s % 64)) & 1) ? -w : w;
    }
    est.std_error = detail::std_error_of_samples(v);
    return est;
  }

 private:
  StabilizerState base_;
  PauliFrameSet frames_;
  const NoiseModel* nm_;
};

namespace detail {

/// Literal reading of the measured process: per term and sample, rotate into
/// the measurement basis (with gate noise), read out with flips, average the
/// parities. Used to validate the exact-expectation mode.
inline ShotEstimate measurement_sampling_energy(const Circuit& c_noisy, const Hamiltonian& h,
                                                const NoiseModel& nm, std::size_t n_samples,
                                                std::uint64_t seed) {
  StabilizerState base = run_clifford_gates(c_noisy);
  PauliFrameSet frames = PauliFrameSet::sample(c_noisy, n_samples, seed);

  struct TermInfo {
    double coefficient;
    const PauliString* pauli;
    int base_expectation;
  };
  std::vector<TermInfo> terms;
  terms.reserve(h.size());
  for (const auto& t : h.terms())
    terms.push_back({t.coefficient, &t.pauli, base.expectation(t.pauli)});

  std::vector<double> values;
  values.reserve(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    auto [fx, fz] = frames.frame_masks(s);
    double v = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto& info = terms[i];
      SplitMix64 rng(derive_seed(seed, 0x6d5a11, s, i));
      int parity;
      if (info.base_expectation == 0) {
        parity = (rng() >> 63) ? 1 : -1;
      } else {
        int anti = std::popcount(fx & info.pauli->z_mask) +
                   std::popcount(fz & info.pauli->x_mask);
        parity = info.base_expectation * ((anti & 1) ? -1 : 1);
      }
      for (std::uint64_t rest = info.pauli->x_mask | info.pauli->z_mask; rest != 0;
           rest &= rest - 1) {
        int q = std::countr_zero(rest);
        bool x = (info.pauli->x_mask >> q) & 1, z = (info.pauli->z_mask >> q) & 1;
        int basis_gates = x ? (z ? 2 : 1) : 0;
        for (int g = 0; g < basis_gates; ++g) {
          // A depolarizing hit after a basis gate flips the measured parity
          // for 2 of the 3 equally likely Pauli errors.
          if (bernoulli(rng, nm.p1(q)) && uniform_below(rng, 3) < 2) parity = -parity;
        }
        if (bernoulli(rng, nm.p_meas(q))) parity = -parity;
      }
      v += info.coefficient * parity;
    }
    values.push_back(v);
  }
  ShotEstimate est;
  est.n_samples = static_cast<std::int64_t>(n_samples);
  double sum = 0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(n_samples);
  est.std_error = detail::std_error_of_samples(values);
  return est;
}

}  // namespace detail

/// Monte-Carlo estimate of the noisy energy sum_i c_i E[<P_i>] of the state
/// prepared by a noise-equipped Clifford circuit. Both modes converge to the
/// same value; ExactExpectation has the lower variance.
inline ShotEstimate noisy_energy(const Circuit& c_noisy, const Hamiltonian& h,
                                 const NoiseModel& nm, std::size_t n_samples, EstimatorMode mode,
                                 std::uint64_t seed) {
  if (h.n_qubits() != c_noisy.n_qubits)
    throw std::invalid_argument("noisy_energy: width mismatch");
  if (n_samples == 0) throw std::invalid_argument("noisy_energy: zero samples");
  for (const auto& op : c_noisy.ops)
    if (std::holds_alternative<Measure>(op) || std::holds_alternative<ReadoutFlip>(op))
      throw std::invalid_argument("noisy_energy: circuit must not contain measurement ops");
  if (mode == EstimatorMode::ExactExpectation)
    return CliffordNoisyEvaluator(c_noisy, nm, n_samples, seed).estimate(h);
  return detail::measurement_sampling_energy(c_noisy, h, nm, n_samples, seed);
}

}  // namespace clapton

#endif  // CLAPTON_ESTIMATOR_HPP_
