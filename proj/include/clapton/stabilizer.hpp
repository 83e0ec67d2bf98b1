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

#ifndef CLAPTON_STABILIZER_HPP_
#define CLAPTON_STABILIZER_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "clapton/circuit.hpp"
#include "clapton/clifford.hpp"
#include "clapton/pauli.hpp"

namespace clapton {

/// Stabilizer state in tableau form: N commuting signed Pauli generators plus
/// their paired destabilizers. Starts in |0...0> with stabilizers {+Z_k}.
class StabilizerState {
 public:
  explicit StabilizerState(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
      throw std::invalid_argument("StabilizerState: n_qubits out of range");
    stabilizers_.reserve(static_cast<std::size_t>(n_qubits));
    destabilizers_.reserve(static_cast<std::size_t>(n_qubits));
    for (int k = 0; k < n_qubits; ++k) {
      stabilizers_.emplace_back(n_qubits, 0, std::uint64_t{1} << k, +1);
      destabilizers_.emplace_back(n_qubits, std::uint64_t{1} << k, 0, +1);
    }
  }

  int n_qubits() const { return n_qubits_; }
  const PauliString& stabilizer(int k) const { return stabilizers_[static_cast<std::size_t>(k)]; }
  const PauliString& destabilizer(int k) const {
    return destabilizers_[static_cast<std::size_t>(k)];
  }

  void apply(const CliffordGate& g) {
    g.validate(n_qubits_);
    for (auto& row : stabilizers_) conjugate_row_by_gate(row, g);
    for (auto& row : destabilizers_) conjugate_row_by_gate(row, g);
  }

  /// Applies a circuit gate; rotations must sit at multiples of pi/2.
  void apply(const Gate& g) { apply(to_clifford_gate(g)); }

  /// Exact Pauli expectation on the current state: +1/-1 if +-P is in the
  /// stabilizer group, 0 if P anticommutes with some stabilizer.
  int expectation(const PauliString& p) const {
    if (p.n_qubits != n_qubits_) throw std::invalid_argument("expectation: width mismatch");
    for (const auto& s : stabilizers_)
      if (!p.commutes_with(s)) return 0;
    // P is in +-<stabilizers>; the generating subset is identified by which
    // destabilizers anticommute with P.
    PauliString acc(n_qubits_);
    PauliString tmp;
    int e = 0;
    for (int k = 0; k < n_qubits_; ++k) {
      if (!p.commutes_with(destabilizers_[static_cast<std::size_t>(k)])) {
        e += detail::mul_log_i(acc, stabilizers_[static_cast<std::size_t>(k)], tmp);
        acc = tmp;
      }
    }
    if (acc.x_mask != p.x_mask || acc.z_mask != p.z_mask)
      throw std::logic_error("expectation: stabilizer group reconstruction failed");
    e &= 3;
    if (e & 1) throw std::logic_error("expectation: non-Hermitian subset product");
    int group_sign = (e == 0) ? +1 : -1;
    return group_sign * p.sign;
  }

 private:
  int n_qubits_;
  std::vector<PauliString> stabilizers_;
  std::vector<PauliString> destabilizers_;
};

/// Runs the gates of a circuit on |0...0>, skipping noise channels (they are
/// handled by the sampling machinery) and rejecting measurements.
inline StabilizerState run_clifford_gates(const Circuit& c) {
  StabilizerState state(c.n_qubits);
  for (const auto& op : c.ops) {
    if (const auto* g = std::get_if<Gate>(&op)) {
      state.apply(*g);
    } else if (std::holds_alternative<Measure>(op)) {
      throw std::invalid_argument("run_clifford_gates: measurement not supported here");
    }
  }
  return state;
}

/// Exact noiseless energy of the all-zeros state: sum_i c_i <0|P_i|0>.
inline double noiseless_energy_zero_state(const Hamiltonian& h) {
  double e = 0;
  for (const auto& t : h.terms()) e += t.coefficient * zero_state_expectation(t.pauli);
  return e;
}

/// Stabilizer energy <psi|H|psi> of the state prepared by a Clifford circuit.
inline double stabilizer_energy(const StabilizerState& state, const Hamiltonian& h) {
  double e = 0;
  for (const auto& t : h.terms()) e += t.coefficient * state.expectation(t.pauli);
  return e;
}

}  // namespace clapton

#endif  // CLAPTON_STABILIZER_HPP_
