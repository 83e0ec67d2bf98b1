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

#ifndef CLAPTON_BENCHMARKS_HPP_
#define CLAPTON_BENCHMARKS_HPP_

#include <stdexcept>
#include <utility>
#include <vector>

#include "clapton/hamiltonian.hpp"
#include "clapton/pauli.hpp"

namespace clapton {

/// Transverse-field Ising chain with open boundary:
/// J * sum_i X_i X_{i+1} + sum_i Z_i.
inline Hamiltonian make_ising(int n_qubits, double j) {
  if (n_qubits < 2) throw std::invalid_argument("make_ising: n_qubits must be >= 2");
  std::vector<std::pair<double, PauliString>> terms;
  for (int i = 0; i + 1 < n_qubits; ++i) {
    std::uint64_t pair = (std::uint64_t{1} << i) | (std::uint64_t{1} << (i + 1));
    terms.emplace_back(j, PauliString(n_qubits, pair, 0, +1));
  }
  for (int i = 0; i < n_qubits; ++i)
    terms.emplace_back(1.0, PauliString(n_qubits, 0, std::uint64_t{1} << i, +1));
  return Hamiltonian(n_qubits, terms);
}

/// XXZ chain with open boundary:
/// sum_i (J X_i X_{i+1} + J Y_i Y_{i+1} + Z_i Z_{i+1}).
inline Hamiltonian make_xxz(int n_qubits, double j) {
  if (n_qubits < 2) throw std::invalid_argument("make_xxz: n_qubits must be >= 2");
  std::vector<std::pair<double, PauliString>> terms;
  for (int i = 0; i + 1 < n_qubits; ++i) {
    std::uint64_t pair = (std::uint64_t{1} << i) | (std::uint64_t{1} << (i + 1));
    terms.emplace_back(j, PauliString(n_qubits, pair, 0, +1));
    terms.emplace_back(j, PauliString(n_qubits, pair, pair, +1));
    terms.emplace_back(1.0, PauliString(n_qubits, 0, pair, +1));
  }
  return Hamiltonian(n_qubits, terms);
}

}  // namespace clapton

#endif  // CLAPTON_BENCHMARKS_HPP_
