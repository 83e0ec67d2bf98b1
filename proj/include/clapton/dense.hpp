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

#ifndef CLAPTON_DENSE_HPP_
#define CLAPTON_DENSE_HPP_

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "clapton/circuit.hpp"
#include "clapton/hamiltonian.hpp"
#include "clapton/noise_model.hpp"
#include "clapton/pauli.hpp"

namespace clapton {

// Exact small-instance reference backends. Basis index bit k encodes the
// computational state of qubit k.

inline constexpr int kMaxStatevectorQubits = 14;
inline constexpr int kMaxDensityMatrixQubits = 12;

struct DenseState {
  int n_qubits = 0;
  Eigen::VectorXcd amplitudes;
};

struct DensityMatrix {
  int n_qubits = 0;
  Eigen::MatrixXcd rho;
};

inline DenseState zero_state(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxStatevectorQubits)
    throw std::invalid_argument("statevector size cap exceeded (n <= 14)");
  DenseState s;
  s.n_qubits = n_qubits;
  s.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << n_qubits);
  s.amplitudes(0) = 1.0;
  return s;
}

inline DensityMatrix zero_density_matrix(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxDensityMatrixQubits)
    throw std::invalid_argument("density matrix size cap exceeded (n <= 12)");
  DensityMatrix d;
  d.n_qubits = n_qubits;
  d.rho = Eigen::MatrixXcd::Zero(std::int64_t{1} << n_qubits, std::int64_t{1} << n_qubits);
  d.rho(0, 0) = 1.0;
  return d;
}

inline DensityMatrix density_matrix_from_state(const DenseState& s) {
  if (s.n_qubits > kMaxDensityMatrixQubits)
    throw std::invalid_argument("density matrix size cap exceeded (n <= 12)");
  DensityMatrix d;
  d.n_qubits = s.n_qubits;
  d.rho = s.amplitudes * s.amplitudes.adjoint();
  return d;
}

namespace dense_detail {

using C = std::complex<double>;
using Mat2 = std::array<C, 4>;  // row-major

inline Mat2 gate_matrix_1q(const Gate& g) {
  const C i(0, 1);
  switch (g.kind) {
    case GateKind::H: {
      double r = 1.0 / std::sqrt(2.0);
      return {C(r), C(r), C(r), C(-r)};
    }
    case GateKind::S: return {C(1), C(0), C(0), i};
    case GateKind::SDag: return {C(1), C(0), C(0), -i};
    case GateKind::X: return {C(0), C(1), C(1), C(0)};
    case GateKind::Y: return {C(0), -i, i, C(0)};
    case GateKind::Z: return {C(1), C(0), C(0), C(-1)};
    case GateKind::Rx: {
      double h = g.angle / 2;
      return {C(std::cos(h)), -i * std::sin(h), -i * std::sin(h), C(std::cos(h))};
    }
    case GateKind::Ry: {
      double h = g.angle / 2;
      return {C(std::cos(h)), C(-std::sin(h)), C(std::sin(h)), C(std::cos(h))};
    }
    case GateKind::Rz: {
      double h = g.angle / 2;
      return {std::exp(-i * h), C(0), C(0), std::exp(i * h)};
    }
    default: throw std::logic_error("not a single-qubit gate");
  }
}

/// Phase of P acting on basis state |j>: P|j> = phase(j) |j ^ x_mask>.
inline C pauli_phase(const PauliString& p, std::uint64_t j) {
  static const C i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  int y_cnt = std::popcount(p.x_mask & p.z_mask);
  int z_par = std::popcount(j & p.z_mask) & 1;
  C phase = i_pow[y_cnt & 3];
  if (z_par) phase = -phase;
  return static_cast<double>(p.sign) * phase;
}

}  // namespace dense_detail

inline void apply_gate(DenseState& s, const Gate& g) {
  std::int64_t dim = s.amplitudes.size();
  if (g.kind == GateKind::Cx) {
    std::int64_t bc = std::int64_t{1} << g.q0, bt = std::int64_t{1} << g.q1;
    for (std::int64_t j = 0; j < dim; ++j)
      if ((j & bc) && !(j & bt)) std::swap(s.amplitudes(j), s.amplitudes(j | bt));
    return;
  }
  if (g.kind == GateKind::Swap) {
    std::int64_t ba = std::int64_t{1} << g.q0, bb = std::int64_t{1} << g.q1;
    for (std::int64_t j = 0; j < dim; ++j)
      if ((j & ba) && !(j & bb)) std::swap(s.amplitudes(j), s.amplitudes((j & ~ba) | bb));
    return;
  }
  auto u = dense_detail::gate_matrix_1q(g);
  std::int64_t bit = std::int64_t{1} << g.q0;
  for (std::int64_t j = 0; j < dim; ++j) {
    if (j & bit) continue;
    auto a0 = s.amplitudes(j), a1 = s.amplitudes(j | bit);
    s.amplitudes(j) = u[0] * a0 + u[1] * a1;
    s.amplitudes(j | bit) = u[2] * a0 + u[3] * a1;
  }
}

/// Exact unitary evolution of a noiseless circuit.
inline DenseState statevector_run(const Circuit& c, DenseState initial) {
  if (c.n_qubits != initial.n_qubits)
    throw std::invalid_argument("statevector_run: width mismatch");
  if (c.n_qubits > kMaxStatevectorQubits)
    throw std::invalid_argument("statevector size cap exceeded (n <= 14)");
  for (const auto& op : c.ops) {
    if (const auto* g = std::get_if<Gate>(&op)) {
      apply_gate(initial, *g);
    } else {
      throw std::invalid_argument("statevector_run: circuit contains a noise channel");
    }
  }
  return initial;
}

inline DenseState statevector_run(const Circuit& c) { return statevector_run(c, zero_state(c.n_qubits)); }

/// Full unitary of a noiseless circuit, built column by column. Test helper;
/// intended for small n.
inline Eigen::MatrixXcd circuit_unitary(const Circuit& c) {
  std::int64_t dim = std::int64_t{1} << c.n_qubits;
  Eigen::MatrixXcd u(dim, dim);
  for (std::int64_t j = 0; j < dim; ++j) {
    DenseState basis;
    basis.n_qubits = c.n_qubits;
    basis.amplitudes = Eigen::VectorXcd::Zero(dim);
    basis.amplitudes(j) = 1.0;
    u.col(j) = statevector_run(c, basis).amplitudes;
  }
  return u;
}

// ---------------------------------------------------------------------------
// Density-matrix evolution
// ---------------------------------------------------------------------------

inline void apply_gate(DensityMatrix& d, const Gate& g) {
  std::int64_t dim = d.rho.rows();
  if (g.kind == GateKind::Cx || g.kind == GateKind::Swap) {
    // Permutation unitaries: conjugate by permuting rows then columns.
    auto permute = [&](std::int64_t j) {
      if (g.kind == GateKind::Cx) {
        std::int64_t bc = std::int64_t{1} << g.q0, bt = std::int64_t{1} << g.q1;
        return (j & bc) ? (j ^ bt) : j;
      }
      std::int64_t ba = std::int64_t{1} << g.q0, bb = std::int64_t{1} << g.q1;
      bool a = j & ba, b = j & bb;
      return (j & ~(ba | bb)) | (b ? ba : 0) | (a ? bb : 0);
    };
    Eigen::MatrixXcd out(dim, dim);
    for (std::int64_t r = 0; r < dim; ++r)
      for (std::int64_t cc = 0; cc < dim; ++cc) out(permute(r), permute(cc)) = d.rho(r, cc);
    d.rho = std::move(out);
    return;
  }
  auto u = dense_detail::gate_matrix_1q(g);
  std::int64_t bit = std::int64_t{1} << g.q0;
  // rho -> U rho
  for (std::int64_t cc = 0; cc < dim; ++cc) {
    for (std::int64_t r = 0; r < dim; ++r) {
      if (r & bit) continue;
      auto a0 = d.rho(r, cc), a1 = d.rho(r | bit, cc);
      d.rho(r, cc) = u[0] * a0 + u[1] * a1;
      d.rho(r | bit, cc) = u[2] * a0 + u[3] * a1;
    }
  }
  // rho -> rho U^dagger
  for (std::int64_t r = 0; r < dim; ++r) {
    for (std::int64_t cc = 0; cc < dim; ++cc) {
      if (cc & bit) continue;
      auto a0 = d.rho(r, cc), a1 = d.rho(r, cc | bit);
      d.rho(r, cc) = a0 * std::conj(u[0]) + a1 * std::conj(u[1]);
      d.rho(r, cc | bit) = a0 * std::conj(u[2]) + a1 * std::conj(u[3]);
    }
  }
}

namespace dense_detail {

/// acc += weight * P rho P for a Hermitian Pauli P.
inline void accumulate_pauli_conjugation(Eigen::MatrixXcd& acc, const Eigen::MatrixXcd& rho,
                                         const PauliString& p, double weight) {
  std::int64_t dim = rho.rows();
  std::uint64_t x = p.x_mask, z = p.z_mask;
  for (std::int64_t r = 0; r < dim; ++r) {
    double sr = (std::popcount(static_cast<std::uint64_t>(r) & z) & 1) ? -1.0 : 1.0;
    for (std::int64_t cc = 0; cc < dim; ++cc) {
      double sc = (std::popcount(static_cast<std::uint64_t>(cc) & z) & 1) ? -1.0 : 1.0;
      acc(r, cc) += weight * sr * sc *
                    rho(static_cast<std::int64_t>(static_cast<std::uint64_t>(r) ^ x),
                        static_cast<std::int64_t>(static_cast<std::uint64_t>(cc) ^ x));
    }
  }
}

}  // namespace dense_detail

inline void apply_depolarize1(DensityMatrix& d, int qubit, double p) {
  if (p <= 0) return;
  Eigen::MatrixXcd acc = (1.0 - p) * d.rho;
  for (int which = 1; which <= 3; ++which) {
    std::uint64_t bit = std::uint64_t{1} << qubit;
    PauliString pauli(d.n_qubits, which != 3 ? bit : 0, which != 1 ? bit : 0, +1);
    dense_detail::accumulate_pauli_conjugation(acc, d.rho, pauli, p / 3.0);
  }
  d.rho = std::move(acc);
}

inline void apply_depolarize2(DensityMatrix& d, int qa, int qb, double p) {
  if (p <= 0) return;
  Eigen::MatrixXcd acc = (1.0 - p) * d.rho;
  for (int pattern = 1; pattern < 16; ++pattern) {
    std::uint64_t ba = std::uint64_t{1} << qa, bb = std::uint64_t{1} << qb;
    std::uint64_t x = ((pattern >> 0) & 1 ? ba : 0) | ((pattern >> 2) & 1 ? bb : 0);
    std::uint64_t z = ((pattern >> 1) & 1 ? ba : 0) | ((pattern >> 3) & 1 ? bb : 0);
    dense_detail::accumulate_pauli_conjugation(acc, d.rho, PauliString(d.n_qubits, x, z, +1),
                                               p / 15.0);
  }
  d.rho = std::move(acc);
}

/// Classical symmetric readout misassignment, modeled as an X-flip channel.
inline void apply_readout_flip(DensityMatrix& d, int qubit, double p) {
  if (p <= 0) return;
  Eigen::MatrixXcd acc = (1.0 - p) * d.rho;
  std::uint64_t bit = std::uint64_t{1} << qubit;
  dense_detail::accumulate_pauli_conjugation(acc, d.rho, PauliString(d.n_qubits, bit, 0, +1), p);
  d.rho = std::move(acc);
}

/// Amplitude damping with decay probability `gamma` on one qubit.
inline void apply_amplitude_damping(DensityMatrix& d, int qubit, double gamma) {
  if (gamma <= 0) return;
  std::int64_t dim = d.rho.rows();
  std::int64_t bit = std::int64_t{1} << qubit;
  double root = std::sqrt(1.0 - gamma);
  // K1 rho K1^dag moves |1><1| population into |0><0|.
  for (std::int64_t r = 0; r < dim; ++r) {
    if (r & bit) continue;
    for (std::int64_t cc = 0; cc < dim; ++cc) {
      if (cc & bit) continue;
      d.rho(r, cc) += gamma * d.rho(r | bit, cc | bit);
    }
  }
  // K0 scales every |1> row and column by sqrt(1 - gamma).
  for (std::int64_t r = 0; r < dim; ++r)
    for (std::int64_t cc = 0; cc < dim; ++cc)
      if ((r & bit) || (cc & bit))
        d.rho(r, cc) *= ((r & bit) && (cc & bit)) ? (1.0 - gamma) : root;
}

/// Projective Z measurement without recording the outcome: kills coherences.
inline void apply_dephase(DensityMatrix& d, int qubit) {
  std::int64_t dim = d.rho.rows();
  std::int64_t bit = std::int64_t{1} << qubit;
  for (std::int64_t r = 0; r < dim; ++r)
    for (std::int64_t cc = 0; cc < dim; ++cc)
      if (((r ^ cc) & bit) != 0) d.rho(r, cc) = 0.0;
}

/// Evolves a density matrix through a slice of circuit ops. When include_t1
/// is set, per-qubit amplitude damping with decay probability 1 - e^{-t/T1}
/// follows each op, where t is the op's duration; qubits idle during another
/// qubit's gate do not decay.
inline void apply_ops_to_density_matrix(DensityMatrix& d, const std::vector<CircuitOp>& ops,
                                        const NoiseModel& nm, bool include_t1) {
  auto damp = [&](int q, const std::string& op_name) {
    if (!include_t1) return;
    double t = nm.duration(op_name);
    if (t <= 0) return;
    apply_amplitude_damping(d, q, 1.0 - std::exp(-t / nm.t1(q)));
  };
  for (const auto& op : ops) {
    if (const auto* g = std::get_if<Gate>(&op)) {
      apply_gate(d, *g);
      damp(g->q0, gate_name(g->kind));
      if (is_two_qubit(g->kind)) damp(g->q1, gate_name(g->kind));
    } else if (const auto* d1 = std::get_if<Depolarize1>(&op)) {
      apply_depolarize1(d, d1->qubit, d1->p);
    } else if (const auto* d2 = std::get_if<Depolarize2>(&op)) {
      apply_depolarize2(d, d2->qubit_a, d2->qubit_b, d2->p);
    } else if (const auto* r = std::get_if<ReadoutFlip>(&op)) {
      apply_readout_flip(d, r->qubit, r->p);
    } else if (const auto* m = std::get_if<Measure>(&op)) {
      damp(m->qubit, "MEASURE");
      apply_dephase(d, m->qubit);
    }
  }
}

/// Full-noise reference: unitary gates, depolarizing channels, optional
/// per-op thermal relaxation, readout flips as classical confusion.
inline DensityMatrix density_matrix_run(const Circuit& c, const NoiseModel& nm, bool include_t1) {
  DensityMatrix d = zero_density_matrix(c.n_qubits);
  apply_ops_to_density_matrix(d, c.ops, nm, include_t1);
  return d;
}

// ---------------------------------------------------------------------------
// Spectra and expectations
// ---------------------------------------------------------------------------

inline Eigen::MatrixXcd hamiltonian_matrix(const Hamiltonian& h) {
  if (h.n_qubits() > kMaxDensityMatrixQubits)
    throw std::invalid_argument("dense Hamiltonian size cap exceeded (n <= 12)");
  std::int64_t dim = std::int64_t{1} << h.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : h.terms()) {
    for (std::int64_t j = 0; j < dim; ++j) {
      auto jj = static_cast<std::uint64_t>(j);
      m(static_cast<std::int64_t>(jj ^ t.pauli.x_mask), j) +=
          t.coefficient * dense_detail::pauli_phase(t.pauli, jj);
    }
  }
  return m;
}

/// Sorted eigenvalue list of the dense Hermitian matrix of h.
inline std::vector<double> spectrum(const Hamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian_matrix(h),
                                                         Eigen::EigenvaluesOnly);
  std::vector<double> ev(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double exact_ground_energy(const Hamiltonian& h) { return spectrum(h).front(); }

/// tr[H] / 2^N without building the matrix: only the all-identity term has
/// nonzero trace.
inline double fully_mixed_energy(const Hamiltonian& h) {
  for (const auto& t : h.terms())
    if (t.pauli.is_identity()) return t.coefficient;
  return 0.0;
}

inline double dense_expectation(const DenseState& s, const Hamiltonian& h) {
  if (s.n_qubits != h.n_qubits()) throw std::invalid_argument("dense_expectation: width mismatch");
  std::complex<double> total = 0;
  std::int64_t dim = s.amplitudes.size();
  for (const auto& t : h.terms()) {
    std::complex<double> acc = 0;
    for (std::int64_t j = 0; j < dim; ++j) {
      auto jj = static_cast<std::uint64_t>(j);
      acc += std::conj(s.amplitudes(static_cast<std::int64_t>(jj ^ t.pauli.x_mask))) *
             dense_detail::pauli_phase(t.pauli, jj) * s.amplitudes(j);
    }
    total += t.coefficient * acc;
  }
  return total.real();
}

inline double dense_expectation(const DensityMatrix& d, const Hamiltonian& h) {
  if (d.n_qubits != h.n_qubits()) throw std::invalid_argument("dense_expectation: width mismatch");
  std::complex<double> total = 0;
  std::int64_t dim = d.rho.rows();
  for (const auto& t : h.terms()) {
    std::complex<double> acc = 0;
    // tr(rho P) = sum_j phase(j) rho(j, j ^ x)
    for (std::int64_t j = 0; j < dim; ++j) {
      auto jj = static_cast<std::uint64_t>(j);
      acc += dense_detail::pauli_phase(t.pauli, jj) *
             d.rho(j, static_cast<std::int64_t>(jj ^ t.pauli.x_mask));
    }
    total += t.coefficient * acc;
  }
  return total.real();
}

}  // namespace clapton

#endif  // CLAPTON_DENSE_HPP_
