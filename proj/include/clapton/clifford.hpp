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

#ifndef CLAPTON_CLIFFORD_HPP_
#define CLAPTON_CLIFFORD_HPP_

#include <array>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "clapton/hamiltonian.hpp"
#include "clapton/pauli.hpp"

namespace clapton {

enum class CliffordGateKind {
  H,
  S,
  SDag,
  X,
  Y,
  Z,
  RxStep,  // exp(-i * step*pi/4 * X), step in {0,1,2,3}
  RyStep,
  RzStep,
  Cx,
  Swap,
};

inline bool is_two_qubit(CliffordGateKind k) {
  return k == CliffordGateKind::Cx || k == CliffordGateKind::Swap;
}
inline bool is_step_rotation(CliffordGateKind k) {
  return k == CliffordGateKind::RxStep || k == CliffordGateKind::RyStep ||
         k == CliffordGateKind::RzStep;
}

/// One Clifford gate. Rotations carry an angle_step meaning angle = step*pi/2.
struct CliffordGate {
  CliffordGateKind kind = CliffordGateKind::H;
  int q0 = 0;
  int q1 = -1;         // second qubit for Cx (target) and Swap
  int angle_step = 0;  // only meaningful for Rx/Ry/RzStep

  static CliffordGate h(int q) { return {CliffordGateKind::H, q, -1, 0}; }
  static CliffordGate s(int q) { return {CliffordGateKind::S, q, -1, 0}; }
  static CliffordGate s_dag(int q) { return {CliffordGateKind::SDag, q, -1, 0}; }
  static CliffordGate x(int q) { return {CliffordGateKind::X, q, -1, 0}; }
  static CliffordGate y(int q) { return {CliffordGateKind::Y, q, -1, 0}; }
  static CliffordGate z(int q) { return {CliffordGateKind::Z, q, -1, 0}; }
  static CliffordGate rx(int q, int step) { return {CliffordGateKind::RxStep, q, -1, step & 3}; }
  static CliffordGate ry(int q, int step) { return {CliffordGateKind::RyStep, q, -1, step & 3}; }
  static CliffordGate rz(int q, int step) { return {CliffordGateKind::RzStep, q, -1, step & 3}; }
  static CliffordGate cx(int control, int target) {
    return {CliffordGateKind::Cx, control, target, 0};
  }
  static CliffordGate swap(int a, int b) { return {CliffordGateKind::Swap, a, b, 0}; }

  void validate(int n_qubits) const {
    auto in_range = [&](int q) { return q >= 0 && q < n_qubits; };
    if (!in_range(q0)) throw std::out_of_range("gate qubit " + std::to_string(q0) + " out of range");
    if (is_two_qubit(kind)) {
      if (!in_range(q1))
        throw std::out_of_range("gate qubit " + std::to_string(q1) + " out of range");
      if (q0 == q1) throw std::invalid_argument("two-qubit gate with identical qubits");
    }
    if (is_step_rotation(kind) && (angle_step < 0 || angle_step > 3))
      throw std::invalid_argument("rotation angle_step must be in {0,1,2,3}");
  }

  /// Gate g with g_inv * g = identity (step rotations invert as 4 - step).
  CliffordGate inverse() const {
    CliffordGate g = *this;
    if (kind == CliffordGateKind::S)
      g.kind = CliffordGateKind::SDag;
    else if (kind == CliffordGateKind::SDag)
      g.kind = CliffordGateKind::S;
    else if (is_step_rotation(kind))
      g.angle_step = (4 - angle_step) & 3;
    return g;
  }
};

namespace detail {

/// Conjugation action of a single-qubit Clifford: images of X and Z as
/// single-qubit signed Paulis, packed as (x bit, z bit, sign).
struct SingleQubitCliffordMap {
  std::uint8_t xx, xz;  // image of X
  int x_sign;
  std::uint8_t zx, zz;  // image of Z
  int z_sign;
};

using C2 = std::complex<double>;
using Mat2 = std::array<C2, 4>;  // row-major 2x2

inline Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}
inline Mat2 mat2_adjoint(const Mat2& a) {
  return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])};
}

inline Mat2 pauli_mat2(int x, int z) {
  if (x && z) return {C2(0, 0), C2(0, -1), C2(0, 1), C2(0, 0)};   // Y
  if (x) return {C2(0, 0), C2(1, 0), C2(1, 0), C2(0, 0)};         // X
  if (z) return {C2(1, 0), C2(0, 0), C2(0, 0), C2(-1, 0)};        // Z
  return {C2(1, 0), C2(0, 0), C2(0, 0), C2(1, 0)};                // I
}

/// Matches m against +-{I,X,Y,Z}; aborts if m is not a signed Pauli, which
/// cannot happen for conjugations of Paulis by Clifford unitaries.
inline void match_signed_pauli(const Mat2& m, std::uint8_t& x, std::uint8_t& z, int& sign) {
  for (int xz = 0; xz < 4; ++xz) {
    Mat2 p = pauli_mat2(xz & 1, xz >> 1);
    for (int s : {+1, -1}) {
      double err = 0;
      for (int i = 0; i < 4; ++i) err += std::abs(m[i] - static_cast<double>(s) * p[i]);
      if (err < 1e-9) {
        x = static_cast<std::uint8_t>(xz & 1);
        z = static_cast<std::uint8_t>(xz >> 1);
        sign = s;
        return;
      }
    }
  }
  throw std::logic_error("conjugation result is not a signed Pauli");
}

/// Builds the conjugation map of U from a dense 2x2 computation.
inline SingleQubitCliffordMap map_from_unitary(const Mat2& u) {
  SingleQubitCliffordMap m{};
  Mat2 udag = mat2_adjoint(u);
  Mat2 ix = mat2_mul(mat2_mul(u, pauli_mat2(1, 0)), udag);
  Mat2 iz = mat2_mul(mat2_mul(u, pauli_mat2(0, 1)), udag);
  match_signed_pauli(ix, m.xx, m.xz, m.x_sign);
  match_signed_pauli(iz, m.zx, m.zz, m.z_sign);
  return m;
}

/// Conjugation maps for RX/RY/RZ at angle step*pi/2, generated once from the
/// dense oracle instead of hand-coded sign tables.
inline const SingleQubitCliffordMap& rotation_map(CliffordGateKind kind, int step) {
  static const std::array<std::array<SingleQubitCliffordMap, 4>, 3> table = [] {
    std::array<std::array<SingleQubitCliffordMap, 4>, 3> t{};
    const Mat2 axes[3] = {pauli_mat2(1, 0), pauli_mat2(1, 1), pauli_mat2(0, 1)};
    for (int a = 0; a < 3; ++a) {
      for (int s = 0; s < 4; ++s) {
        double half = s * (M_PI / 2) / 2.0;
        C2 c(std::cos(half), 0), ms(0, -std::sin(half));
        Mat2 u = {c + ms * axes[a][0], ms * axes[a][1], ms * axes[a][2], c + ms * axes[a][3]};
        t[static_cast<std::size_t>(a)][static_cast<std::size_t>(s)] = map_from_unitary(u);
      }
    }
    return t;
  }();
  int axis = kind == CliffordGateKind::RxStep ? 0 : kind == CliffordGateKind::RyStep ? 1 : 2;
  return table[static_cast<std::size_t>(axis)][static_cast<std::size_t>(step & 3)];
}

/// Applies a single-qubit Clifford map to qubit q of a signed Pauli row.
inline void apply_map_to_row(PauliString& row, int q, const SingleQubitCliffordMap& m) {
  std::uint64_t bit = std::uint64_t{1} << q;
  bool x = row.x_mask & bit;
  bool z = row.z_mask & bit;
  if (!x && !z) return;
  std::uint8_t nx, nz;
  int s;
  if (x && !z) {
    nx = m.xx, nz = m.xz, s = m.x_sign;
  } else if (!x && z) {
    nx = m.zx, nz = m.zz, s = m.z_sign;
  } else {
    // Y = iXZ: image = i * image(X) * image(Z), Hermitian by Eq-closure.
    PauliString a(1, m.xx, m.xz, m.x_sign), b(1, m.zx, m.zz, m.z_sign), out;
    int e = (1 + detail::mul_log_i(a, b, out)) & 3;
    assert((e & 1) == 0);
    nx = static_cast<std::uint8_t>(out.x_mask);
    nz = static_cast<std::uint8_t>(out.z_mask);
    s = (e == 0) ? +1 : -1;
  }
  row.x_mask = (row.x_mask & ~bit) | (nx ? bit : 0);
  row.z_mask = (row.z_mask & ~bit) | (nz ? bit : 0);
  row.sign *= s;
}

}  // namespace detail

/// In-place conjugation of a signed Pauli row by a single Clifford gate:
/// row -> g * row * g^dagger.
inline void conjugate_row_by_gate(PauliString& row, const CliffordGate& g) {
  std::uint64_t b0 = std::uint64_t{1} << g.q0;
  switch (g.kind) {
    case CliffordGateKind::H: {
      bool x = row.x_mask & b0, z = row.z_mask & b0;
      if (x && z) row.sign = -row.sign;  // Y -> -Y
      row.x_mask = (row.x_mask & ~b0) | (z ? b0 : 0);
      row.z_mask = (row.z_mask & ~b0) | (x ? b0 : 0);
      break;
    }
    case CliffordGateKind::S: {
      bool x = row.x_mask & b0, z = row.z_mask & b0;
      if (x && z) row.sign = -row.sign;  // Y -> -X
      row.z_mask ^= x ? b0 : 0;
      break;
    }
    case CliffordGateKind::SDag: {
      bool x = row.x_mask & b0, z = row.z_mask & b0;
      if (x && !z) row.sign = -row.sign;  // X -> -Y
      row.z_mask ^= x ? b0 : 0;
      break;
    }
    case CliffordGateKind::X:
      if (row.z_mask & b0) row.sign = -row.sign;
      break;
    case CliffordGateKind::Y:
      if (((row.x_mask ^ row.z_mask) & b0) != 0) row.sign = -row.sign;
      break;
    case CliffordGateKind::Z:
      if (row.x_mask & b0) row.sign = -row.sign;
      break;
    case CliffordGateKind::RxStep:
    case CliffordGateKind::RyStep:
    case CliffordGateKind::RzStep:
      detail::apply_map_to_row(row, g.q0, detail::rotation_map(g.kind, g.angle_step));
      break;
    case CliffordGateKind::Cx: {
      std::uint64_t bc = b0, bt = std::uint64_t{1} << g.q1;
      bool xc = row.x_mask & bc, zc = row.z_mask & bc;
      bool xt = row.x_mask & bt, zt = row.z_mask & bt;
      if (xc && zt && (xt == zc)) row.sign = -row.sign;
      row.x_mask ^= xc ? bt : 0;
      row.z_mask ^= zt ? bc : 0;
      break;
    }
    case CliffordGateKind::Swap: {
      std::uint64_t ba = b0, bb = std::uint64_t{1} << g.q1;
      bool xa = row.x_mask & ba, za = row.z_mask & ba;
      bool xb = row.x_mask & bb, zb = row.z_mask & bb;
      row.x_mask = (row.x_mask & ~(ba | bb)) | (xb ? ba : 0) | (xa ? bb : 0);
      row.z_mask = (row.z_mask & ~(ba | bb)) | (zb ? ba : 0) | (za ? bb : 0);
      break;
    }
  }
}

/// Symplectic map recording the conjugation images of all X_k, Z_k generators
/// under a Clifford unitary C: x_images[k] = C X_k C^dag, z_images[k] = C Z_k C^dag.
class CliffordTableau {
 public:
  explicit CliffordTableau(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
      throw std::invalid_argument("CliffordTableau: n_qubits out of range");
    x_images_.reserve(static_cast<std::size_t>(n_qubits));
    z_images_.reserve(static_cast<std::size_t>(n_qubits));
    for (int k = 0; k < n_qubits; ++k) {
      x_images_.emplace_back(n_qubits, std::uint64_t{1} << k, 0, +1);
      z_images_.emplace_back(n_qubits, 0, std::uint64_t{1} << k, +1);
    }
  }

  int n_qubits() const { return n_qubits_; }
  const PauliString& x_image(int k) const { return x_images_[static_cast<std::size_t>(k)]; }
  const PauliString& z_image(int k) const { return z_images_[static_cast<std::size_t>(k)]; }

  bool is_identity() const {
    for (int k = 0; k < n_qubits_; ++k) {
      if (x_image(k) != PauliString(n_qubits_, std::uint64_t{1} << k, 0, +1)) return false;
      if (z_image(k) != PauliString(n_qubits_, 0, std::uint64_t{1} << k, +1)) return false;
    }
    return true;
  }

  /// Composes this tableau with one more gate applied after the current
  /// circuit, i.e. C -> g * C.
  void append(const CliffordGate& g) {
    g.validate(n_qubits_);
    for (auto& row : x_images_) conjugate_row_by_gate(row, g);
    for (auto& row : z_images_) conjugate_row_by_gate(row, g);
  }

  /// C P C^dagger with full sign bookkeeping.
  PauliString conjugate(const PauliString& p) const {
    if (p.n_qubits != n_qubits_)
      throw std::invalid_argument("conjugate: width mismatch");
    // P = sign * i^{#Y} * prod_k X_k^{x_k} * prod_k Z_k^{z_k}; conjugation is
    // a homomorphism, so substitute generator images and track phases.
    PauliString acc(n_qubits_);
    int e = std::popcount(p.x_mask & p.z_mask) & 3;
    if (p.sign < 0) e += 2;
    PauliString tmp;
    for (std::uint64_t rest = p.x_mask; rest != 0; rest &= rest - 1) {
      int k = std::countr_zero(rest);
      e += detail::mul_log_i(acc, x_images_[static_cast<std::size_t>(k)], tmp);
      acc = tmp;
    }
    for (std::uint64_t rest = p.z_mask; rest != 0; rest &= rest - 1) {
      int k = std::countr_zero(rest);
      e += detail::mul_log_i(acc, z_images_[static_cast<std::size_t>(k)], tmp);
      acc = tmp;
    }
    e &= 3;
    if (e & 1) throw std::logic_error("conjugate: tableau is not symplectic (odd phase)");
    acc.sign = (e == 0) ? +1 : -1;
    return acc;
  }

  /// C^dagger P C, the transformation direction used on Hamiltonians.
  PauliString anticonjugate(const PauliString& p) const { return inverse().conjugate(p); }

  /// Tableau of C^dagger, computed from the symplectic structure rather than
  /// a gate list so tableaus from any source are invertible.
  CliffordTableau inverse() const {
    int n = n_qubits_;
    CliffordTableau inv(n);
    // Unsigned part: the binary symplectic inverse is Lambda M^T Lambda,
    // where Lambda swaps the X and Z halves.
    for (int k = 0; k < n; ++k) {
      std::uint64_t ix = 0, iz = 0, jx = 0, jz = 0;
      for (int j = 0; j < n; ++j) {
        const auto& xj = x_images_[static_cast<std::size_t>(j)];
        const auto& zj = z_images_[static_cast<std::size_t>(j)];
        ix |= ((zj.z_mask >> k) & 1) << j;
        iz |= ((xj.z_mask >> k) & 1) << j;
        jx |= ((zj.x_mask >> k) & 1) << j;
        jz |= ((xj.x_mask >> k) & 1) << j;
      }
      inv.x_images_[static_cast<std::size_t>(k)] = PauliString(n, ix, iz, +1);
      inv.z_images_[static_cast<std::size_t>(k)] = PauliString(n, jx, jz, +1);
    }
    // Sign fix: require conjugate(inv_image(X_k)) == +X_k (same for Z_k).
    for (int k = 0; k < n; ++k) {
      PauliString cx = conjugate(inv.x_images_[static_cast<std::size_t>(k)]);
      if (cx.x_mask != (std::uint64_t{1} << k) || cx.z_mask != 0)
        throw std::logic_error("inverse: tableau is not symplectic");
      inv.x_images_[static_cast<std::size_t>(k)].sign = cx.sign;
      PauliString cz = conjugate(inv.z_images_[static_cast<std::size_t>(k)]);
      if (cz.z_mask != (std::uint64_t{1} << k) || cz.x_mask != 0)
        throw std::logic_error("inverse: tableau is not symplectic");
      inv.z_images_[static_cast<std::size_t>(k)].sign = cz.sign;
    }
    return inv;
  }

  /// Tableau of (other * this): `other` acts after this tableau's circuit.
  CliffordTableau then(const CliffordTableau& other) const {
    if (other.n_qubits_ != n_qubits_)
      throw std::invalid_argument("tableau composition: width mismatch");
    CliffordTableau out(n_qubits_);
    for (int k = 0; k < n_qubits_; ++k) {
      out.x_images_[static_cast<std::size_t>(k)] =
          other.conjugate(x_images_[static_cast<std::size_t>(k)]);
      out.z_images_[static_cast<std::size_t>(k)] =
          other.conjugate(z_images_[static_cast<std::size_t>(k)]);
    }
    return out;
  }

  /// Debug text, one line per generator: "X0 -> +XX".
  std::string debug_str() const {
    std::string out;
    for (int k = 0; k < n_qubits_; ++k)
      out += "X" + std::to_string(k) + " -> " + x_image(k).str() + "\n";
    for (int k = 0; k < n_qubits_; ++k)
      out += "Z" + std::to_string(k) + " -> " + z_image(k).str() + "\n";
    return out;
  }

  bool operator==(const CliffordTableau& other) const {
    return n_qubits_ == other.n_qubits_ && x_images_ == other.x_images_ &&
           z_images_ == other.z_images_;
  }

 private:
  int n_qubits_;
  std::vector<PauliString> x_images_;
  std::vector<PauliString> z_images_;
};

/// Tableau of the composition of `gates` applied in circuit order.
inline CliffordTableau tableau_from_gates(const std::vector<CliffordGate>& gates, int n_qubits) {
  CliffordTableau t(n_qubits);
  for (const auto& g : gates) t.append(g);
  return t;
}

/// Anticonjugates every term through the tableau, folds the resulting signs
/// into the coefficients and merges equal strings.
inline Hamiltonian transform_hamiltonian(const Hamiltonian& h, const CliffordTableau& t) {
  if (h.n_qubits() != t.n_qubits())
    throw std::invalid_argument("transform_hamiltonian: width mismatch");
  CliffordTableau inv = t.inverse();
  Hamiltonian out(h.n_qubits());
  for (const auto& term : h.terms()) out.add_term(term.coefficient, inv.conjugate(term.pauli));
  out.finalize();
  return out;
}

}  // namespace clapton

#endif  // CLAPTON_CLIFFORD_HPP_
