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

#ifndef CLAPTON_PAULI_HPP_
#define CLAPTON_PAULI_HPP_

#include <bit>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace clapton {

/// Widest operator supported by the bit-packed representation.
inline constexpr int kMaxQubits = 64;

/// Signed N-qubit Pauli operator, stored as X/Z bitmasks plus a +-1 sign.
///
/// Bit k of each mask corresponds to qubit k; qubit 0 is the leftmost letter
/// in the text form. Per-qubit letters decode as (x,z): (0,0)=I, (1,0)=X,
/// (1,1)=Y, (0,1)=Z, with Y denoting the Hermitian Pauli (Y = iXZ).
struct PauliString {
  int n_qubits = 0;
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  int sign = +1;

  PauliString() = default;

  /// Identity on n qubits.
  explicit PauliString(int n) : n_qubits(n) { check_width(n); }

  PauliString(int n, std::uint64_t x, std::uint64_t z, int s = +1)
      : n_qubits(n), x_mask(x), z_mask(z), sign(s) {
    check_width(n);
    if (s != +1 && s != -1) throw std::invalid_argument("Pauli sign must be +1 or -1");
    std::uint64_t valid = mask_for(n);
    if ((x & ~valid) != 0 || (z & ~valid) != 0)
      throw std::invalid_argument("Pauli mask has bits beyond n_qubits");
  }

  static std::uint64_t mask_for(int n) {
    return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  }

  bool is_identity() const { return x_mask == 0 && z_mask == 0; }

  /// Letter at qubit k as one of 'I', 'X', 'Y', 'Z'.
  char letter(int k) const {
    int x = static_cast<int>((x_mask >> k) & 1);
    int z = static_cast<int>((z_mask >> k) & 1);
    return "IXZY"[x | (z << 1)];
  }

  /// Number of non-identity positions.
  int weight() const { return std::popcount(x_mask | z_mask); }

  /// True if this operator commutes with `other` (signs are irrelevant).
  bool commutes_with(const PauliString& other) const {
    int anti = std::popcount(x_mask & other.z_mask) + std::popcount(z_mask & other.x_mask);
    return (anti & 1) == 0;
  }

  bool same_letters(const PauliString& other) const {
    return n_qubits == other.n_qubits && x_mask == other.x_mask && z_mask == other.z_mask;
  }

  bool operator==(const PauliString& other) const {
    return same_letters(other) && sign == other.sign;
  }
  bool operator!=(const PauliString& other) const { return !(*this == other); }

  std::string str() const {
    std::string out;
    out.reserve(static_cast<std::size_t>(n_qubits) + 1);
    out.push_back(sign < 0 ? '-' : '+');
    for (int k = 0; k < n_qubits; ++k) {
      bool x = (x_mask >> k) & 1;
      bool z = (z_mask >> k) & 1;
      out.push_back(x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I'));
    }
    return out;
  }

 private:
  static void check_width(int n) {
    if (n < 1 || n > kMaxQubits)
      throw std::invalid_argument("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
  }
};

inline std::ostream& operator<<(std::ostream& os, const PauliString& p) { return os << p.str(); }

/// Parses an optional leading '+'/'-' followed by exactly n_qubits letters
/// from {I,X,Y,Z}. Throws with the offending position on bad characters and a
/// distinct message on length mismatch.
inline PauliString parse_pauli(const std::string& text, int n_qubits) {
  std::size_t pos = 0;
  int sign = +1;
  if (!text.empty() && (text[0] == '+' || text[0] == '-')) {
    sign = text[0] == '-' ? -1 : +1;
    pos = 1;
  }
  if (text.size() - pos != static_cast<std::size_t>(n_qubits)) {
    throw std::invalid_argument("Pauli string '" + text + "' has " +
                                std::to_string(text.size() - pos) + " letters, expected " +
                                std::to_string(n_qubits));
  }
  std::uint64_t x = 0, z = 0;
  for (int k = 0; k < n_qubits; ++k) {
    switch (text[pos + static_cast<std::size_t>(k)]) {
      case 'I': break;
      case 'X': x |= std::uint64_t{1} << k; break;
      case 'Y': x |= std::uint64_t{1} << k; z |= std::uint64_t{1} << k; break;
      case 'Z': z |= std::uint64_t{1} << k; break;
      default:
        throw std::invalid_argument("invalid Pauli character '" +
                                    std::string(1, text[pos + static_cast<std::size_t>(k)]) +
                                    "' at position " + std::to_string(pos + k));
    }
  }
  return PauliString(n_qubits, x, z, sign);
}

inline int pauli_weight(const PauliString& p) { return p.weight(); }

namespace detail {

/// Multiplies two Pauli letter strings, ignoring their stored signs.
/// Returns the exponent e (mod 4) such that letters(a) * letters(b) =
/// i^e * letters(result). The result is written into `out` with sign +1.
inline int mul_letters_log_i(const PauliString& a, const PauliString& b, PauliString& out) {
  std::uint64_t ax = a.x_mask, az = a.z_mask, bx = b.x_mask, bz = b.z_mask;
  std::uint64_t a_is_x = ax & ~az, a_is_y = ax & az, a_is_z = az & ~ax;
  std::uint64_t b_is_x = bx & ~bz, b_is_y = bx & bz, b_is_z = bz & ~bx;
  // XY=iZ, YZ=iX, ZX=iY contribute +1; the transposes contribute -1.
  std::uint64_t plus = (a_is_x & b_is_y) | (a_is_y & b_is_z) | (a_is_z & b_is_x);
  std::uint64_t minus = (a_is_y & b_is_x) | (a_is_z & b_is_y) | (a_is_x & b_is_z);
  out.n_qubits = a.n_qubits;
  out.x_mask = ax ^ bx;
  out.z_mask = az ^ bz;
  out.sign = +1;
  return (std::popcount(plus) - std::popcount(minus)) & 3;
}

/// Full signed product: a * b = i^e * out, with signs of a and b folded in.
inline int mul_log_i(const PauliString& a, const PauliString& b, PauliString& out) {
  int e = mul_letters_log_i(a, b, out);
  if (a.sign < 0) e += 2;
  if (b.sign < 0) e += 2;
  return e & 3;
}

}  // namespace detail

/// Product of two Pauli strings. The callers in this library only multiply
/// pairs whose product is Hermitian; a +-i overall phase therefore signals a
/// logic bug upstream and is rejected.
inline PauliString pauli_multiply(const PauliString& a, const PauliString& b) {
  if (a.n_qubits != b.n_qubits)
    throw std::invalid_argument("pauli_multiply: width mismatch (" + std::to_string(a.n_qubits) +
                                " vs " + std::to_string(b.n_qubits) + ")");
  PauliString out;
  int e = detail::mul_log_i(a, b, out);
  if (e & 1)
    throw std::domain_error("pauli_multiply: product " + a.str() + " * " + b.str() +
                            " has phase +-i");
  out.sign = (e == 0) ? +1 : -1;
  return out;
}

/// <0...0| P |0...0>: sign if P contains only I/Z letters, else 0.
inline double zero_state_expectation(const PauliString& p) {
  return p.x_mask == 0 ? static_cast<double>(p.sign) : 0.0;
}

}  // namespace clapton

#endif  // CLAPTON_PAULI_HPP_
