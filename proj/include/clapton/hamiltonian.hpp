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

#ifndef CLAPTON_HAMILTONIAN_HPP_
#define CLAPTON_HAMILTONIAN_HPP_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clapton/pauli.hpp"

namespace clapton {

struct HamiltonianTerm {
  double coefficient = 0.0;
  PauliString pauli;  // sign is always +1 inside a Hamiltonian
};

/// Weighted sum of unsigned Pauli strings with real coefficients.
///
/// Construction folds Pauli signs into coefficients, merges terms with equal
/// letter masks (first-occurrence order) and drops terms whose merged
/// coefficient vanishes below 1e-15.
class Hamiltonian {
 public:
  static constexpr double kMergeTolerance = 1e-15;

  explicit Hamiltonian(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
      throw std::invalid_argument("Hamiltonian: n_qubits out of range");
  }

  Hamiltonian(int n_qubits, const std::vector<std::pair<double, PauliString>>& terms)
      : Hamiltonian(n_qubits) {
    for (const auto& [c, p] : terms) add_term(c, p);
    finalize();
  }

  int n_qubits() const { return n_qubits_; }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Folds the Pauli sign into the coefficient and merges with any existing
  /// term carrying the same letters. Call finalize() once done adding.
  void add_term(double coefficient, const PauliString& p) {
    if (p.n_qubits != n_qubits_)
      throw std::invalid_argument("Hamiltonian: term width mismatch");
    double c = coefficient * p.sign;
    std::uint64_t key_x = p.x_mask, key_z = p.z_mask;
    auto it = index_.find(key(key_x, key_z));
    if (it != index_.end()) {
      terms_[it->second].coefficient += c;
    } else {
      index_.emplace(key(key_x, key_z), terms_.size());
      terms_.push_back({c, PauliString(n_qubits_, key_x, key_z, +1)});
    }
  }

  /// Drops merged terms with |coefficient| <= 1e-15 while keeping order.
  void finalize() {
    std::vector<HamiltonianTerm> kept;
    kept.reserve(terms_.size());
    for (auto& t : terms_)
      if (std::abs(t.coefficient) > kMergeTolerance) kept.push_back(t);
    terms_ = std::move(kept);
    index_.clear();
    for (std::size_t i = 0; i < terms_.size(); ++i)
      index_.emplace(key(terms_[i].pauli.x_mask, terms_[i].pauli.z_mask), i);
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.first * 0x9e3779b97f4a7c15ull ^ k.second);
    }
  };
  static std::pair<std::uint64_t, std::uint64_t> key(std::uint64_t x, std::uint64_t z) {
    return {x, z};
  }

  int n_qubits_;
  std::vector<HamiltonianTerm> terms_;
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, std::size_t, KeyHash> index_;
};

/// Text format: first non-comment line is n_qubits, then one
/// "<coefficient> <pauli-letters>" per line. '#' starts a comment.
inline Hamiltonian hamiltonian_from_stream(std::istream& in, const std::string& origin) {
  auto fail = [&](int line_no, const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + what);
  };
  int line_no = 0;
  int n_qubits = -1;
  std::vector<std::pair<double, PauliString>> terms;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    if (n_qubits < 0) {
      if (!(ls >> n_qubits)) {
        n_qubits = -1;
        continue;  // blank or comment-only line before the header
      }
      if (n_qubits < 1 || n_qubits > kMaxQubits) fail(line_no, "invalid n_qubits header");
      continue;
    }
    double coeff;
    std::string letters;
    if (!(ls >> coeff)) {
      std::string rest;
      if (ls.clear(), ls >> rest) fail(line_no, "malformed coefficient");
      continue;  // blank line
    }
    if (!(ls >> letters)) fail(line_no, "missing Pauli letters");
    std::string extra;
    if (ls >> extra) fail(line_no, "trailing content '" + extra + "'");
    try {
      terms.emplace_back(coeff, parse_pauli(letters, n_qubits));
    } catch (const std::exception& e) {
      fail(line_no, e.what());
    }
  }
  if (n_qubits < 0) throw std::runtime_error(origin + ": missing n_qubits header");
  if (terms.empty()) throw std::runtime_error(origin + ": no terms");
  return Hamiltonian(n_qubits, terms);
}

inline Hamiltonian hamiltonian_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open Hamiltonian file: " + path);
  return hamiltonian_from_stream(in, path);
}

inline void hamiltonian_to_stream(const Hamiltonian& h, std::ostream& out) {
  out << h.n_qubits() << "\n";
  out << std::setprecision(17);
  for (const auto& t : h.terms()) {
    std::string s = t.pauli.str();
    out << t.coefficient << " " << s.substr(1) << "\n";  // terms are sign-free
  }
}

inline void hamiltonian_to_file(const Hamiltonian& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write Hamiltonian file: " + path);
  hamiltonian_to_stream(h, out);
  if (!out) throw std::runtime_error("I/O error writing Hamiltonian file: " + path);
}

}  // namespace clapton

#endif  // CLAPTON_HAMILTONIAN_HPP_
