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

#ifndef CLAPTON_CIRCUIT_HPP_
#define CLAPTON_CIRCUIT_HPP_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "clapton/clifford.hpp"
#include "clapton/noise_model.hpp"
#include "clapton/pauli.hpp"

namespace clapton {

enum class GateKind { Rx, Ry, Rz, H, S, SDag, X, Y, Z, Cx, Swap };

inline bool is_two_qubit(GateKind k) { return k == GateKind::Cx || k == GateKind::Swap; }
inline bool is_rotation(GateKind k) {
  return k == GateKind::Rx || k == GateKind::Ry || k == GateKind::Rz;
}

inline const char* gate_name(GateKind k) {
  switch (k) {
    case GateKind::Rx: return "RX";
    case GateKind::Ry: return "RY";
    case GateKind::Rz: return "RZ";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::SDag: return "SDG";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::Cx: return "CX";
    case GateKind::Swap: return "SWAP";
  }
  return "?";
}

struct Gate {
  GateKind kind;
  int q0 = 0;
  int q1 = -1;         // control/target ordering for Cx: q0 -> q1
  double angle = 0.0;  // radians; meaningful for rotations only
};

struct Depolarize1 {
  int qubit;
  double p;
};
struct Depolarize2 {
  int qubit_a, qubit_b;
  double p;
};
struct ReadoutFlip {
  int qubit;
  double p;
};
struct Measure {
  int qubit;
};

using CircuitOp = std::variant<Gate, Depolarize1, Depolarize2, ReadoutFlip, Measure>;

/// Ordered gate/noise-channel/measurement program over n_qubits. Measurements
/// may only appear after all gates.
struct Circuit {
  int n_qubits = 0;
  std::vector<CircuitOp> ops;

  Circuit() = default;
  explicit Circuit(int n) : n_qubits(n) {}

  void push(const CircuitOp& op) { ops.push_back(op); }

  std::size_t gate_count() const {
    std::size_t c = 0;
    for (const auto& op : ops)
      if (std::holds_alternative<Gate>(op)) ++c;
    return c;
  }

  void validate() const {
    auto check_q = [&](int q) {
      if (q < 0 || q >= n_qubits)
        throw std::out_of_range("circuit qubit " + std::to_string(q) + " out of range");
    };
    bool seen_measure = false;
    for (const auto& op : ops) {
      if (const auto* g = std::get_if<Gate>(&op)) {
        check_q(g->q0);
        if (is_two_qubit(g->kind)) {
          check_q(g->q1);
          if (g->q0 == g->q1) throw std::invalid_argument("two-qubit gate with identical qubits");
        }
        if (seen_measure) throw std::invalid_argument("gate after measurement");
      } else if (const auto* d = std::get_if<Depolarize1>(&op)) {
        check_q(d->qubit);
        check_prob(d->p);
      } else if (const auto* d2 = std::get_if<Depolarize2>(&op)) {
        check_q(d2->qubit_a);
        check_q(d2->qubit_b);
        if (d2->qubit_a == d2->qubit_b)
          throw std::invalid_argument("Depolarize2 qubits must be distinct");
        check_prob(d2->p);
      } else if (const auto* r = std::get_if<ReadoutFlip>(&op)) {
        check_q(r->qubit);
        check_prob(r->p);
      } else if (const auto* m = std::get_if<Measure>(&op)) {
        check_q(m->qubit);
        seen_measure = true;
      }
    }
  }

 private:
  static void check_prob(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("channel probability not in [0, 1]");
  }
};

/// Maps an angle to its Clifford quarter-turn step if it is one (mod 2pi).
inline std::optional<int> clifford_angle_step(double angle, double tol = 1e-9) {
  double turns = angle / (M_PI / 2);
  double rounded = std::round(turns);
  if (std::abs(turns - rounded) > tol) return std::nullopt;
  int step = static_cast<int>(std::llround(rounded)) % 4;
  return step < 0 ? step + 4 : step;
}

/// Converts a gate to its Clifford action; throws if the angle is not a
/// multiple of pi/2.
inline CliffordGate to_clifford_gate(const Gate& g) {
  switch (g.kind) {
    case GateKind::H: return CliffordGate::h(g.q0);
    case GateKind::S: return CliffordGate::s(g.q0);
    case GateKind::SDag: return CliffordGate::s_dag(g.q0);
    case GateKind::X: return CliffordGate::x(g.q0);
    case GateKind::Y: return CliffordGate::y(g.q0);
    case GateKind::Z: return CliffordGate::z(g.q0);
    case GateKind::Cx: return CliffordGate::cx(g.q0, g.q1);
    case GateKind::Swap: return CliffordGate::swap(g.q0, g.q1);
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz: {
      auto step = clifford_angle_step(g.angle);
      if (!step)
        throw std::invalid_argument("non-Clifford rotation angle " + std::to_string(g.angle));
      if (g.kind == GateKind::Rx) return CliffordGate::rx(g.q0, *step);
      if (g.kind == GateKind::Ry) return CliffordGate::ry(g.q0, *step);
      return CliffordGate::rz(g.q0, *step);
    }
  }
  throw std::logic_error("unreachable gate kind");
}

/// Lowers a Clifford gate into a plain circuit gate (steps become angles).
inline Gate to_circuit_gate(const CliffordGate& g) {
  switch (g.kind) {
    case CliffordGateKind::H: return {GateKind::H, g.q0, -1, 0};
    case CliffordGateKind::S: return {GateKind::S, g.q0, -1, 0};
    case CliffordGateKind::SDag: return {GateKind::SDag, g.q0, -1, 0};
    case CliffordGateKind::X: return {GateKind::X, g.q0, -1, 0};
    case CliffordGateKind::Y: return {GateKind::Y, g.q0, -1, 0};
    case CliffordGateKind::Z: return {GateKind::Z, g.q0, -1, 0};
    case CliffordGateKind::RxStep: return {GateKind::Rx, g.q0, -1, g.angle_step * (M_PI / 2)};
    case CliffordGateKind::RyStep: return {GateKind::Ry, g.q0, -1, g.angle_step * (M_PI / 2)};
    case CliffordGateKind::RzStep: return {GateKind::Rz, g.q0, -1, g.angle_step * (M_PI / 2)};
    case CliffordGateKind::Cx: return {GateKind::Cx, g.q0, g.q1, 0};
    case CliffordGateKind::Swap: return {GateKind::Swap, g.q0, g.q1, 0};
  }
  throw std::logic_error("unreachable gate kind");
}

enum class Topology { Line, Ring };

/// Entangling-slot pairs: slot i couples (i, i+1 mod N) on a ring and
/// (i, i+1) on a line. A ring on two qubits has both directed edges.
inline std::vector<std::pair<int, int>> entangling_pairs(int n_qubits, Topology topology) {
  std::vector<std::pair<int, int>> pairs;
  if (n_qubits < 2) return pairs;
  int slots = topology == Topology::Ring ? n_qubits : n_qubits - 1;
  for (int i = 0; i < slots; ++i) pairs.emplace_back(i, (i + 1) % n_qubits);
  return pairs;
}

/// Rotation parameters of the VQE ansatz; length must be 4N.
struct AnsatzParams {
  std::vector<double> theta;
};

/// Transformation ansatz parameters; each gene selects one of four rotation
/// steps or one of four two-qubit gate choices. Length is 4N plus one gene
/// per entangling slot (5N on a ring).
struct TransformParams {
  std::vector<int> gamma;
};

inline std::size_t transform_param_count(int n_qubits, Topology topology = Topology::Ring) {
  return 4 * static_cast<std::size_t>(n_qubits) + entangling_pairs(n_qubits, topology).size();
}

/// Hardware-efficient VQE ansatz A(theta): RY layer, RZ layer, CX chain over
/// the topology (low -> high index), RY layer, RZ layer.
inline Circuit build_vqe_ansatz(int n_qubits, const AnsatzParams& params, Topology topology) {
  if (params.theta.size() != 4 * static_cast<std::size_t>(n_qubits))
    throw std::invalid_argument("AnsatzParams must have length 4N = " +
                                std::to_string(4 * n_qubits) + ", got " +
                                std::to_string(params.theta.size()));
  Circuit c(n_qubits);
  std::size_t p = 0;
  auto rotation_layer = [&](GateKind kind) {
    for (int q = 0; q < n_qubits; ++q) c.push(Gate{kind, q, -1, params.theta[p++]});
  };
  rotation_layer(GateKind::Ry);
  rotation_layer(GateKind::Rz);
  for (auto [a, b] : entangling_pairs(n_qubits, topology)) c.push(Gate{GateKind::Cx, a, b, 0});
  rotation_layer(GateKind::Ry);
  rotation_layer(GateKind::Rz);
  c.validate();
  return c;
}

/// Transformation ansatz C(gamma): the VQE ansatz layout with quarter-turn
/// rotations and per-slot two-qubit gate choices
/// 0 -> identity, 1 -> CX(k->l), 2 -> CX(l->k), 3 -> SWAP.
inline std::vector<CliffordGate> build_transform_circuit(int n_qubits,
                                                         const TransformParams& params,
                                                         Topology topology = Topology::Ring) {
  auto pairs = entangling_pairs(n_qubits, topology);
  std::size_t expected = 4 * static_cast<std::size_t>(n_qubits) + pairs.size();
  if (params.gamma.size() != expected)
    throw std::invalid_argument("TransformParams must have length " + std::to_string(expected) +
                                ", got " + std::to_string(params.gamma.size()));
  for (std::size_t i = 0; i < params.gamma.size(); ++i)
    if (params.gamma[i] < 0 || params.gamma[i] > 3)
      throw std::invalid_argument("TransformParams entry " + std::to_string(i) +
                                  " out of range {0,1,2,3}");
  std::vector<CliffordGate> gates;
  gates.reserve(params.gamma.size());
  std::size_t p = 0;
  auto rotation_layer = [&](CliffordGateKind kind) {
    for (int q = 0; q < n_qubits; ++q)
      gates.push_back({kind, q, -1, params.gamma[p++]});
  };
  rotation_layer(CliffordGateKind::RyStep);
  rotation_layer(CliffordGateKind::RzStep);
  for (auto [k, l] : pairs) {
    switch (params.gamma[p++]) {
      case 0: break;
      case 1: gates.push_back(CliffordGate::cx(k, l)); break;
      case 2: gates.push_back(CliffordGate::cx(l, k)); break;
      case 3: gates.push_back(CliffordGate::swap(k, l)); break;
    }
  }
  rotation_layer(CliffordGateKind::RyStep);
  rotation_layer(CliffordGateKind::RzStep);
  return gates;
}

/// Inserts one depolarizing channel after every gate: Depolarize1(p1) after
/// single-qubit gates, Depolarize2(p2) after two-qubit gates.
inline Circuit apply_gate_noise(const Circuit& c, const NoiseModel& nm) {
  Circuit out(c.n_qubits);
  out.ops.reserve(c.ops.size() * 2);
  for (const auto& op : c.ops) {
    out.push(op);
    if (const auto* g = std::get_if<Gate>(&op)) {
      if (is_two_qubit(g->kind)) {
        out.push(Depolarize2{g->q0, g->q1, nm.p2(g->q0, g->q1)});
      } else {
        out.push(Depolarize1{g->q0, nm.p1(g->q0)});
      }
    }
  }
  return out;
}

/// Appends the measurement of `observable` to the circuit: per support qubit
/// the basis change (X: H; Y: S_dag then H; Z: none), then a readout flip and
/// a measurement. Basis-change gates receive depolarizing noise like any gate.
inline Circuit append_measurement(const Circuit& c, const PauliString& observable,
                                  const NoiseModel& nm) {
  if (observable.n_qubits != c.n_qubits)
    throw std::invalid_argument("append_measurement: width mismatch");
  Circuit out = c;
  for (int q = 0; q < c.n_qubits; ++q) {
    bool x = (observable.x_mask >> q) & 1;
    bool z = (observable.z_mask >> q) & 1;
    if (x && z) {
      out.push(Gate{GateKind::SDag, q, -1, 0});
      out.push(Depolarize1{q, nm.p1(q)});
      out.push(Gate{GateKind::H, q, -1, 0});
      out.push(Depolarize1{q, nm.p1(q)});
    } else if (x) {
      out.push(Gate{GateKind::H, q, -1, 0});
      out.push(Depolarize1{q, nm.p1(q)});
    }
  }
  for (int q = 0; q < c.n_qubits; ++q) {
    if (((observable.x_mask | observable.z_mask) >> q) & 1) {
      out.push(ReadoutFlip{q, nm.p_meas(q)});
      out.push(Measure{q});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Circuit text format: one op per line, "<OPNAME> <qubits...> [arg]".
// ---------------------------------------------------------------------------

inline void circuit_to_stream(const Circuit& c, std::ostream& out) {
  out << std::setprecision(17);
  out << "QUBITS " << c.n_qubits << "\n";
  for (const auto& op : c.ops) {
    if (const auto* g = std::get_if<Gate>(&op)) {
      out << gate_name(g->kind) << " " << g->q0;
      if (is_two_qubit(g->kind)) out << " " << g->q1;
      if (is_rotation(g->kind)) out << " " << g->angle;
      out << "\n";
    } else if (const auto* d = std::get_if<Depolarize1>(&op)) {
      out << "DEPOLARIZE1 " << d->qubit << " " << d->p << "\n";
    } else if (const auto* d2 = std::get_if<Depolarize2>(&op)) {
      out << "DEPOLARIZE2 " << d2->qubit_a << " " << d2->qubit_b << " " << d2->p << "\n";
    } else if (const auto* r = std::get_if<ReadoutFlip>(&op)) {
      out << "READOUT_FLIP " << r->qubit << " " << r->p << "\n";
    } else if (const auto* m = std::get_if<Measure>(&op)) {
      out << "MEASURE " << m->qubit << "\n";
    }
  }
}

inline void circuit_to_file(const Circuit& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write circuit file: " + path);
  circuit_to_stream(c, out);
}

inline Circuit circuit_from_stream(std::istream& in, const std::string& origin) {
  auto fail = [&](int line_no, const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + what);
  };
  Circuit c;
  bool saw_header = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) continue;
    if (!saw_header) {
      if (name != "QUBITS") fail(line_no, "expected 'QUBITS <n>' header");
      if (!(ls >> c.n_qubits) || c.n_qubits < 1) fail(line_no, "invalid qubit count");
      saw_header = true;
      continue;
    }
    auto read_int = [&]() {
      int v;
      if (!(ls >> v)) fail(line_no, "missing qubit index");
      return v;
    };
    auto read_double = [&](const char* what) {
      double v;
      if (!(ls >> v)) fail(line_no, std::string("missing ") + what);
      return v;
    };
    if (name == "RX" || name == "RY" || name == "RZ") {
      GateKind k = name == "RX" ? GateKind::Rx : name == "RY" ? GateKind::Ry : GateKind::Rz;
      int q = read_int();
      double a = read_double("angle");
      c.push(Gate{k, q, -1, a});
    } else if (name == "H" || name == "S" || name == "SDG" || name == "X" || name == "Y" ||
               name == "Z") {
      GateKind k = name == "H"   ? GateKind::H
                   : name == "S" ? GateKind::S
                   : name == "SDG" ? GateKind::SDag
                   : name == "X" ? GateKind::X
                   : name == "Y" ? GateKind::Y
                                 : GateKind::Z;
      c.push(Gate{k, read_int(), -1, 0});
    } else if (name == "CX" || name == "SWAP") {
      int a = read_int(), b = read_int();
      c.push(Gate{name == "CX" ? GateKind::Cx : GateKind::Swap, a, b, 0});
    } else if (name == "DEPOLARIZE1") {
      int q = read_int();
      c.push(Depolarize1{q, read_double("probability")});
    } else if (name == "DEPOLARIZE2") {
      int a = read_int(), b = read_int();
      c.push(Depolarize2{a, b, read_double("probability")});
    } else if (name == "READOUT_FLIP") {
      int q = read_int();
      c.push(ReadoutFlip{q, read_double("probability")});
    } else if (name == "MEASURE") {
      c.push(Measure{read_int()});
    } else {
      fail(line_no, "unknown op '" + name + "'");
    }
  }
  if (!saw_header) throw std::runtime_error(origin + ": missing QUBITS header");
  try {
    c.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  return c;
}

inline Circuit circuit_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open circuit file: " + path);
  return circuit_from_stream(in, path);
}

/// Writes a Clifford gate list in the circuit text format.
inline void clifford_gates_to_file(const std::vector<CliffordGate>& gates, int n_qubits,
                                   const std::string& path) {
  Circuit c(n_qubits);
  for (const auto& g : gates) c.push(to_circuit_gate(g));
  circuit_to_file(c, path);
}

/// Reads a gate-only circuit file back as Clifford gates.
inline std::vector<CliffordGate> clifford_gates_from_file(const std::string& path,
                                                          int expected_qubits) {
  Circuit c = circuit_from_file(path);
  if (c.n_qubits != expected_qubits)
    throw std::runtime_error(path + ": expected " + std::to_string(expected_qubits) + " qubits");
  std::vector<CliffordGate> gates;
  for (const auto& op : c.ops) {
    const auto* g = std::get_if<Gate>(&op);
    if (!g) throw std::runtime_error(path + ": only gates allowed in a Clifford circuit file");
    gates.push_back(to_clifford_gate(*g));
  }
  return gates;
}

}  // namespace clapton

#endif  // CLAPTON_CIRCUIT_HPP_
