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

#ifndef CLAPTON_NOISE_MODEL_HPP_
#define CLAPTON_NOISE_MODEL_HPP_

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace clapton {

/// Per-qubit / per-pair error rates, readout flip probabilities, decay times
/// and gate durations. Unspecified entries fall back to the global defaults.
class NoiseModel {
 public:
  // Gate durations feed the T1 channel of the dense simulator only; the
  // Clifford loss path never reads them.
  static constexpr double kDefault1qDuration = 35e-9;
  static constexpr double kDefault2qDuration = 300e-9;
  static constexpr double kDefaultMeasureDuration = 700e-9;

  NoiseModel() : NoiseModel(0.0, 0.0, 0.0, 100e-6) {}

  NoiseModel(double p1, double p2, double p_meas, double t1)
      : p1_default_(checked_prob(p1, "p1")),
        p2_default_(checked_prob(p2, "p2")),
        p_meas_default_(checked_prob(p_meas, "p_meas")),
        t1_default_(checked_t1(t1)) {}

  static NoiseModel noiseless() { return NoiseModel(0, 0, 0, 1.0); }

  double p1(int qubit) const { return lookup(p1_overrides_, qubit, p1_default_); }
  double p_meas(int qubit) const { return lookup(p_meas_overrides_, qubit, p_meas_default_); }
  double t1(int qubit) const { return lookup(t1_overrides_, qubit, t1_default_); }

  /// Two-qubit depolarizing probability for the ordered pair (a, b).
  double p2(int a, int b) const {
    auto it = p2_overrides_.find({a, b});
    return it == p2_overrides_.end() ? p2_default_ : it->second;
  }

  void set_p1(int qubit, double v) { p1_overrides_[qubit] = checked_prob(v, "p1"); }
  void set_p_meas(int qubit, double v) { p_meas_overrides_[qubit] = checked_prob(v, "p_meas"); }
  void set_t1(int qubit, double v) { t1_overrides_[qubit] = checked_t1(v); }
  void set_p2(int a, int b, double v) { p2_overrides_[{a, b}] = checked_prob(v, "p2"); }

  /// Duration in seconds for a named operation ("RX", "CX", "MEASURE", ...).
  double duration(const std::string& op_name) const {
    auto it = durations_.find(op_name);
    if (it != durations_.end()) return it->second;
    if (op_name == "CX" || op_name == "SWAP") return kDefault2qDuration;
    if (op_name == "MEASURE") return kDefaultMeasureDuration;
    return kDefault1qDuration;
  }

  void set_duration(const std::string& op_name, double seconds) {
    if (seconds < 0) throw std::invalid_argument("duration must be >= 0");
    durations_[op_name] = seconds;
  }

  bool is_noiseless() const {
    if (p1_default_ != 0 || p2_default_ != 0 || p_meas_default_ != 0) return false;
    for (const auto& [q, v] : p1_overrides_)
      if (v != 0) return false;
    for (const auto& [q, v] : p_meas_overrides_)
      if (v != 0) return false;
    for (const auto& [q, v] : p2_overrides_)
      if (v != 0) return false;
    return true;
  }

 private:
  static double checked_prob(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
    return p;
  }
  static double checked_t1(double t1) {
    if (!(t1 > 0.0)) throw std::invalid_argument("t1 must be > 0");
    return t1;
  }
  static double lookup(const std::map<int, double>& m, int q, double fallback) {
    auto it = m.find(q);
    return it == m.end() ? fallback : it->second;
  }

  double p1_default_, p2_default_, p_meas_default_, t1_default_;
  std::map<int, double> p1_overrides_;
  std::map<int, double> p_meas_overrides_;
  std::map<int, double> t1_overrides_;
  std::map<std::pair<int, int>, double> p2_overrides_;
  std::map<std::string, double> durations_;
};

/// Parses the key-value noise file: a `default` block plus optional
/// `qubit <k>` / `pair <a> <b>` blocks with keys p1, p2, p_meas, t1, and
/// standalone `duration <gate> <seconds>` lines.
inline NoiseModel noise_model_from_stream(std::istream& in, const std::string& origin) {
  auto fail = [&](int line_no, const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + what);
  };

  enum class Block { None, Default, Qubit, Pair };
  Block block = Block::None;
  int block_q = 0, block_a = 0, block_b = 0;
  double d_p1 = 0, d_p2 = 0, d_p_meas = 0, d_t1 = 100e-6;
  bool saw_default = false;

  struct Override {
    Block block;
    int q, a, b;
    std::string key;
    double value;
    int line_no;
  };
  std::vector<Override> overrides;
  std::vector<std::pair<std::pair<std::string, double>, int>> durations;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "default") {
      block = Block::Default;
      saw_default = true;
    } else if (head == "qubit") {
      if (!(ls >> block_q) || block_q < 0) fail(line_no, "qubit block needs an index");
      block = Block::Qubit;
    } else if (head == "pair") {
      if (!(ls >> block_a >> block_b) || block_a < 0 || block_b < 0 || block_a == block_b)
        fail(line_no, "pair block needs two distinct indices");
      block = Block::Pair;
    } else if (head == "duration") {
      std::string gate;
      double secs;
      if (!(ls >> gate >> secs)) fail(line_no, "duration line needs <gate> <seconds>");
      durations.push_back({{gate, secs}, line_no});
    } else if (head == "p1" || head == "p2" || head == "p_meas" || head == "t1") {
      double value;
      if (!(ls >> value)) fail(line_no, head + " needs a value");
      if (block == Block::None) fail(line_no, head + " outside of a block");
      if (block == Block::Default) {
        if (head == "p1")
          d_p1 = value;
        else if (head == "p2")
          d_p2 = value;
        else if (head == "p_meas")
          d_p_meas = value;
        else
          d_t1 = value;
      } else {
        overrides.push_back({block, block_q, block_a, block_b, head, value, line_no});
      }
    } else {
      fail(line_no, "unknown directive '" + head + "'");
    }
  }
  if (!saw_default) throw std::runtime_error(origin + ": missing 'default' block");

  NoiseModel nm = [&] {
    try {
      return NoiseModel(d_p1, d_p2, d_p_meas, d_t1);
    } catch (const std::exception& e) {
      throw std::runtime_error(origin + ": default block: " + e.what());
    }
  }();
  for (const auto& ov : overrides) {
    try {
      if (ov.block == Block::Qubit) {
        if (ov.key == "p1")
          nm.set_p1(ov.q, ov.value);
        else if (ov.key == "p_meas")
          nm.set_p_meas(ov.q, ov.value);
        else if (ov.key == "t1")
          nm.set_t1(ov.q, ov.value);
        else
          fail(ov.line_no, "p2 is a pair property");
      } else {
        if (ov.key == "p2")
          nm.set_p2(ov.a, ov.b, ov.value);
        else
          fail(ov.line_no, ov.key + " is not a pair property");
      }
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception& e) {
      fail(ov.line_no, e.what());
    }
  }
  for (const auto& [kv, ln] : durations) {
    try {
      nm.set_duration(kv.first, kv.second);
    } catch (const std::exception& e) {
      fail(ln, e.what());
    }
  }
  return nm;
}

inline NoiseModel noise_model_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open noise model file: " + path);
  return noise_model_from_stream(in, path);
}

}  // namespace clapton

#endif  // CLAPTON_NOISE_MODEL_HPP_
