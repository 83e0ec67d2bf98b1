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

#include <catch2/catch_amalgamated.hpp>

#include "clapton/clifford.hpp"
#include "clapton/rng.hpp"
#include "oracle_matrices.hpp"

using namespace clapton;

namespace {

PauliString random_pauli(int n, SplitMix64& rng) {
  std::uint64_t mask = PauliString::mask_for(n);
  return PauliString(n, rng() & mask, rng() & mask, (rng() & 1) ? -1 : +1);
}

std::vector<CliffordGate> random_gates(int n, int count, SplitMix64& rng) {
  std::vector<CliffordGate> gates;
  for (int i = 0; i < count; ++i) {
    int q = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
    int q2 = (q + 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n - 1)))) % n;
    switch (uniform_below(rng, 7)) {
      case 0: gates.push_back(CliffordGate::h(q)); break;
      case 1: gates.push_back(CliffordGate::s(q)); break;
      case 2: gates.push_back(CliffordGate::s_dag(q)); break;
      case 3: gates.push_back(CliffordGate::cx(q, q2)); break;
      case 4: gates.push_back(CliffordGate::swap(q, q2)); break;
      case 5:
        gates.push_back(CliffordGate::ry(q, static_cast<int>(uniform_below(rng, 4))));
        break;
      default:
        gates.push_back(CliffordGate::rz(q, static_cast<int>(uniform_below(rng, 4))));
        break;
    }
  }
  return gates;
}

/// Dense 2-qubit unitary of a gate list (test-side, via the naive oracle).
oracle::Mat unitary_2q(const std::vector<CliffordGate>& gates) {
  const oracle::C i(0, 1);
  oracle::Mat u = oracle::identity(4);
  for (const auto& g : gates) {
    oracle::Mat step;
    switch (g.kind) {
      case CliffordGateKind::Cx: {
        // basis index = q0 + 2*q1
        step = oracle::zeros(4);
        if (g.q0 == 0) {  // control 0, target 1: flips bit 1 when bit 0 set
          step[0][0] = 1, step[2][2] = 1, step[3][1] = 1, step[1][3] = 1;
        } else {  // control 1, target 0
          step[0][0] = 1, step[1][1] = 1, step[3][2] = 1, step[2][3] = 1;
        }
        break;
      }
      case CliffordGateKind::Swap: step = oracle::swap_01(); break;
      default: {
        oracle::Mat one;
        if (g.kind == CliffordGateKind::H) one = oracle::hadamard();
        else if (g.kind == CliffordGateKind::S) one = {{oracle::C(1), {}}, {{}, i}};
        else if (g.kind == CliffordGateKind::SDag) one = {{oracle::C(1), {}}, {{}, -i}};
        else if (g.kind == CliffordGateKind::RxStep)
          one = oracle::rotation_1q('X', g.angle_step * M_PI / 2);
        else if (g.kind == CliffordGateKind::RyStep)
          one = oracle::rotation_1q('Y', g.angle_step * M_PI / 2);
        else if (g.kind == CliffordGateKind::RzStep)
          one = oracle::rotation_1q('Z', g.angle_step * M_PI / 2);
        else
          FAIL("unhandled gate in test helper");
        step = g.q0 == 0 ? oracle::kron(oracle::identity(2), one)
                         : oracle::kron(one, oracle::identity(2));
        break;
      }
    }
    u = oracle::mul(step, u);
  }
  return u;
}

const char* kTwoQubitPaulis[] = {"II", "XI", "YI", "ZI", "IX", "XX", "YX", "ZX",
                                 "IY", "XY", "YY", "ZY", "IZ", "XZ", "YZ", "ZZ"};

}  // namespace

TEST_CASE("identity tableau", "[clifford]") {
  CliffordTableau t = tableau_from_gates({}, 3);
  CHECK(t.is_identity());
  SplitMix64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    PauliString p = random_pauli(3, rng);
    CHECK(t.conjugate(p) == p);
    CHECK(t.anticonjugate(p) == p);
  }
}

TEST_CASE("CX generator images", "[clifford]") {
  CliffordTableau t = tableau_from_gates({CliffordGate::cx(0, 1)}, 2);
  CHECK(t.x_image(0).str() == "+XX");
  CHECK(t.x_image(1).str() == "+IX");
  CHECK(t.z_image(0).str() == "+ZI");
  CHECK(t.z_image(1).str() == "+ZZ");
  CHECK(t.debug_str() == "X0 -> +XX\nX1 -> +IX\nZ0 -> +ZI\nZ1 -> +ZZ\n");

  CHECK(t.conjugate(parse_pauli("XI", 2)).str() == "+XX");
  CHECK(t.anticonjugate(parse_pauli("ZI", 2)).str() == "+ZI");
}

TEST_CASE("full two-qubit CX conjugation table matches dense 4x4 oracle", "[clifford]") {
  CliffordTableau t = tableau_from_gates({CliffordGate::cx(0, 1)}, 2);
  oracle::Mat ucx = oracle::cx_01();
  for (const char* text : kTwoQubitPaulis) {
    PauliString p = parse_pauli(text, 2);
    PauliString image = t.conjugate(p);
    oracle::Mat expected = oracle::conjugate(ucx, oracle::pauli_string(text));
    INFO(text << " -> " << image.str());
    CHECK(oracle::max_abs_diff(expected, oracle::pauli_string(image.str())) < 1e-12);
  }
}

TEST_CASE("SWAP tableau matches dense oracle", "[clifford]") {
  CliffordTableau t = tableau_from_gates({CliffordGate::swap(0, 1)}, 2);
  oracle::Mat uswap = oracle::swap_01();
  for (const char* text : kTwoQubitPaulis) {
    PauliString image = t.conjugate(parse_pauli(text, 2));
    CHECK(image.sign == +1);
    oracle::Mat expected = oracle::conjugate(uswap, oracle::pauli_string(text));
    CHECK(oracle::max_abs_diff(expected, oracle::pauli_string(image.str())) < 1e-12);
  }
}

TEST_CASE("quarter-turn rotation maps match the dense 2x2 oracle", "[clifford]") {
  const char axes[] = {'X', 'Y', 'Z'};
  const CliffordGateKind kinds[] = {CliffordGateKind::RxStep, CliffordGateKind::RyStep,
                                    CliffordGateKind::RzStep};
  for (int a = 0; a < 3; ++a) {
    for (int step = 0; step < 4; ++step) {
      CliffordGate g{kinds[a], 0, -1, step};
      CliffordTableau t = tableau_from_gates({g}, 1);
      oracle::Mat u = oracle::rotation_1q(axes[a], step * M_PI / 2);
      for (const char* text : {"X", "Y", "Z"}) {
        PauliString image = t.conjugate(parse_pauli(text, 1));
        oracle::Mat expected = oracle::conjugate(u, oracle::pauli_string(text));
        INFO("R" << axes[a] << " step " << step << ": " << text << " -> " << image.str());
        CHECK(oracle::max_abs_diff(expected, oracle::pauli_string(image.str())) < 1e-12);
      }
    }
  }
  // Frozen spot check: RZ(pi/2) maps X to +Y with this convention.
  CliffordTableau rz1 = tableau_from_gates({CliffordGate::rz(0, 1)}, 1);
  CHECK(rz1.conjugate(parse_pauli("X", 1)).str() == "+Y");
}

TEST_CASE("random tableaus against the dense 2-qubit oracle", "[clifford]") {
  SplitMix64 rng(0xc1f);
  for (int trial = 0; trial < 40; ++trial) {
    auto gates = random_gates(2, 1 + static_cast<int>(uniform_below(rng, 8)), rng);
    CliffordTableau t = tableau_from_gates(gates, 2);
    oracle::Mat u = unitary_2q(gates);
    for (const char* text : kTwoQubitPaulis) {
      PauliString image = t.conjugate(parse_pauli(text, 2));
      oracle::Mat expected = oracle::conjugate(u, oracle::pauli_string(text));
      CHECK(oracle::max_abs_diff(expected, oracle::pauli_string(image.str())) < 1e-12);
    }
  }
}

TEST_CASE("conjugation preserves commutation and closure", "[clifford]") {
  SplitMix64 rng(0xbee);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(uniform_below(rng, 5));
    CliffordTableau t = tableau_from_gates(random_gates(n, 20, rng), n);
    PauliString p = random_pauli(n, rng), q = random_pauli(n, rng);
    PauliString cp = t.conjugate(p), cq = t.conjugate(q);
    CHECK(cp.n_qubits == n);
    CHECK((cp.sign == +1 || cp.sign == -1));
    CHECK(p.commutes_with(q) == cp.commutes_with(cq));
  }
}

TEST_CASE("inverse tableau", "[clifford]") {
  CHECK(tableau_from_gates({}, 4).inverse().is_identity());

  CliffordTableau cx = tableau_from_gates({CliffordGate::cx(0, 1)}, 2);
  CHECK(cx.inverse() == cx);  // CX is self-inverse

  SplitMix64 rng(0x1a);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(uniform_below(rng, 4));  // up to 5
    CliffordTableau t = tableau_from_gates(random_gates(n, 25, rng), n);
    CliffordTableau inv = t.inverse();
    CHECK(t.then(inv).is_identity());
    CHECK(inv.then(t).is_identity());
    CHECK(inv.inverse() == t);
    // anticonjugate is conjugation by the inverse, and they cancel
    PauliString p = random_pauli(n, rng);
    CHECK(t.conjugate(t.anticonjugate(p)) == p);
    CHECK(inv.conjugate(p) == t.anticonjugate(p));
  }
}

TEST_CASE("gate-list composition acts as tableau composition", "[clifford]") {
  SplitMix64 rng(0x90);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3;
    auto g1 = random_gates(n, 10, rng);
    auto g2 = random_gates(n, 10, rng);
    auto both = g1;
    both.insert(both.end(), g2.begin(), g2.end());
    CliffordTableau t1 = tableau_from_gates(g1, n);
    CliffordTableau t2 = tableau_from_gates(g2, n);
    CHECK(tableau_from_gates(both, n) == t1.then(t2));
  }
}

TEST_CASE("tableau symplectic consistency invariant", "[clifford]") {
  SplitMix64 rng(0x77);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(uniform_below(rng, 5));
    CliffordTableau t = tableau_from_gates(random_gates(n, 30, rng), n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        CHECK(t.x_image(a).commutes_with(t.z_image(b)) == (a != b));
        CHECK(t.x_image(a).commutes_with(t.x_image(b)));
        CHECK(t.z_image(a).commutes_with(t.z_image(b)));
      }
    }
  }
}

TEST_CASE("gate validation", "[clifford]") {
  CliffordTableau t(2);
  CHECK_THROWS_AS(t.append(CliffordGate::h(2)), std::out_of_range);
  CHECK_THROWS_AS(t.append(CliffordGate::cx(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(t.append(CliffordGate{CliffordGateKind::RzStep, 0, -1, 5}),
                  std::invalid_argument);
}

TEST_CASE("transform_hamiltonian", "[clifford]") {
  SECTION("identity tableau returns an identical Hamiltonian") {
    Hamiltonian h(2, {{0.5, parse_pauli("XX", 2)}, {-1.0, parse_pauli("ZI", 2)}});
    Hamiltonian out = transform_hamiltonian(h, CliffordTableau(2));
    REQUIRE(out.size() == h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      CHECK(out.terms()[i].pauli == h.terms()[i].pauli);
      CHECK(out.terms()[i].coefficient == h.terms()[i].coefficient);
    }
  }

  SECTION("XI under CX(0->1) anticonjugation, sign checked against dense") {
    Hamiltonian h(2, {{1.0, parse_pauli("XI", 2)}});
    CliffordTableau t = tableau_from_gates({CliffordGate::cx(0, 1)}, 2);
    Hamiltonian out = transform_hamiltonian(h, t);
    REQUIRE(out.size() == 1);
    // C^dag (X тensor I) C for CX: X on the control spreads to the target.
    oracle::Mat u = oracle::cx_01();
    oracle::Mat expected = oracle::mul(oracle::mul(oracle::adjoint(u), oracle::pauli_string("XI")), u);
    PauliString got = out.terms()[0].pauli;
    double coeff = out.terms()[0].coefficient;
    CHECK(coeff == Catch::Approx(1.0));
    CHECK(got.str() == "+XX");
    CHECK(oracle::max_abs_diff(expected, oracle::scale(coeff, oracle::pauli_string(got.str()))) <
          1e-12);
  }

  SECTION("term count never grows") {
    SplitMix64 rng(0x31);
    for (int trial = 0; trial < 10; ++trial) {
      int n = 4;
      std::vector<std::pair<double, PauliString>> terms;
      for (int i = 0; i < 10; ++i)
        terms.emplace_back(uniform_double(rng) * 2 - 1, random_pauli(n, rng));
      Hamiltonian h(n, terms);
      CliffordTableau t = tableau_from_gates(random_gates(n, 15, rng), n);
      CHECK(transform_hamiltonian(h, t).size() <= h.size());
    }
  }
}
