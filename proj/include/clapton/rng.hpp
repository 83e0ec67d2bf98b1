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

#ifndef CLAPTON_RNG_HPP_
#define CLAPTON_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace clapton {

/// Fast 64-bit generator (splitmix64). Used everywhere instead of
/// std::mt19937_64 so that substreams are cheap to derive and results are
/// bit-identical across platforms and thread schedules.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdull;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ull;
  z ^= z >> 33;
  return z;
}

/// Derives an independent stream seed from a base seed and stream indices.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) {
  return mix64(base ^ mix64(a + 0x9e3779b97f4a7c15ull));
}
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(base, a), b);
}
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
  return derive_seed(derive_seed(base, a, b), c);
}

/// Uniform double in [0, 1) with 53 random bits.
template <typename Rng>
double uniform_double(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Rejection-free multiply-shift (Lemire); the
/// modest bias for huge n is irrelevant at the ranges used here (n <= 2^32).
template <typename Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

template <typename Rng>
bool bernoulli(Rng& rng, double p) {
  return uniform_double(rng) < p;
}

/// Number of failures before the next success of a Bernoulli(p) sequence.
/// Used to skip-sample rare error events instead of drawing per trial.
template <typename Rng>
std::uint64_t geometric_skip(Rng& rng, double p) {
  if (p >= 1.0) return 0;
  double u = uniform_double(rng);
  // 1 - u avoids log(0); u == 0 maps to the largest representable skip.
  return static_cast<std::uint64_t>(std::log1p(-u) / std::log1p(-p));
}

}  // namespace clapton

#endif  // CLAPTON_RNG_HPP_
