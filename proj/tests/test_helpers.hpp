#pragma once

#include <array>
#include <cmath>
#include <cstdint>

#include "cfw/quantum.hpp"
#include "cfw/semantics.hpp"

namespace cfw::test {

/// Deterministic splitmix64, independent of any library randomness.
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}
  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return next() % n; }

private:
  uint64_t state_;
};

/// The closed-form optimum the preset model must reproduce: the output of
/// the search oracle in test_quantum, frozen.
inline constexpr double kParadoxOptimal = 0.09016994374947424;

inline Model hardy_model(double null_tol = 1e-9) {
  const QuantumModel qm = build_hardy_model(HardyMode::PresetOptimal, null_tol);
  return Model::from_table(Setup::hardy(), CausalStructure::all_spacelike(2),
                           joint_table(qm, null_tol));
}

/// Random conditional table. Each entry is zeroed with probability ~1/4 and
/// rows are renormalized; rows never end up all-zero.
inline JointTable random_table(Rng& rng, bool keep_z1_z2_zeros,
                               double null_tol = 1e-9) {
  JointTable t(null_tol);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      double sum = 0.0;
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t o = 0; o < 2; ++o) {
          double v = rng.below(4) == 0 ? 0.0 : 0.05 + 0.95 * rng.unit();
          t.at(i, j, s, o) = v;
          sum += v;
        }
      if (sum == 0.0) {
        t.at(i, j, 0, 0) = 1.0;
        sum = 1.0;
      }
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t o = 0; o < 2; ++o) t.at(i, j, s, o) /= sum;
    }
  if (keep_z1_z2_zeros) {
    t.at(1, 1, 1, 0) = 0.0;  // L2- R2+
    t.at(1, 0, 0, 0) = 0.0;  // L2+ R1+
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        double sum = 0.0;
        for (std::size_t s = 0; s < 2; ++s)
          for (std::size_t o = 0; o < 2; ++o) sum += t.at(i, j, s, o);
        if (sum == 0.0) {
          t.at(i, j, 1, 1) = 1.0;
          sum = 1.0;
        }
        for (std::size_t s = 0; s < 2; ++s)
          for (std::size_t o = 0; o < 2; ++o) t.at(i, j, s, o) /= sum;
      }
  }
  return t;
}

inline Model model_from(const JointTable& t) {
  return Model::from_table(Setup::hardy(), CausalStructure::all_spacelike(2),
                           t);
}

/// The golden Hardy-optimal table, closed forms over the golden ratio.
/// Entries are conditional on the choice pair; order (s, t) with outcome
/// index 0 = "+".
inline std::array<std::array<double, 4>, 4> golden_table() {
  const double s5 = std::sqrt(5.0);
  const double a = (7.0 - 3.0 * s5) / 2.0;   // 0.1458980337503155
  const double b = (s5 - 1.0) / 2.0;         // 0.6180339887498949
  const double c = s5 - 2.0;                 // 0.2360679774997897
  const double d = (3.0 - s5) / 2.0;         // 0.3819660112501051
  const double p = (5.0 * s5 - 11.0) / 2.0;  // 0.0901699437494742
  return {{
      {a, b, p, a},  // (L1, R1): ++, +-, -+, --
      {a, b, c, 0},  // (L1, R2)
      {0, b, c, a},  // (L2, R1)
      {d, c, 0, d},  // (L2, R2)
  }};
}

inline double golden_entry(std::size_t i, std::size_t j, std::size_t s,
                           std::size_t t) {
  return golden_table()[i * 2 + j][s * 2 + t];
}

}  // namespace cfw::test
