#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace chainminer {

// Sampling layer over std::mt19937_64. The standard pins the engine's output
// sequence but not the library distributions, so the few draws needed here
// are spelled out by hand; a seed then reproduces runs bit-for-bit on any
// toolchain.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on [0, n). n must be positive.
  std::uint64_t uniform_int(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform_int(n));
  }

  bool coin(double p) { return uniform() < p; }

  // Standard normal, Box-Muller.
  double normal() {
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTau * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  static constexpr double kTau = 6.283185307179586476925287;
  std::mt19937_64 engine_;
};

}  // namespace chainminer
