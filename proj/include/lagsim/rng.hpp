#ifndef LAGSIM_RNG_HPP
#define LAGSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace lagsim {

/// Deterministic random stream built on mt19937_64.
///
/// All variate transforms are implemented here rather than through
/// std::*_distribution so that the draw sequence is part of the public
/// reproducibility contract: identical seed implies a bit-identical
/// sequence of values, independent of the standard library in use.
///
/// Draw costs (uniforms consumed): uniform01 = 1, exponential = 1,
/// normal = 2.
class RandomStream {
 public:
  RandomStream() : eng_(0) {}
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  /// Independent stream for one ensemble member. Streams for distinct
  /// (master, id) pairs are decorrelated through seed_seq mixing.
  static RandomStream derive(std::uint64_t master, std::uint64_t id) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(master & 0xffffffffu),
        static_cast<std::uint32_t>(master >> 32),
        static_cast<std::uint32_t>(id & 0xffffffffu),
        static_cast<std::uint32_t>(id >> 32),
        0x9e3779b9u,
    };
    RandomStream s;
    s.eng_.seed(seq);
    return s;
  }

  /// Uniform on the open interval (0,1), 53-bit resolution. Never
  /// returns 0 or 1, so logs of it are always finite.
  double uniform01() {
    const std::uint64_t bits = eng_() >> 11;  // top 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  /// Exponential with the given rate (mean 1/rate).
  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  /// Standard normal via Box-Muller; consumes two uniforms per value.
  double normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace lagsim

#endif  // LAGSIM_RNG_HPP
