#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace softcopter {

// Deterministic random stream. std::mt19937_64 output is fully specified by
// the standard, but the std distributions are not, so the uniform and normal
// transforms are spelled out here to keep results identical across platforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : root_(splitmix64(seed)), engine_(root_) {}

  /// Named sub-stream, decorrelated from the parent and from siblings.
  RngStream derive(std::string_view name) const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (char c : name) {
      h ^= static_cast<std::uint8_t>(c);
      h *= 1099511628211ull;
    }
    return RngStream(root_ ^ h);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// N(mu, sigma^2) via Box-Muller (one draw per call, pair cached).
  double gaussian(double mu = 0.0, double sigma = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mu + sigma * spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return mu + sigma * r * std::cos(theta);
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  std::uint64_t root_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace softcopter
