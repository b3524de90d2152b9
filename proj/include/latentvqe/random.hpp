#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace latentvqe {

/// Named-stream splitter: a child seed for `stream` derived from `root`.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream);

// mt19937_64 with distributions computed here rather than by <random>, so a
// seed produces the same numbers on every standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  std::uint64_t next() { return engine_(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

private:
  std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view bytes);

} // namespace latentvqe
