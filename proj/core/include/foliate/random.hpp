#pragma once

#include <cstdint>
#include <random>

#include "foliate/rational.hpp"

namespace foliate {

// Deterministic across platforms: only raw mt19937_64 output is used,
// never the implementation-defined std distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [lo, hi].
  long uniform_int(long lo, long hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(next() % span);
  }

  double uniform_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Random rational num/den with |num| <= max_num and 1 <= den <= max_den.
  Rational rational(long max_num = 10, long max_den = 7) {
    Rational r(uniform_int(-max_num, max_num), uniform_int(1, max_den));
    r.canonicalize();
    return r;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace foliate
