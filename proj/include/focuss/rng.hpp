#pragma once

#include <cstdint>

namespace focuss {

// xoshiro256** seeded through splitmix64. Normal deviates use the Marsaglia
// polar method so sequences are identical across platforms and standard
// libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  double uniform();                  // [0, 1), 53 random bits
  double uniform(double lo, double hi);
  std::uint64_t below(std::uint64_t bound);  // uniform integer in [0, bound)
  double normal();
  double sign();                     // +1 or -1

 private:
  std::uint64_t s_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace focuss
