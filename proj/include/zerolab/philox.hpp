#pragma once

#include <array>
#include <cstdint>

namespace zerolab::levysim {

/// Philox4x64-10 block function (Salmon et al., Random123).
using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

PhiloxCounter philox4x64(PhiloxCounter ctr, PhiloxKey key);

/// Random stream for one Monte-Carlo path: key = (seed, salt), counter = (block, path, 0, 0).
/// Streams with different (seed, salt, path) are independent; a stream never repeats.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t path, std::uint64_t salt = 0);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal (Box-Muller; the second variate is kept for the next call).
  double normal();
  /// Standard exponential.
  double exponential();

 private:
  PhiloxKey key_;
  PhiloxCounter counter_;
  PhiloxCounter block_{};
  int used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace zerolab::levysim
