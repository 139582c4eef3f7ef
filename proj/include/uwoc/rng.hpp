#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace uwoc {

/// Philox4x32-10 counter-based generator. The key is the seed; the upper half
/// of the counter selects an independent substream, the lower half walks it.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  Philox4x32(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (idx_ == 4) refill();
    return out_[idx_++];
  }

  static constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;

  /// One 10-round block; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> x,
                                            std::array<std::uint32_t, 2> key) {
    std::uint32_t k0 = key[0], k1 = key[1];
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t{kM0} * x[0];
      const std::uint64_t p1 = std::uint64_t{kM1} * x[2];
      x = {static_cast<std::uint32_t>(p1 >> 32) ^ x[1] ^ k0, static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ x[3] ^ k1, static_cast<std::uint32_t>(p0)};
      k0 += kW0;
      k1 += kW1;
    }
    return x;
  }

 private:
  void refill() {
    out_ = block(ctr_, key_);
    idx_ = 0;
    if (++ctr_[0] == 0) ++ctr_[1];
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> out_{};
  int idx_ = 4;
};

/// Random stream handed to samplers; one per worker, never shared.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : eng_(seed, stream) {}

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t a = eng_() >> 5, b = eng_() >> 6;
    return (static_cast<double>(a * 67108864u + b) + 0.5) * 0x1.0p-53;
  }

  double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(eng_); }

  Philox4x32& engine() { return eng_; }

 private:
  Philox4x32 eng_;
};

}  // namespace uwoc
