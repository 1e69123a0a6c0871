#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace mvbandit {

/// Philox4x32-10 counter-based block function (Salmon et al., Random123).
/// Maps a 128-bit counter under a 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Seeded deterministic random stream.
///
/// A stream is identified by (seed, stream_id). The seed is the Philox key,
/// the stream id occupies the upper half of the counter and the position the
/// lower half, so distinct stream ids under one seed address disjoint counter
/// ranges of 2^64 blocks each and can never overlap.
///
/// The stream is single-owner. Every sampler call counts as one logical draw,
/// whatever number of raw words it consumes internally.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()();

  double uniform01();
  double normal(double mean, double stddev);
  /// Gamma with the given shape and *rate* (mean shape/rate).
  double gamma(double shape, double rate);
  double beta(double a, double b);
  bool bernoulli(double p);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t logical_draws() const { return logical_draws_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  std::uint64_t logical_draws_ = 0;

  std::normal_distribution<double> normal_;
  std::gamma_distribution<double> gamma_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace mvbandit
