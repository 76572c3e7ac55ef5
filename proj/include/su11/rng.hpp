#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace su11 {

// Splittable counter-keyed stream: identical (seed, stream) pairs reproduce
// identical draw sequences bit for bit, independent of which other streams
// exist. Core generator is xoshiro256++ seeded through splitmix64, with all
// variate transforms hand-rolled so results do not depend on the standard
// library implementation.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Child stream keyed by (this stream, k); used one-per-(replica, site).
  RngStream substream(std::uint64_t k) const;

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double exponential(double rate);
  double normal();
  double gamma(double shape, double scale);
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t seed_, stream_;
  std::array<std::uint64_t, 4> s_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// Logarithmic-series sampler, P(N = n) ~ p^n / n on n >= 1. Inversion with
// a cached cumulative table up to the 1 - 1e-12 quantile; the tail is walked
// term by term.
class LogSeriesSampler {
 public:
  explicit LogSeriesSampler(double p);
  std::uint64_t sample(RngStream& rng) const;
  double pmf(std::uint64_t n) const;

 private:
  double p_;
  double norm_;  // -log(1-p)
  std::vector<double> cum_;
};

}  // namespace su11
