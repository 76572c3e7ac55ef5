#include "su11/rng.hpp"

#include <cmath>

namespace su11 {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

inline std::uint64_t mix_pair(std::uint64_t a, std::uint64_t b) {
  std::uint64_t st = a ^ rotl(b + 0x9e3779b97f4a7c15ull, 31);
  splitmix64(st);
  return splitmix64(st);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  std::uint64_t st = mix_pair(seed, stream);
  for (auto& word : s_) word = splitmix64(st);
}

RngStream RngStream::substream(std::uint64_t k) const {
  return RngStream(seed_, mix_pair(stream_, k));
}

std::uint64_t RngStream::next_u64() {
  // xoshiro256++
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::exponential(double rate) {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return -std::log(u) / rate;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 == 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_normal_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

double RngStream::gamma(double shape, double scale) {
  if (shape <= 0.0) return 0.0;
  if (shape < 1.0) {
    // boost via Gamma(shape+1) * U^{1/shape}
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (u > 0.0 &&
        std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v * scale;
  }
}

std::uint64_t RngStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean > 30.0) {
    // exact split: Poisson(m) = Poisson(m/2) + Poisson(m/2)
    return poisson(mean * 0.5) + poisson(mean * 0.5);
  }
  const double limit = std::exp(-mean);
  std::uint64_t n = 0;
  double prod = uniform();
  while (prod > limit) {
    prod *= uniform();
    ++n;
  }
  return n;
}

LogSeriesSampler::LogSeriesSampler(double p) : p_(p), norm_(-std::log1p(-p)) {
  double term = p / norm_;  // P(N = 1)
  double cum = term;
  cum_.push_back(cum);
  std::uint64_t n = 1;
  while (1.0 - cum > 1e-12 && n < 100000) {
    ++n;
    term *= p_ * static_cast<double>(n - 1) / static_cast<double>(n);
    cum += term;
    cum_.push_back(cum);
  }
}

double LogSeriesSampler::pmf(std::uint64_t n) const {
  if (n == 0) return 0.0;
  return std::pow(p_, static_cast<double>(n)) /
         (static_cast<double>(n) * norm_);
}

std::uint64_t LogSeriesSampler::sample(RngStream& rng) const {
  const double u = rng.uniform();
  // binary search in the cached cumulative table
  std::size_t lo = 0, hi = cum_.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (cum_[mid] < u)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < cum_.size()) return lo + 1;
  // beyond-table fallback: continue the term walk
  std::uint64_t n = cum_.size();
  double cum = cum_.back();
  double term = pmf(n);
  while (cum < u) {
    ++n;
    term *= p_ * static_cast<double>(n - 1) / static_cast<double>(n);
    cum += term;
    if (term == 0.0) break;
  }
  return n;
}

}  // namespace su11
