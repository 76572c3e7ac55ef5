#pragma once

#include <cstdint>
#include <vector>

namespace su11 {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
};

// Streaming mean/variance (Welford).
class RunningStat {
 public:
  void add(double x);
  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const;
  McEstimate estimate() const;

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Upper regularized incomplete gamma Q(a, x); chi^2 survival function is
// Q(dof/2, x/2).
double gamma_q(double a, double x);
double chi2_pvalue(double statistic, std::uint64_t dof);

// Goodness of fit of observed counts against expected counts (same total).
// Bins with expected < min_expected are pooled into their neighbor.
double chi2_gof_pvalue(const std::vector<double>& observed,
                       const std::vector<double>& expected,
                       double min_expected = 5.0);

// Two-sample chi-square on histograms with equal totals; bins with combined
// count < min_combined are pooled.
double chi2_two_sample_pvalue(const std::vector<double>& counts1,
                              const std::vector<double>& counts2,
                              double min_combined = 10.0);

}  // namespace su11
