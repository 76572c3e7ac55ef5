#include "su11/stats.hpp"

#include <cmath>
#include <limits>

namespace su11 {

void RunningStat::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

double RunningStat::variance() const {
  if (n_ < 2) return 0.0;
  return m2_ / static_cast<double>(n_ - 1);
}

McEstimate RunningStat::estimate() const {
  McEstimate e;
  e.mean = mean_;
  e.n_samples = n_;
  e.std_error = n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  return e;
}

namespace {

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Lentz continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_pvalue(double statistic, std::uint64_t dof) {
  if (dof == 0) return 1.0;
  return gamma_q(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

namespace {

// Pool trailing bins so each kept bin clears the minimum; the remainder is
// folded into the last kept bin.
void pool_bins(std::vector<double>& a, std::vector<double>& b,
               const std::vector<double>& weight, double min_weight) {
  std::vector<double> pa, pb;
  double acca = 0.0, accb = 0.0, accw = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acca += a[i];
    accb += b[i];
    accw += weight[i];
    if (accw >= min_weight) {
      pa.push_back(acca);
      pb.push_back(accb);
      acca = accb = accw = 0.0;
    }
  }
  if (accw > 0.0 && !pa.empty()) {
    pa.back() += acca;
    pb.back() += accb;
  } else if (accw > 0.0) {
    pa.push_back(acca);
    pb.push_back(accb);
  }
  a = std::move(pa);
  b = std::move(pb);
}

}  // namespace

double chi2_gof_pvalue(const std::vector<double>& observed,
                       const std::vector<double>& expected,
                       double min_expected) {
  std::vector<double> obs = observed, exp_ = expected;
  pool_bins(obs, exp_, expected, min_expected);
  if (obs.size() < 2) return 1.0;
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (exp_[i] <= 0.0) continue;
    const double d = obs[i] - exp_[i];
    stat += d * d / exp_[i];
  }
  return chi2_pvalue(stat, obs.size() - 1);
}

double chi2_two_sample_pvalue(const std::vector<double>& counts1,
                              const std::vector<double>& counts2,
                              double min_combined) {
  std::vector<double> c1 = counts1, c2 = counts2;
  std::vector<double> combined(c1.size());
  for (std::size_t i = 0; i < c1.size(); ++i) combined[i] = c1[i] + c2[i];
  pool_bins(c1, c2, combined, min_combined);
  if (c1.size() < 2) return 1.0;
  double n1 = 0.0, n2 = 0.0;
  for (double v : c1) n1 += v;
  for (double v : c2) n2 += v;
  const double k1 = std::sqrt(n2 / n1), k2 = std::sqrt(n1 / n2);
  double stat = 0.0;
  for (std::size_t i = 0; i < c1.size(); ++i) {
    const double tot = c1[i] + c2[i];
    if (tot <= 0.0) continue;
    const double d = k1 * c1[i] - k2 * c2[i];
    stat += d * d / tot;
  }
  return chi2_pvalue(stat, c1.size() - 1);
}

}  // namespace su11
