#include "turnmix/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "turnmix/csv.hpp"

namespace turnmix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double refine(double x, double p) {
  static const double kSqrt2 = std::sqrt(2.0);
  static const double kSqrt2Pi = std::sqrt(2.0 * 3.14159265358979323846);
  const double e = 0.5 * std::erfc(-x / kSqrt2) - p;
  const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

std::vector<std::vector<double>> split_halves(
    const std::vector<std::vector<double>>& chains) {
  std::vector<std::vector<double>> out;
  out.reserve(2 * chains.size());
  for (const auto& c : chains) {
    const std::size_t half = c.size() / 2;
    // Odd lengths drop the middle draw so both halves match.
    out.emplace_back(c.begin(), c.begin() + half);
    out.emplace_back(c.end() - half, c.end());
  }
  return out;
}

bool all_equal(const std::vector<std::vector<double>>& chains) {
  const double first = chains.front().front();
  for (const auto& c : chains) {
    for (double v : c) {
      if (v != first) return false;
    }
  }
  return true;
}

void validate(const std::vector<std::vector<double>>& chains) {
  if (chains.empty()) throw std::invalid_argument("no chains");
  const std::size_t n = chains.front().size();
  if (n < 4) throw std::invalid_argument("chains need at least 4 draws");
  for (const auto& c : chains) {
    if (c.size() != n) {
      throw std::invalid_argument("chains have unequal lengths");
    }
    for (double v : c) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("chains contain non-finite draws");
      }
    }
  }
}

// Average ranks (ties share the mean rank), then normal scores.
std::vector<std::vector<double>> rank_normalize(
    const std::vector<std::vector<double>>& chains) {
  const std::size_t m = chains.size();
  const std::size_t n = chains.front().size();
  const std::size_t total = m * n;
  std::vector<std::pair<double, std::size_t>> pooled;
  pooled.reserve(total);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      pooled.emplace_back(chains[c][i], c * n + i);
    }
  }
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<double> rank(total);
  std::size_t i = 0;
  while (i < total) {
    std::size_t j = i;
    while (j < total && pooled[j].first == pooled[i].first) ++j;
    const double avg = 0.5 * static_cast<double>(i + j + 1);  // 1-based mean
    for (std::size_t k = i; k < j; ++k) rank[pooled[k].second] = avg;
    i = j;
  }
  std::vector<std::vector<double>> z(m, std::vector<double>(n));
  const double denom = static_cast<double>(total) + 0.25;
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t k = 0; k < n; ++k) {
      z[c][k] = inverse_normal_cdf((rank[c * n + k] - 0.375) / denom);
    }
  }
  return z;
}

struct ChainMoments {
  std::vector<double> mean;
  double w = 0.0;          // mean within-chain variance (ddof 1)
  double var_means = 0.0;  // variance of chain means (ddof 1)
  double var_plus = 0.0;
};

ChainMoments moments(const std::vector<std::vector<double>>& z) {
  const std::size_t m = z.size();
  const double n = static_cast<double>(z.front().size());
  ChainMoments mo;
  mo.mean.resize(m);
  double sum_var = 0.0;
  for (std::size_t c = 0; c < m; ++c) {
    const auto& v = z[c];
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    mo.mean[c] = mean;
    sum_var += ss / (n - 1.0);
  }
  mo.w = sum_var / static_cast<double>(m);
  const double grand =
      std::accumulate(mo.mean.begin(), mo.mean.end(), 0.0) / static_cast<double>(m);
  double bss = 0.0;
  for (double x : mo.mean) bss += (x - grand) * (x - grand);
  mo.var_means = m > 1 ? bss / static_cast<double>(m - 1) : 0.0;
  mo.var_plus = mo.w * (n - 1.0) / n + mo.var_means;
  return mo;
}

// Biased (1/n) autocovariance at one lag, averaged across chains.
double mean_autocov(const std::vector<std::vector<double>>& z,
                    const std::vector<double>& means, std::size_t lag) {
  const std::size_t n = z.front().size();
  double total = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) {
    const auto& v = z[c];
    const double mean = means[c];
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) {
      s += (v[i] - mean) * (v[i + lag] - mean);
    }
    total += s / static_cast<double>(n);
  }
  return total / static_cast<double>(z.size());
}

}  // namespace

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("inverse_normal_cdf requires p in (0, 1)");
  }
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  return refine(x, p);
}

double split_rhat(const std::vector<std::vector<double>>& chains) {
  validate(chains);
  const auto halves = split_halves(chains);
  if (all_equal(halves)) return 1.0;
  const auto z = rank_normalize(halves);
  const ChainMoments mo = moments(z);
  const double n = static_cast<double>(z.front().size());
  if (mo.w <= 0.0) return mo.var_means > 0.0 ? kInf : 1.0;
  const double var_hat = mo.w * (n - 1.0) / n + mo.var_means;
  return std::sqrt(var_hat / mo.w);
}

double ess_bulk(const std::vector<std::vector<double>>& chains) {
  validate(chains);
  const auto halves = split_halves(chains);
  if (all_equal(halves)) return 0.0;
  const auto z = rank_normalize(halves);
  const ChainMoments mo = moments(z);
  const std::size_t n = z.front().size();
  const double total = static_cast<double>(z.size() * n);
  if (!(mo.var_plus > 0.0)) return 0.0;

  std::vector<double> rho(n, 0.0);
  rho[0] = 1.0;
  rho[1] = 1.0 - (mo.w - mean_autocov(z, mo.mean, 1)) / mo.var_plus;
  double rho_even = rho[0];
  double rho_odd = rho[1];
  std::size_t t = 0;
  while (t + 5 < n && rho_even + rho_odd > 0.0) {
    t += 2;
    rho_even = 1.0 - (mo.w - mean_autocov(z, mo.mean, t)) / mo.var_plus;
    rho_odd = 1.0 - (mo.w - mean_autocov(z, mo.mean, t + 1)) / mo.var_plus;
    if (rho_even + rho_odd >= 0.0) {
      rho[t] = rho_even;
      rho[t + 1] = rho_odd;
    }
  }
  const std::size_t max_t = t;
  if (rho_even > 0.0) rho[max_t] = rho_even;

  // Geyer's initial monotone sequence: pair sums may not increase.
  t = 0;
  while (t + 4 <= max_t) {
    t += 2;
    if (rho[t] + rho[t + 1] > rho[t - 2] + rho[t - 1]) {
      rho[t] = 0.5 * (rho[t - 2] + rho[t - 1]);
      rho[t + 1] = rho[t];
    }
  }

  double tau = -1.0 + rho[max_t];
  for (std::size_t lag = 0; lag < max_t; ++lag) tau += 2.0 * rho[lag];
  tau = std::max(tau, 1.0 / std::log10(total));
  return total / tau;
}

std::vector<ParameterDiagnostics> diagnose_draws(const PosteriorDraws& draws) {
  std::vector<ParameterDiagnostics> out;
  out.reserve(draws.dim);
  for (std::size_t p = 0; p < draws.dim; ++p) {
    std::vector<std::vector<double>> chains;
    chains.reserve(draws.num_chains());
    double sum = 0.0;
    for (std::size_t c = 0; c < draws.num_chains(); ++c) {
      chains.push_back(draws.column(c, p));
      for (double v : chains.back()) sum += v;
    }
    ParameterDiagnostics d;
    d.name = draws.names[p];
    d.rhat = split_rhat(chains);
    d.ess = ess_bulk(chains);
    d.mean = sum / (static_cast<double>(draws.num_chains()) *
                    static_cast<double>(draws.kept_per_chain));
    out.push_back(std::move(d));
  }
  return out;
}

void write_diagnostics_csv(const std::string& path,
                           const std::vector<ParameterDiagnostics>& rows) {
  CsvWriter out(path);
  out.write_row({"parameter", "mean", "rhat", "ess_bulk"});
  for (const auto& r : rows) {
    out.write_row({r.name, format_double(r.mean), format_double(r.rhat),
                   format_double(r.ess)});
  }
}

}  // namespace turnmix
