#include "turnmix/von_mises.hpp"

#include <array>
#include <cmath>

namespace turnmix {

namespace {

// Branch switch for the Bessel evaluation. The power series is exact to
// double rounding below this; the 8-term asymptotic tail is below 1e-12
// relative error in I0 above it (cross-branch agreement is tested).
constexpr double kSeriesCutoff = 40.0;
constexpr int kAsymptoticTerms = 8;
constexpr int kMaxSeriesTerms = 256;

// Signed coefficients of the large-kappa expansion
//   I_nu(k) ~ e^k / sqrt(2*pi*k) * sum_j coef[j] / k^j,
// built from the recurrence coef_j = coef_{j-1} * -(4*nu^2 - (2j-1)^2)/(8j).
constexpr std::array<double, kAsymptoticTerms + 1> asymptotic_coeffs(double four_nu_sq) {
  std::array<double, kAsymptoticTerms + 1> c{};
  c[0] = 1.0;
  for (int j = 1; j <= kAsymptoticTerms; ++j) {
    const double odd = 2.0 * j - 1.0;
    c[j] = c[j - 1] * -(four_nu_sq - odd * odd) / (8.0 * j);
  }
  return c;
}

constexpr auto kI0Tail = asymptotic_coeffs(0.0);
constexpr auto kI1Tail = asymptotic_coeffs(4.0);

constexpr std::array<double, kMaxSeriesTerms> reciprocal_table(bool shifted) {
  // shifted=false: 1/m^2 (I0 series); shifted=true: 1/(m*(m+1)) (I1 series)
  std::array<double, kMaxSeriesTerms> t{};
  for (int m = 1; m < kMaxSeriesTerms; ++m) {
    t[m] = shifted ? 1.0 / (static_cast<double>(m) * (m + 1.0))
                   : 1.0 / (static_cast<double>(m) * m);
  }
  return t;
}

constexpr auto kInvMSq = reciprocal_table(false);
constexpr auto kInvMMp1 = reciprocal_table(true);

double eval_tail(const std::array<double, kAsymptoticTerms + 1>& c, double inv_k) {
  double acc = c[kAsymptoticTerms];
  for (int j = kAsymptoticTerms - 1; j >= 0; --j) {
    acc = acc * inv_k + c[j];
  }
  return acc;
}

void check_kappa(double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("kappa must be finite and non-negative");
  }
}

}  // namespace

BesselI0Result bessel_i0_pair(double kappa) {
  check_kappa(kappa);
  if (kappa <= kSeriesCutoff) {
    // I0 = sum q^m/(m!)^2, I1 = (k/2) sum q^m/(m!(m+1)!), q = k^2/4.
    // The I0 sum is tracked without its leading 1 so log1p keeps full
    // relative precision when log I0 itself is tiny.
    const double q = 0.25 * kappa * kappa;
    double t0 = 1.0, t1 = 1.0;
    double s0m1 = 0.0, s1 = 1.0;
    for (int m = 1; m < kMaxSeriesTerms; ++m) {
      t0 *= q * kInvMSq[m];
      t1 *= q * kInvMMp1[m];
      s0m1 += t0;
      s1 += t1;
      if (t0 < (1.0 + s0m1) * 1e-18) break;
    }
    return {std::log1p(s0m1), 0.5 * kappa * s1 / (1.0 + s0m1)};
  }
  const double inv_k = 1.0 / kappa;
  const double tail0 = eval_tail(kI0Tail, inv_k);
  const double tail1 = eval_tail(kI1Tail, inv_k);
  const double log_i0 = kappa - 0.5 * std::log(kTwoPi * kappa) + std::log(tail0);
  return {log_i0, tail1 / tail0};
}

double log_bessel_i0(double kappa) { return bessel_i0_pair(kappa).log_i0; }

double bessel_ratio(double kappa) { return bessel_i0_pair(kappa).ratio; }

double vm_log_density(double x, const VonMisesParams& params) {
  if (!std::isfinite(x) || !std::isfinite(params.mu)) {
    throw std::invalid_argument("vm_log_density: non-finite angle");
  }
  const double log_i0 = log_bessel_i0(params.kappa);
  return params.kappa * std::cos(x - params.mu) - std::log(kTwoPi) - log_i0;
}

double mean_link_inverse(double eta) {
  if (!std::isfinite(eta)) {
    throw std::invalid_argument("mean_link_inverse: non-finite linear predictor");
  }
  return 2.0 * std::atan(eta);
}

}  // namespace turnmix
