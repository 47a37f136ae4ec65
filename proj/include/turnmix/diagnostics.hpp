#pragma once

#include <string>
#include <vector>

#include "turnmix/sampler.hpp"

namespace turnmix {

// Inverse of the standard normal CDF (Acklam's rational approximation with a
// Halley refinement step). Throws std::domain_error for p outside (0, 1).
double inverse_normal_cdf(double p);

// Rank-normalized split-Rhat. Each chain is split in half (middle draw
// dropped when odd), the pooled draws are converted to normal scores via
// z = Phi^-1((rank - 3/8) / (S + 1/4)) with average ranks for ties, and the
// classic between/within statistic is computed on z. Chains that are
// constant overall yield 1.0 by convention.
double split_rhat(const std::vector<std::vector<double>>& chains);

// Bulk effective sample size on the same rank-normalized split chains, using
// Geyer's initial monotone sequence over paired autocorrelation sums.
// Capped above at S*log10(S); constant chains yield 0 by convention.
double ess_bulk(const std::vector<std::vector<double>>& chains);

struct ParameterDiagnostics {
  std::string name;
  double rhat = 0.0;
  double ess = 0.0;
  double mean = 0.0;
};

std::vector<ParameterDiagnostics> diagnose_draws(const PosteriorDraws& draws);
void write_diagnostics_csv(const std::string& path,
                           const std::vector<ParameterDiagnostics>& rows);

}  // namespace turnmix
