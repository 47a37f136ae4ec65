#pragma once

#include <cmath>
#include <stdexcept>

#include "turnmix/angles.hpp"

namespace turnmix {

struct VonMisesParams {
  double mu = 0.0;     // mean direction, radians in (-pi, pi]
  double kappa = 0.0;  // concentration, >= 0 (0 is the circular-uniform limit)
};

struct BesselI0Result {
  double log_i0;  // log I0(kappa)
  double ratio;   // I1(kappa) / I0(kappa)
};

/// log of the modified Bessel function of the first kind, order zero.
/// Evaluated in log space; no overflow for large kappa.
double log_bessel_i0(double kappa);

/// A(kappa) = I1(kappa)/I0(kappa), the derivative of log_bessel_i0.
/// Strictly increasing, in [0, 1).
double bessel_ratio(double kappa);

/// Both of the above from one shared series/asymptotic evaluation.
BesselI0Result bessel_i0_pair(double kappa);

/// log von Mises density: kappa*cos(x - mu) - log(2*pi) - log I0(kappa).
double vm_log_density(double x, const VonMisesParams& params);

/// Inverse tan-half link: mu = 2*atan(eta), mapping reals onto (-pi, pi).
double mean_link_inverse(double eta);

}  // namespace turnmix
