#pragma once

namespace ckn {

struct CknParams;

/// P(x) = G(x+3/2) G(x+2a-1) G(x+2a) / (G(x+a-b+1) G(x+a+b+1) G(x+2a+1/2)),  a = xi1, b = xi2.
/// Throws NumericalError when an argument hits a Gamma pole.
double gamma_ratio_P(double x, double xi1, double xi2);

struct RSeriesOptions {
  double tol = 1e-10;        // stop once the tail bound is below tol
  long min_terms = 1000;
  long max_terms = 20000000;
  long fixed_terms = 0;      // > 0: sum exactly this many terms
};

struct RSeriesResult {
  double sum = 0.0;             // partial sum + tail correction
  double partial = 0.0;
  long terms = 0;
  double tail_correction = 0.0;
  double tail_bound = 0.0;
  double decay_exponent = 0.0;  // measured over the last decade of terms
};

/// sum_{k>=0} (P(k - xi) - P(k)) / P(-1), xi = xi1 - xi2.
RSeriesResult r_series(double xi1, double xi2, const RSeriesOptions& opt = {});

struct RGamma {
  double value = 0.0;
  RSeriesResult series;
  double xi1 = 0.0, xi2 = 0.0;
};

/// Closed-form constant R(p, n) from the Gamma-function series.
RGamma compute_R_gamma(const CknParams& prm, const RSeriesOptions& opt = {});

}  // namespace ckn
