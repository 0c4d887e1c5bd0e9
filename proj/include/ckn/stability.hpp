#pragma once

#include <string>
#include <vector>

#include "ckn/cylinder.hpp"
#include "ckn/operators.hpp"
#include "ckn/rseries.hpp"

namespace ckn {

struct StabilityConstants {
  double E0 = 0.0;
  double E0_sector0 = 0.0;
  double E0_sector2 = 0.0;
  double F = 0.0;
  double R_energy = 0.0;
  double R_gamma = 0.0;
  double phi_norm2 = 0.0;  // |V_0^{p/2} theta_n|_{H1}^2
  long series_terms = 0;
  double tail_bound = 0.0;
  std::string grid_signature;

  double relative_discrepancy() const { return std::abs(R_energy - R_gamma) / std::abs(R_gamma); }
};

struct BubbleFit {
  double t_star = 0.0;
  double amplitude = 1.0;
  double distance = 0.0;      // |v - a V_t*|_{H1}
  double stationarity = 0.0;  // <v - a V_t*, d_s V_t*>_{H1}
  double projY = 0.0;         // coefficient on V_t*^{p/2} Y_1
  double projY_norm = 0.0;
};

/// Closest bubble in H1 over t (and amplitude if requested). Coarse scan on
/// |t| <= S/2, golden section, then bisection on the derivative.
BubbleFit nearest_bubble(const ZonalField& v, bool fit_amplitude = false);

struct YProjection {
  double coefficient;
  ZonalField remainder;
};

/// H1 projection onto V_t^{p/2} Y_1.
YProjection project_Y(const ZonalField& v, double t);

double compute_F(const Discretization& d);
double compute_F(const CknParams& prm);

struct E0Result {
  double value = 0.0;
  double sector0 = 0.0;
  double sector2 = 0.0;
  double margin0 = 0.0;  // (1-eps) gamma_{even,2} - (p-1) in degree 0
};

/// E_eps: degree-0 (constrained, even) plus degree-2 quadratic minima.
E0Result compute_E_eps(const Discretization& d, double eps);
double compute_E0(const Discretization& d, double eps = 0.0);
double compute_E0(const CknParams& prm, double eps = 0.0);

/// |V_0^{p/2} theta_n|_{H1}^2
double phi_norm2(const Discretization& d);

double compute_R_energy(const Discretization& d);
double compute_R_energy(const CknParams& prm);

StabilityConstants compute_constants(const DiscPtr& d, const RSeriesOptions& opt = {});

/// (lambda+2)^2/(4 lambda) E0 + 2F
double test_function_bound(double E0, double F, double lambda);
double test_function_bound(const CknParams& prm, double lambda);

/// The corrected family w(mu) = (1 - C0 mu^2) V_0 + mu V_0^{p/2} theta_n + mu^2 eta.
class CounterexampleFamily {
 public:
  explicit CounterexampleFamily(DiscPtr d);

  const DiscPtr& disc() const { return d_; }
  double C0() const { return C0_; }
  double kappa() const { return kappa_; }
  const Eigen::VectorXd& eta1() const { return eta1_; }
  const Eigen::VectorXd& eta2() const { return eta2_; }
  const ZonalField& eta() const { return eta_; }
  const ZonalField& phi() const { return phi_; }  // V_0^{p/2} theta_n

  ZonalField w(double mu) const;
  /// V_0 + mu V_0^{p/2} theta_n
  ZonalField naive(double mu) const;

  /// H^{-1} norm of the corrector identity defect.
  double corrector_residual() const;

  struct Orthogonality {
    double bubble = 0.0;  // <eta, V_0>_{H1}
    double ds = 0.0;      // <eta, d_s V_0>_{H1}
    double kernel = 0.0;  // <eta, V_0^{p/2} theta_n>_{H1}
  };
  Orthogonality orthogonality() const;

 private:
  DiscPtr d_;
  double C0_ = 0.0, kappa_ = 0.0;
  Eigen::VectorXd eta1_, eta2_;
  ZonalField eta_, phi_, V_;
};

ZonalField counterexample(const DiscPtr& d, double mu);
ZonalField naive_sequence(const DiscPtr& d, double mu);

struct SharpnessPoint {
  double mu = 0.0;
  double residual = 0.0;        // |H1(w)|_{H^-1}
  double distance = 0.0;        // nearest-bubble distance
  double ratio = 0.0;           // residual / distance^3
  double projY_norm = 0.0;      // |Pi_Y w|
  double perp_distance = 0.0;   // |Pi_Y^perp w - V_t*|
  double t_star = 0.0;
  double naive_residual = 0.0;
  double tail_fraction = 0.0;
};

struct SharpnessReport {
  std::vector<SharpnessPoint> points;
  double slope_residual = 0.0;
  double slope_distance = 0.0;
  double slope_naive = 0.0;
  double slope_projY = 0.0;
  double slope_perp = 0.0;
  double ratio_limit = 0.0;   // ratio at the smallest mu
  double ratio_drift = 0.0;   // max relative change between successive mu
};

/// mus: at least 5 increasing values in [1e-3, 3e-2].
SharpnessReport sharpness_study(const DiscPtr& d, const std::vector<double>& mus);
std::vector<double> default_mus(int count = 7);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ckn
