#pragma once

#include <functional>
#include <vector>

#include "ckn/params.hpp"

namespace ckn {

/// int_C V_{t1}^{q1} V_{t2}^{q2}, q1 + q2 = p.
double interaction(const CknParams& prm, double t1, double t2, double q1, double q2);

/// int_C V_{t1}^{p-1} d_s V_{t2}
double interaction_derivative(const CknParams& prm, double t1, double t2);

enum class Modulus { F1, F2, F3 };

/// Piecewise moduli; nu only matters for F1.
double moduli(Modulus kind, double p, double x, int nu = 2);

struct BubbleConfig {
  CknParams params;
  std::vector<double> centers;  // strictly increasing
  double R = 0.0;               // minimal gap
  double Q = 0.0;               // e^{-sqrt(Lambda) R}
  double zeta = 0.01;

  static BubbleConfig make(const CknParams& prm, std::vector<double> centers, double zeta = 0.01);
  int nu() const { return static_cast<int>(centers.size()); }
  /// e^{-sqrt(Lambda) |t_i - t_j|}, 0-based indices
  double Qij(int i, int j) const;
};

/// W_1, W_2, W_3 at s (which = 1, 2, 3).
double weight(const BubbleConfig& cfg, int which, double s);

/// sup_s |h(s)| / W_which(s) over the given sample points.
double weighted_sup_norm(const BubbleConfig& cfg, int which, const std::vector<double>& s,
                         const std::vector<double>& values);

struct BubbleSumDiagnostics {
  double residual = 0.0;         // |H1(sigma)|_{H^-1}
  double ratio = 0.0;            // residual / Q
  double interaction_norm = 0.0; // |sigma^{p-1} - sum V^{p-1}|_i
  int norm_index = 1;            // 1 for p < 4, 2 otherwise
  double tail_fraction = 0.0;
};

BubbleSumDiagnostics bubble_sum_residual(const BubbleConfig& cfg);

struct WindowRow {
  double gap, value, predicted, ratio;
};

struct WindowReport {
  std::vector<WindowRow> rows;
  double spread = 0.0;  // max ratio / min ratio
};

/// Gaps log-free uniform in [4/sqrt(Lambda), 12/sqrt(Lambda)].
std::vector<double> default_gaps(const CknParams& prm, int count = 9);

/// interaction / e^{-sqrt(Lambda) gap min(q1,q2)}
WindowReport interaction_window(const CknParams& prm, double q1, const std::vector<double>& gaps);
/// interaction(q = p/2) / ((gap+1) e^{-p sqrt(Lambda) gap / 2})
WindowReport pair_window(const CknParams& prm, const std::vector<double>& gaps);
/// derivative interaction / e^{-sqrt(Lambda) gap}
WindowReport derivative_window(const CknParams& prm, const std::vector<double>& gaps);
/// bubble-sum residual / Q
WindowReport residual_window(const CknParams& prm, const std::vector<double>& gaps);

}  // namespace ckn
