#pragma once

#include "seamanship/risk.hpp"

#include <algorithm>
#include <span>
#include <string>
#include <vector>

namespace seamanship {

struct ScoreParams {
  double beta = 0.5;
  double kappa = 10.0;
  double f50 = 1.0;
  double sr_star_eps = 1e-3;   // best achievable risk below this counts as zero
  double risk_clamp_eps = 1e-6;
  double sr_max_eps = 1e-9;    // below this the series is treated as risk free
  double order_tolerance = 1e-9; // allowed numerical excess of sr_star over sr

  void validate() const;
};

inline double clamp_risk(double r, double eps) { return std::clamp(r, eps, 1.0 - eps); }

/// Scale factor whose logistic risk is r. Rejects r outside (0, 1).
double invert_risk(double r, double kappa, double f50);

/// Rescales sr so that the best achievable risk sr_star lands on boundary
/// contact (f = 1). Returns sr unchanged when sr_star is negligible.
double normalize_risk(double sr, double sr_star, const ScoreParams& params);

struct SeamanshipScore {
  double sr_max = 0.0;
  double j_m = 1.0;
  double j_c = 1.0;
  double j_c_raw = 0.0; // 1 - integral/SR_max without duration normalisation
  double gss = 1.0;
};

/// Maximum and cumulative scores of a risk series and their weighted blend.
SeamanshipScore gss(std::span<const double> sr_norm, std::span<const double> times, const ScoreParams& params);

/// GSS = J_M (1 + beta (2 J_C - 1)(1 - J_M)).
inline double blend_score(double j_m, double j_c, double beta) {
  return j_m * (1.0 + beta * (2.0 * j_c - 1.0) * (1.0 - j_m));
}

struct GssReport {
  std::string vessel_id;
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<double> times;
  std::vector<double> sr_series;
  std::vector<double> sr_norm_series;
  SeamanshipScore score;
  bool normalized = true; // false for the baseline report
};

} // namespace seamanship
