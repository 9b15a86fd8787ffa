#include "seamanship/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace seamanship {

void ScoreParams::validate() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("score.beta must lie in [0, 1]");
  if (!(kappa > 0.0) || !(f50 > 0.0)) throw ConfigError("score logistic parameters must be positive");
  if (!(sr_star_eps > 0.0 && sr_star_eps < 0.5)) throw ConfigError("score.sr_star_eps must lie in (0, 0.5)");
  if (!(risk_clamp_eps > 0.0 && risk_clamp_eps < 0.5)) throw ConfigError("score.risk_clamp_eps must lie in (0, 0.5)");
}

double invert_risk(double r, double kappa, double f50) {
  if (!(r > 0.0 && r < 1.0)) throw InputError("risk must be clamped into (0, 1) before inversion");
  return std::log(1.0 / r - 1.0) / kappa + f50;
}

double normalize_risk(double sr, double sr_star, const ScoreParams& params) {
  if (!(sr >= 0.0 && sr <= 1.0) || !(sr_star >= 0.0 && sr_star <= 1.0))
    throw InputError("risk value outside [0, 1]");
  if (sr_star <= params.sr_star_eps) return sr;
  if (sr_star > sr + params.order_tolerance)
    throw InputError("best achievable risk exceeds the recorded risk");
  sr = std::max(sr, sr_star);

  const double eps = params.risk_clamp_eps;
  const double f_sr = invert_risk(clamp_risk(sr, eps), params.kappa, params.f50);
  const double f_star = invert_risk(clamp_risk(sr_star, eps), params.kappa, params.f50);
  if (std::abs(1.0 - f_star) < 1e-9) return sr;
  const double f_norm = 1.0 + (f_sr - f_star) / (1.0 - f_star);
  return clamp_risk(risk_index<double>(f_norm, params.kappa, params.f50), eps);
}

SeamanshipScore gss(std::span<const double> sr_norm, std::span<const double> times, const ScoreParams& params) {
  if (sr_norm.empty()) throw InputError("score needs a non-empty risk series");
  if (sr_norm.size() != times.size()) throw InputError("risk series and time grid differ in length");
  for (double r : sr_norm)
    if (!(r >= 0.0 && r <= 1.0)) throw InputError("risk value outside [0, 1]");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw InputError("score time grid must be strictly increasing");

  SeamanshipScore score;
  score.sr_max = *std::max_element(sr_norm.begin(), sr_norm.end());
  score.j_m = 1.0 - score.sr_max;
  if (score.sr_max <= params.sr_max_eps) {
    score.j_c = 1.0;
    score.j_c_raw = 1.0;
    score.gss = 1.0;
    return score;
  }

  double integral = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i)
    integral += 0.5 * (sr_norm[i] + sr_norm[i - 1]) * (times[i] - times[i - 1]);
  const double duration = times.back() - times.front();
  const double mean = duration > 0.0 ? integral / duration : sr_norm.front();

  score.j_c_raw = 1.0 - integral / score.sr_max;
  score.j_c = std::clamp(1.0 - mean / score.sr_max, 0.0, 1.0);
  score.gss = blend_score(score.j_m, score.j_c, params.beta);
  return score;
}

} // namespace seamanship
