#include "seamanship/speed_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace seamanship {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Linear-interpolated sample quantile (Hyndman-Fan type 7).
double quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct RateGrid {
  std::vector<double> rates;
  std::vector<double> weights;
};

RateGrid rate_grid(const SpeedChangeModel& model, int grid_n) {
  if (grid_n < 2) throw ConfigError("speed-change grid needs at least 2 points");
  RateGrid grid;
  const auto n = static_cast<std::size_t>(grid_n);
  grid.rates.resize(n);
  grid.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rate =
        model.support_lo + model.support_width() * static_cast<double>(i) / static_cast<double>(n - 1);
    const double trapezoid = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    grid.rates[i] = rate;
    grid.weights[i] = density(model, rate) * trapezoid;
  }
  return grid;
}

} // namespace

void SpeedModelParams::validate() const {
  if (!(dcpa_threshold > 0.0)) throw ConfigError("speed_model.dcpa_threshold must be positive");
  if (!(window > 0.0)) throw ConfigError("speed_model.window must be positive");
  if (!(default_support_lo < default_support_hi)) throw ConfigError("speed_model default support is empty");
  if (!(min_bandwidth > 0.0)) throw ConfigError("speed_model.min_bandwidth must be positive");
  if (grid_n < 2) throw ConfigError("speed_model.grid_n must be at least 2");
}

void SpeedChangeModel::validate() const {
  if (!std::isfinite(support_lo) || !std::isfinite(support_hi) || support_lo > support_hi)
    throw ConfigError("speed model support must be a finite interval");
  if (!degenerate) {
    if (!(bandwidth > 0.0)) throw ConfigError("speed model bandwidth must be positive");
    if (samples.empty()) throw ConfigError("speed model has no samples");
    if (!(support_mass > 0.0)) throw ConfigError("speed model support holds no kernel mass");
  }
}

Cpa closest_point_of_approach(const VesselState& own, const VesselState& target) {
  const LocalPoint r = target.position - own.position;
  const LocalPoint v = target.velocity() - own.velocity();
  const double v2 = v.squaredNorm();
  double tcpa = v2 > 1e-12 ? -r.dot(v) / v2 : 0.0;
  tcpa = std::max(tcpa, 0.0);
  return {(r + tcpa * v).norm(), tcpa};
}

std::optional<double> speed_change_at(const VesselTrack& track, double t, double window) {
  if (!(window > 0.0)) throw ConfigError("speed-change window must be positive");
  if (!track.covers(t) || !track.covers(t - window)) return std::nullopt;
  return (track.state_at(t).speed - track.state_at(t - window).speed) / window;
}

std::vector<EncounterEvent> detect_encounters(std::span<const VesselTrack> tracks, const DomainParams& domain,
                                              const SpeedModelParams& params) {
  std::vector<EncounterEvent> events;
  for (const VesselTrack& own : tracks) {
    for (const VesselTrack& target : tracks) {
      if (&own == &target || own.empty() || target.empty()) continue;

      bool close_approach = false;
      for (const VesselState& s : own.states()) {
        if (!target.covers(s.time)) continue;
        if (closest_point_of_approach(s, target.state_at(s.time)).dcpa < params.dcpa_threshold) {
          close_approach = true;
          break;
        }
      }
      if (!close_approach) continue;

      const std::optional<double> tdv = find_tdv(own, target, domain);
      if (!tdv) continue;
      const std::optional<double> rate = speed_change_at(own, *tdv, params.window);
      if (!rate) continue;
      events.push_back({own.id(), target.id(), *tdv, *rate, own.vessel_type()});
    }
  }
  return events;
}

double silverman_bandwidth(std::span<const double> samples, double floor) {
  const std::size_t n = samples.size();
  if (n == 0) return floor;
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : sorted) ss += (x - mean) * (x - mean);
  const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);

  // Spreads at rounding level of the data count as zero.
  const double tiny = 1e-12 * std::max(std::abs(sorted.front()), std::abs(sorted.back()));
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > tiny)) spread = sd;
  if (!(spread > tiny)) spread = std::abs(sorted.front());
  if (!(spread > 0.0)) return floor;
  return std::max(0.9 * spread * std::pow(static_cast<double>(n), -0.2), floor);
}

SpeedChangeModel uniform_model(VesselType vessel_type, const SpeedModelParams& params) {
  SpeedChangeModel model;
  model.vessel_type = vessel_type;
  model.degenerate = true;
  model.support_lo = params.default_support_lo;
  model.support_hi = params.default_support_hi;
  model.window = params.window;
  model.dcpa_threshold = params.dcpa_threshold;
  return model;
}

SpeedChangeModel fit_samples(std::vector<double> samples, VesselType vessel_type, const SpeedModelParams& params) {
  std::erase_if(samples, [](double x) { return !std::isfinite(x); });
  if (samples.size() < params.min_samples || samples.empty()) {
    SpeedChangeModel model = uniform_model(vessel_type, params);
    model.samples = std::move(samples);
    return model;
  }

  SpeedChangeModel model;
  model.vessel_type = vessel_type;
  model.window = params.window;
  model.dcpa_threshold = params.dcpa_threshold;
  model.bandwidth = silverman_bandwidth(samples, params.min_bandwidth);
  const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
  model.support_lo = *lo - 3.0 * model.bandwidth;
  model.support_hi = *hi + 3.0 * model.bandwidth;

  double mass = 0.0;
  for (double x : samples)
    mass += normal_cdf((model.support_hi - x) / model.bandwidth) - normal_cdf((model.support_lo - x) / model.bandwidth);
  model.support_mass = mass / static_cast<double>(samples.size());
  model.samples = std::move(samples);
  return model;
}

SpeedChangeModel fit_model(std::span<const EncounterEvent> events, VesselType vessel_type,
                           const SpeedModelParams& params) {
  std::vector<double> samples;
  for (const EncounterEvent& e : events)
    if (e.vessel_type == vessel_type) samples.push_back(e.speed_change);
  return fit_samples(std::move(samples), vessel_type, params);
}

double density(const SpeedChangeModel& model, double rate) {
  if (rate < model.support_lo || rate > model.support_hi) return 0.0;
  if (model.degenerate) {
    const double width = model.support_width();
    return width > 0.0 ? 1.0 / width : 0.0;
  }
  double sum = 0.0;
  for (double x : model.samples) {
    const double z = (rate - x) / model.bandwidth;
    sum += std::exp(-0.5 * z * z);
  }
  return sum * kInvSqrt2Pi /
         (static_cast<double>(model.samples.size()) * model.bandwidth * model.support_mass);
}

double weighted_risk(const SpeedChangeModel& model, int grid_n, const std::function<double(double)>& risk_of_rate) {
  if (model.support_width() <= 0.0) return risk_of_rate(model.support_lo);
  const RateGrid grid = rate_grid(model, grid_n);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < grid.rates.size(); ++i) {
    if (grid.weights[i] <= 0.0) continue;
    num += grid.weights[i] * risk_of_rate(grid.rates[i]);
    den += grid.weights[i];
  }
  if (!(den > 0.0)) return risk_of_rate(0.0);
  return num / den;
}

ProbabilisticRisk probabilistic_cr(const VesselState& own, const VesselState& target, const SpeedChangeModel& model,
                                   int grid_n, const DomainParams& domain, const RiskParams& params) {
  ProbabilisticRisk out;
  auto cr = [&](double rate) { return overall_collision_risk(own, target, rate, domain, params); };
  out.deterministic = cr(0.0);
  if (model.support_width() <= 0.0) {
    out.wavg = out.min = out.max = cr(model.support_lo);
    return out;
  }

  const RateGrid grid = rate_grid(model, grid_n);
  double num = 0.0;
  double den = 0.0;
  out.min = 1.0;
  out.max = 0.0;
  for (std::size_t i = 0; i < grid.rates.size(); ++i) {
    const double risk = cr(grid.rates[i]);
    out.min = std::min(out.min, risk);
    out.max = std::max(out.max, risk);
    num += grid.weights[i] * risk;
    den += grid.weights[i];
  }
  out.wavg = den > 0.0 ? num / den : out.deterministic;
  return out;
}

ProbabilisticRisk probabilistic_cr(const VesselTrack& track_j, const VesselTrack& track_k, double t,
                                   const SpeedChangeModel& model, int grid_n, const DomainParams& domain,
                                   const RiskParams& params) {
  return probabilistic_cr(track_j.state_at(t), track_k.state_at(t), model, grid_n, domain, params);
}

} // namespace seamanship
