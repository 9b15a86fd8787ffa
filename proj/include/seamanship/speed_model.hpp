#pragma once

#include "seamanship/geometry.hpp"
#include "seamanship/risk.hpp"
#include "seamanship/types.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seamanship {

struct SpeedModelParams {
  double dcpa_threshold = 1852.0; // m
  double window = 60.0;           // s, finite-difference window for the rate
  std::size_t min_samples = 30;
  double default_support_lo = -0.05; // m/s^2, used by degenerate models
  double default_support_hi = 0.05;
  double min_bandwidth = 1e-4; // m/s^2
  int grid_n = 64;

  void validate() const;
};

struct EncounterEvent {
  std::string own_id;
  std::string target_id;
  double tdv = 0.0;
  double speed_change = 0.0; // m/s^2 of the own vessel at TDV
  VesselType vessel_type = VesselType::Other;
};

/// Distribution of the speed-change rate at the time of domain violation
/// for one vessel type. Either a truncated Gaussian KDE or, when too few
/// samples are available, a uniform density over the default support.
struct SpeedChangeModel {
  VesselType vessel_type = VesselType::Other;
  std::vector<double> samples;
  double bandwidth = 0.0;
  double support_lo = 0.0;
  double support_hi = 0.0;
  bool degenerate = false;
  /// Kernel mass inside the support; the truncated density is divided by it.
  double support_mass = 1.0;
  // fit metadata
  double window = 0.0;
  double dcpa_threshold = 0.0;

  double support_width() const { return support_hi - support_lo; }
  void validate() const;
};

/// Distance and time to the closest point of approach at constant velocity.
struct Cpa {
  double dcpa = 0.0;
  double tcpa = 0.0;
};
Cpa closest_point_of_approach(const VesselState& own, const VesselState& target);

/// (v(t) - v(t - window)) / window; nullopt when the window leaves the track.
std::optional<double> speed_change_at(const VesselTrack& track, double t, double window);

/// One event per ordered pair whose DCPA drops below the threshold at some
/// common grid time and whose domain is violated (finite TDV). The rate is
/// that of the own vessel, the one whose domain was violated.
std::vector<EncounterEvent> detect_encounters(std::span<const VesselTrack> tracks, const DomainParams& domain,
                                              const SpeedModelParams& params);

/// Silverman's rule of thumb 0.9 min(sd, IQR/1.34) n^(-1/5), falling back to
/// sd, then |x0|, then `floor` when the spread vanishes.
double silverman_bandwidth(std::span<const double> samples, double floor);

/// Fits the model from events of `vessel_type` (others are ignored).
SpeedChangeModel fit_model(std::span<const EncounterEvent> events, VesselType vessel_type,
                           const SpeedModelParams& params);
/// Fits directly from rate samples.
SpeedChangeModel fit_samples(std::vector<double> samples, VesselType vessel_type, const SpeedModelParams& params);
/// Uniform fallback model over the configured default support.
SpeedChangeModel uniform_model(VesselType vessel_type, const SpeedModelParams& params);

double density(const SpeedChangeModel& model, double rate);

/// Trapezoidal density-weighted mean of `risk_of_rate` over grid_n points
/// spanning the model support. Falls back to risk_of_rate(0) when every
/// weight vanishes; a zero-width support collapses to its single point.
double weighted_risk(const SpeedChangeModel& model, int grid_n, const std::function<double(double)>& risk_of_rate);

struct ProbabilisticRisk {
  double wavg = 0.0;
  double min = 0.0;   // over the rate grid
  double max = 0.0;   // over the rate grid
  double deterministic = 0.0;
};

/// Overall collision risk weighted over the target's speed-change density.
ProbabilisticRisk probabilistic_cr(const VesselState& own, const VesselState& target, const SpeedChangeModel& model,
                                   int grid_n, const DomainParams& domain, const RiskParams& params);
ProbabilisticRisk probabilistic_cr(const VesselTrack& track_j, const VesselTrack& track_k, double t,
                                   const SpeedChangeModel& model, int grid_n, const DomainParams& domain,
                                   const RiskParams& params);

using SpeedModelSet = std::map<VesselType, SpeedChangeModel>;

} // namespace seamanship
