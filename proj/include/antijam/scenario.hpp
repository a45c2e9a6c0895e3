#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "antijam/fading.hpp"
#include "antijam/geometry.hpp"

namespace antijam {

/// Flight path of one UAV: constant altitude, one horizontal waypoint per
/// period boundary (Z+1 waypoints for Z periods).
struct UavTrajectory {
  int uav_id = 0;  // 1-based
  double altitude = 0.0;
  std::vector<Vec2> waypoints;
};

/// Which side's channel estimate to use for the jammer-to-receiver link.
/// The jammer and the receiver cannot train against each other, so each
/// carries its own expected fading model.
enum class GainModel { JammerSide, FcSide };

/// Immutable world description: geometry, trajectories, powers, channel
/// counts and physical constants. Validated once at load; all derived
/// quantities are pure functions of this struct.
struct Scenario {
  int n_uavs = 0;
  int n_channels = 0;
  int n_periods = 0;
  std::vector<UavTrajectory> trajectories;
  Vec2 jammer_pos;
  Vec2 fc_pos;
  std::vector<double> p_uav;  // watts, one per UAV
  double p_jammer = 0.0;      // watts; 0 disables jamming
  double noise_db = 0.0;      // as configured
  double noise_linear = 0.0;  // 10^(noise_db/10), used by the SINR diagnostic
  double alpha = 2.0;         // path-loss exponent
  double gain_scale = 1.1;    // UAV-link gain coefficient
  double flight_cost = 1.0;       // energy per meter flown
  double balance_factor = 1e-3;   // weights flight energy against interference
  double utility_offset = 1.0;    // keeps every reachable utility nonnegative
  double reference_distance = 50.0;  // carried from the source configuration; unused
  FadingDistribution fading_at_jammer;  // the jammer's own estimate
  FadingDistribution fading_at_fc;      // the receiver-side estimate

  /// Copy with a different channel count (used by channel sweeps).
  Scenario with_channels(int m) const {
    Scenario s = *this;
    s.n_channels = m;
    return s;
  }
};

inline void check_uav_period(const Scenario& s, int uav_id, int period) {
  if (uav_id < 1 || uav_id > s.n_uavs) {
    throw std::out_of_range("uav_id " + std::to_string(uav_id) +
                            " outside 1.." + std::to_string(s.n_uavs));
  }
  if (period < 1 || period > s.n_periods) {
    throw std::out_of_range("period " + std::to_string(period) +
                            " outside 1.." + std::to_string(s.n_periods));
  }
}

/// 3D distance from the UAV's period-end waypoint (at altitude) to the
/// receiver's ground position.
inline double uav_fc_distance(const Scenario& s, int uav_id, int period) {
  check_uav_period(s, uav_id, period);
  const UavTrajectory& t = s.trajectories[static_cast<std::size_t>(uav_id - 1)];
  const Vec2& w = t.waypoints[static_cast<std::size_t>(period)];
  return distance({w.x, w.y, t.altitude}, {s.fc_pos.x, s.fc_pos.y, 0.0});
}

/// UAV-to-receiver power gain, gain_scale * d^(-alpha).
inline double uav_fc_gain(const Scenario& s, int uav_id, int period) {
  const double d = uav_fc_distance(s, uav_id, period);
  if (d <= 0.0) {
    throw std::domain_error("degenerate geometry: UAV " + std::to_string(uav_id) +
                            " coincides with the receiver in period " +
                            std::to_string(period));
  }
  return s.gain_scale * std::pow(d, -s.alpha);
}

/// Expected jammer-to-receiver gain under the chosen side's fading model.
/// Uses the horizontal jammer-receiver distance; constant across periods
/// and channels.
inline double jammer_fc_gain(const Scenario& s, GainModel side) {
  const double d = planar_distance(s.jammer_pos, s.fc_pos);
  if (d <= 0.0) {
    throw std::domain_error("degenerate geometry: jammer coincides with the receiver");
  }
  const FadingDistribution& dist =
      side == GainModel::JammerSide ? s.fading_at_jammer : s.fading_at_fc;
  return expected_fading(dist) * std::pow(d, -s.alpha);
}

/// Horizontal distance flown by a UAV during one period.
inline double flight_distance(const Scenario& s, int uav_id, int period) {
  check_uav_period(s, uav_id, period);
  const UavTrajectory& t = s.trajectories[static_cast<std::size_t>(uav_id - 1)];
  return planar_distance(t.waypoints[static_cast<std::size_t>(period - 1)],
                         t.waypoints[static_cast<std::size_t>(period)]);
}

/// Largest total loss reachable in one period. The bound sums every pairwise
/// interference term, every jamming term and all flight costs; the action
/// placing all players on one channel attains it, so it is exact.
inline double worst_case_total_loss(const Scenario& s, int period) {
  double mutual = 0.0;
  double jamming = 0.0;
  double flight = 0.0;
  const double h_fc = jammer_fc_gain(s, GainModel::FcSide);
  for (int n = 1; n <= s.n_uavs; ++n) {
    const double pn = s.p_uav[static_cast<std::size_t>(n - 1)];
    for (int k = 1; k <= s.n_uavs; ++k) {
      if (k == n) continue;
      mutual += pn * s.p_uav[static_cast<std::size_t>(k - 1)] * uav_fc_gain(s, k, period);
    }
    jamming += pn * s.p_jammer * h_fc;
    flight += s.flight_cost * s.balance_factor * flight_distance(s, n, period);
  }
  return mutual + jamming + flight;
}

/// Checks every structural invariant plus the utility-offset bound; returns
/// the list of violations (empty when the scenario is usable). Never throws.
inline std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> v;
  if (s.n_uavs < 1) v.push_back("n_uavs must be at least 1");
  if (s.n_channels < 2) v.push_back("n_channels must be at least 2");
  if (s.n_periods < 1) v.push_back("n_periods must be at least 1");
  if (!finite(s.jammer_pos)) v.push_back("jammer position is not finite");
  if (!finite(s.fc_pos)) v.push_back("receiver position is not finite");
  if (!(s.alpha > 0.0)) v.push_back("path-loss exponent must be positive");
  if (!(s.gain_scale > 0.0)) v.push_back("gain_scale must be positive");
  if (!(s.utility_offset > 0.0)) v.push_back("utility_offset must be positive");
  if (!(s.p_jammer >= 0.0)) v.push_back("jammer power must be nonnegative");
  if (s.p_uav.size() != static_cast<std::size_t>(s.n_uavs)) {
    v.push_back("expected " + std::to_string(s.n_uavs) + " UAV powers, got " +
                std::to_string(s.p_uav.size()));
  } else {
    for (int n = 1; n <= s.n_uavs; ++n) {
      if (!(s.p_uav[static_cast<std::size_t>(n - 1)] > 0.0)) {
        v.push_back("UAV " + std::to_string(n) + " power must be positive");
      }
    }
  }
  if (s.trajectories.size() != static_cast<std::size_t>(s.n_uavs)) {
    v.push_back("expected " + std::to_string(s.n_uavs) + " trajectories, got " +
                std::to_string(s.trajectories.size()));
  } else {
    for (int n = 1; n <= s.n_uavs; ++n) {
      const UavTrajectory& t = s.trajectories[static_cast<std::size_t>(n - 1)];
      const std::string who = "UAV " + std::to_string(n);
      if (!(t.altitude > 0.0) || !std::isfinite(t.altitude)) {
        v.push_back(who + ": altitude must be positive and finite");
      }
      if (t.waypoints.size() != static_cast<std::size_t>(s.n_periods + 1)) {
        v.push_back(who + ": expected " + std::to_string(s.n_periods + 1) +
                    " waypoints, got " + std::to_string(t.waypoints.size()));
        continue;
      }
      for (const Vec2& w : t.waypoints) {
        if (!finite(w)) {
          v.push_back(who + ": waypoint coordinates must be finite");
          break;
        }
      }
    }
  }
  for (const auto& issue : validate_fading(s.fading_at_jammer, "fading (jammer estimate)")) {
    v.push_back(issue);
  }
  for (const auto& issue : validate_fading(s.fading_at_fc, "fading (receiver estimate)")) {
    v.push_back(issue);
  }
  if (!v.empty()) return v;  // derived checks need a structurally sound scenario

  if (planar_distance(s.jammer_pos, s.fc_pos) <= 0.0) {
    v.push_back("jammer and receiver positions coincide");
  }
  for (int z = 1; z <= s.n_periods && v.empty(); ++z) {
    for (int n = 1; n <= s.n_uavs; ++n) {
      if (uav_fc_distance(s, n, z) <= 0.0) {
        v.push_back("UAV " + std::to_string(n) + " coincides with the receiver in period " +
                    std::to_string(z));
      }
    }
  }
  if (!v.empty()) return v;

  double worst = 0.0;
  for (int z = 1; z <= s.n_periods; ++z) {
    worst = std::max(worst, worst_case_total_loss(s, z));
  }
  if (!(s.utility_offset > worst)) {
    v.push_back("utility may be negative: utility_offset " +
                std::to_string(s.utility_offset) +
                " does not exceed the worst-case total loss " + std::to_string(worst));
  }
  return v;
}

/// Copy with overridden powers. Raises utility_offset when the new powers
/// would otherwise push some utility negative, so sweeps over power grids
/// stay valid without touching losses.
inline Scenario with_powers(const Scenario& base, std::optional<double> p_jammer,
                            std::optional<double> p_uav_all) {
  Scenario s = base;
  if (p_jammer) s.p_jammer = *p_jammer;
  if (p_uav_all) {
    std::fill(s.p_uav.begin(), s.p_uav.end(), *p_uav_all);
  }
  double worst = 0.0;
  for (int z = 1; z <= s.n_periods; ++z) {
    worst = std::max(worst, worst_case_total_loss(s, z));
  }
  if (!(s.utility_offset > worst)) {
    s.utility_offset = worst * 1.05;
  }
  return s;
}

/// Straight-line waypoints from start to destination in equal steps.
inline std::vector<Vec2> linear_waypoints(const Vec2& start, const Vec2& dest, int periods) {
  std::vector<Vec2> w;
  w.reserve(static_cast<std::size_t>(periods) + 1);
  for (int z = 0; z <= periods; ++z) {
    const double t = periods == 0 ? 0.0 : static_cast<double>(z) / periods;
    w.push_back({start.x + t * (dest.x - start.x), start.y + t * (dest.y - start.y)});
  }
  return w;
}

}  // namespace antijam
