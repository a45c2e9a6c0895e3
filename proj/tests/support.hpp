#pragma once

// Shared helpers for the unit and acceptance suites: random world generation
// and brute-force re-checks kept independent of the library's solvers.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "antijam/game.hpp"
#include "antijam/oracle.hpp"
#include "antijam/rng.hpp"
#include "antijam/scenario.hpp"

#ifndef ANTIJAM_SCENARIO_DIR
#define ANTIJAM_SCENARIO_DIR "scenarios"
#endif

namespace testsupport {

inline std::string scenario_path(const std::string& name) {
  return std::string(ANTIJAM_SCENARIO_DIR) + "/" + name;
}

struct WorldOptions {
  double leg_min = 30.0;   // flight leg length range, meters
  double leg_max = 90.0;
  double alt_min = 100.0;
  double alt_span = 50.0;
  double jam_r_min = 40.0;  // jammer distance from the receiver
  double jam_r_max = 80.0;
  bool equal_powers = false;
  double w_margin = 1.1;    // utility_offset = worst case * margin
};

/// Random mission-area-scale world. Geometry, powers and fading vary; the
/// utility offset is set just above the worst-case loss so normalized
/// utilities span a useful range.
inline antijam::Scenario random_world(antijam::Rng& rng, int n_uavs, int n_channels,
                                      int n_periods, const WorldOptions& opt = {}) {
  using namespace antijam;
  Scenario s;
  s.n_uavs = n_uavs;
  s.n_channels = n_channels;
  s.n_periods = n_periods;
  s.fc_pos = {80.0 + rng.uniform01() * 40.0, 120.0 + rng.uniform01() * 40.0};
  {
    const double angle = rng.uniform01() * 6.283185307179586;
    const double r = opt.jam_r_min + rng.uniform01() * (opt.jam_r_max - opt.jam_r_min);
    s.jammer_pos = {s.fc_pos.x + r * std::cos(angle), s.fc_pos.y + r * std::sin(angle)};
  }
  for (int i = 1; i <= n_uavs; ++i) {
    UavTrajectory t;
    t.uav_id = i;
    t.altitude = opt.alt_min + rng.uniform01() * opt.alt_span;
    Vec2 start{rng.uniform01() * 200.0, rng.uniform01() * 100.0};
    Vec2 dest = start;
    if (opt.leg_max > 0.0) {
      const double angle = rng.uniform01() * 6.283185307179586;
      const double len = opt.leg_min + rng.uniform01() * (opt.leg_max - opt.leg_min);
      dest = {start.x + len * std::cos(angle), start.y + len * std::sin(angle)};
    }
    t.waypoints = linear_waypoints(start, dest, n_periods);
    s.trajectories.push_back(std::move(t));
    s.p_uav.push_back(opt.equal_powers ? 10.0 : 8.0 + rng.uniform01() * 4.0);
  }
  s.p_jammer = 20.0 + rng.uniform01() * 20.0;
  s.noise_db = -70.0;
  s.noise_linear = 1e-7;
  for (int k = 0; k < 5; ++k) {
    s.fading_at_jammer.gains.push_back(0.4 + rng.uniform01() * 2.1);
    s.fading_at_fc.gains.push_back(0.4 + rng.uniform01() * 2.1);
    s.fading_at_jammer.probs.push_back(0.2 + rng.uniform01() * 0.8);
    s.fading_at_fc.probs.push_back(0.2 + rng.uniform01() * 0.8);
  }
  auto normalize = [](std::vector<double>& probs) {
    double sum = 0.0;
    for (double p : probs) sum += p;
    for (double& p : probs) p /= sum;
  };
  normalize(s.fading_at_jammer.probs);
  normalize(s.fading_at_fc.probs);
  double worst = 0.0;
  for (int z = 1; z <= n_periods; ++z) {
    worst = std::max(worst, worst_case_total_loss(s, z));
  }
  s.utility_offset = worst * opt.w_margin + 1e-9;
  return s;
}

/// Smallest strictly improving unilateral gain over all non-equilibrium
/// profiles, in normalized-utility units. Infinite when every profile is an
/// equilibrium. Brute force, independent of the oracle module.
inline double payoff_separation(const antijam::PeriodContext& ctx, int jammer_channel) {
  using namespace antijam;
  const int n = ctx.scenario->n_uavs;
  const int m = ctx.scenario->n_channels;
  std::vector<int> profile(static_cast<std::size_t>(n), 1);
  double min_escape = std::numeric_limits<double>::infinity();
  for (;;) {
    JointAction a{profile, jammer_channel};
    const double base = total_loss(ctx, a);
    double best_gain = 0.0;
    for (int i = 0; i < n; ++i) {
      const int current = profile[static_cast<std::size_t>(i)];
      for (int c = 1; c <= m; ++c) {
        if (c == current) continue;
        a.uav_channels[static_cast<std::size_t>(i)] = c;
        best_gain = std::max(best_gain, base - total_loss(ctx, a));
      }
      a.uav_channels[static_cast<std::size_t>(i)] = current;
    }
    if (best_gain > 0.0) min_escape = std::min(min_escape, best_gain);
    int i = n - 1;
    for (; i >= 0; --i) {
      if (profile[static_cast<std::size_t>(i)] < m) {
        ++profile[static_cast<std::size_t>(i)];
        break;
      }
      profile[static_cast<std::size_t>(i)] = 1;
    }
    if (i < 0) break;
  }
  return min_escape / ctx.scenario->utility_offset;
}

/// Stationary, equal-power world whose payoff separation is at least
/// `min_separation` for the returned jammer channel; rejection-sampled.
/// Separation at the scale of the learning step size is what makes the
/// small-step convergence property testable at a fixed step size.
struct SeparatedInstance {
  antijam::Scenario scenario;
  int jammer_channel = 1;
};

inline SeparatedInstance separated_instance(antijam::Rng& rng, double min_separation) {
  using namespace antijam;
  WorldOptions opt;
  opt.leg_min = 0.0;
  opt.leg_max = 0.0;
  opt.alt_min = 60.0;
  opt.alt_span = 240.0;
  opt.equal_powers = true;
  opt.w_margin = 1.02;
  for (;;) {
    const int n = 2 + rng.uniform_int(0, 2);
    const int m = 2 + rng.uniform_int(0, 2);
    Scenario s = random_world(rng, n, m, 1, opt);
    const int jc = rng.uniform_int(1, m);
    PeriodContext ctx = make_period_context(s, 1);
    if (payoff_separation(ctx, jc) >= min_separation) {
      return {std::move(s), jc};
    }
  }
}

/// Independent deviation-proofness re-check through the utility surface.
inline bool deviation_proof_by_utility(const antijam::PeriodContext& ctx,
                                       const std::vector<int>& uav_channels,
                                       int jammer_channel) {
  using namespace antijam;
  JointAction a{uav_channels, jammer_channel};
  const double here = uav_utility(ctx, a, 1);
  for (int i = 1; i <= ctx.scenario->n_uavs; ++i) {
    JointAction moved = a;
    for (int c = 1; c <= ctx.scenario->n_channels; ++c) {
      if (c == a.uav_channels[static_cast<std::size_t>(i - 1)]) continue;
      moved.uav_channels[static_cast<std::size_t>(i - 1)] = c;
      if (uav_utility(ctx, moved, i) > here) return false;
    }
  }
  return true;
}

/// Brute-force loss minimizer over all follower profiles; independent of the
/// oracle's rank arithmetic.
inline std::pair<std::vector<int>, double> brute_force_min_loss(
    const antijam::PeriodContext& ctx, int jammer_channel) {
  using namespace antijam;
  const int n = ctx.scenario->n_uavs;
  const int m = ctx.scenario->n_channels;
  std::vector<int> profile(static_cast<std::size_t>(n), 1);
  std::vector<int> best = profile;
  double best_loss = std::numeric_limits<double>::infinity();
  for (;;) {
    const double loss = total_loss(ctx, JointAction{profile, jammer_channel});
    if (loss < best_loss) {
      best_loss = loss;
      best = profile;
    }
    int i = n - 1;
    for (; i >= 0; --i) {
      if (profile[static_cast<std::size_t>(i)] < m) {
        ++profile[static_cast<std::size_t>(i)];
        break;
      }
      profile[static_cast<std::size_t>(i)] = 1;
    }
    if (i < 0) break;
  }
  return {best, best_loss};
}

}  // namespace testsupport
