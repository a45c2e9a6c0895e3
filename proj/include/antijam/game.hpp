#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "antijam/scenario.hpp"

namespace antijam {

/// One channel choice per UAV (1-based indices) plus the jammer's channel.
struct JointAction {
  std::vector<int> uav_channels;
  int jammer_channel = 1;
};

/// Per-period snapshot of everything the game functions need: link gains,
/// flight distances and the scenario constants. Values equal the scenario
/// operations evaluated at the period.
struct PeriodContext {
  const Scenario* scenario = nullptr;
  int period = 0;
  std::vector<double> uav_gain;        // receiver-link gain per UAV
  std::vector<double> flight_dist;     // meters flown per UAV this period
  double jammer_gain_jammer_side = 0;  // gain under the jammer's own estimate
  double jammer_gain_fc_side = 0;      // gain under the receiver's estimate

  double power(int uav_id) const {
    return scenario->p_uav[static_cast<std::size_t>(uav_id - 1)];
  }
  double gain(int uav_id) const {
    return uav_gain[static_cast<std::size_t>(uav_id - 1)];
  }
  double flight(int uav_id) const {
    return flight_dist[static_cast<std::size_t>(uav_id - 1)];
  }
  double flight_term(int uav_id) const {
    return scenario->flight_cost * scenario->balance_factor * flight(uav_id);
  }
};

inline PeriodContext make_period_context(const Scenario& s, int period) {
  if (period < 1 || period > s.n_periods) {
    throw std::out_of_range("period " + std::to_string(period) + " outside 1.." +
                            std::to_string(s.n_periods));
  }
  PeriodContext ctx;
  ctx.scenario = &s;
  ctx.period = period;
  ctx.uav_gain.reserve(static_cast<std::size_t>(s.n_uavs));
  ctx.flight_dist.reserve(static_cast<std::size_t>(s.n_uavs));
  for (int n = 1; n <= s.n_uavs; ++n) {
    ctx.uav_gain.push_back(uav_fc_gain(s, n, period));
    ctx.flight_dist.push_back(flight_distance(s, n, period));
  }
  ctx.jammer_gain_jammer_side = jammer_fc_gain(s, GainModel::JammerSide);
  ctx.jammer_gain_fc_side = jammer_fc_gain(s, GainModel::FcSide);
  return ctx;
}

inline void check_uav_id(const PeriodContext& ctx, int uav_id) {
  if (uav_id < 1 || uav_id > ctx.scenario->n_uavs) {
    throw std::out_of_range("uav_id " + std::to_string(uav_id) + " outside 1.." +
                            std::to_string(ctx.scenario->n_uavs));
  }
}

/// Structural validity of a joint action against a context; violations listed.
inline std::vector<std::string> validate_action(const PeriodContext& ctx,
                                                const JointAction& a) {
  std::vector<std::string> v;
  const int n = ctx.scenario->n_uavs;
  const int m = ctx.scenario->n_channels;
  if (a.uav_channels.size() != static_cast<std::size_t>(n)) {
    v.push_back("expected " + std::to_string(n) + " UAV channels, got " +
                std::to_string(a.uav_channels.size()));
  }
  for (std::size_t i = 0; i < a.uav_channels.size(); ++i) {
    if (a.uav_channels[i] < 1 || a.uav_channels[i] > m) {
      v.push_back("UAV " + std::to_string(i + 1) + " channel outside 1.." +
                  std::to_string(m));
    }
  }
  if (a.jammer_channel < 1 || a.jammer_channel > m) {
    v.push_back("jammer channel outside 1.." + std::to_string(m));
  }
  return v;
}

/// Co-channel indicator: 1 iff both players selected the same channel.
inline int indicator(int x, int y) { return x == y ? 1 : 0; }

/// Received co-channel power from all other UAVs (the SINR denominator form,
/// without the victim's own power).
inline double mutual_interference(const PeriodContext& ctx, const JointAction& a,
                                  int uav_id) {
  check_uav_id(ctx, uav_id);
  const int own = a.uav_channels[static_cast<std::size_t>(uav_id - 1)];
  double sum = 0.0;
  for (int k = 1; k <= ctx.scenario->n_uavs; ++k) {
    if (k == uav_id) continue;
    if (a.uav_channels[static_cast<std::size_t>(k - 1)] == own) {
      sum += ctx.power(k) * ctx.gain(k);
    }
  }
  return sum;
}

/// Received jamming power, using the receiver-side gain estimate.
inline double malicious_interference(const PeriodContext& ctx, const JointAction& a,
                                     int uav_id) {
  check_uav_id(ctx, uav_id);
  const int own = a.uav_channels[static_cast<std::size_t>(uav_id - 1)];
  return ctx.scenario->p_jammer * ctx.jammer_gain_fc_side *
         indicator(own, a.jammer_channel);
}

/// Signal-to-interference-plus-noise ratio. Diagnostic only; the optimization
/// objective works on weighted interference sums instead.
inline double sinr(const PeriodContext& ctx, const JointAction& a, int uav_id) {
  check_uav_id(ctx, uav_id);
  const double signal = ctx.power(uav_id) * ctx.gain(uav_id);
  return signal / (ctx.scenario->noise_linear + mutual_interference(ctx, a, uav_id) +
                   malicious_interference(ctx, a, uav_id));
}

/// One UAV's loss: power-weighted jamming exposure, power-weighted co-channel
/// interference, and flight energy.
inline double uav_loss(const PeriodContext& ctx, const JointAction& a, int uav_id) {
  check_uav_id(ctx, uav_id);
  const double pn = ctx.power(uav_id);
  const int own = a.uav_channels[static_cast<std::size_t>(uav_id - 1)];
  double loss = pn * ctx.scenario->p_jammer * ctx.jammer_gain_fc_side *
                indicator(own, a.jammer_channel);
  for (int k = 1; k <= ctx.scenario->n_uavs; ++k) {
    if (k == uav_id) continue;
    if (a.uav_channels[static_cast<std::size_t>(k - 1)] == own) {
      loss += pn * ctx.power(k) * ctx.gain(k);
    }
  }
  return loss + ctx.flight_term(uav_id);
}

/// System loss: sum of all UAV losses.
inline double total_loss(const PeriodContext& ctx, const JointAction& a) {
  double sum = 0.0;
  for (int n = 1; n <= ctx.scenario->n_uavs; ++n) {
    sum += uav_loss(ctx, a, n);
  }
  return sum;
}

/// Local-altruistic utility: the offset minus the whole system's loss, so it
/// is the same number for every UAV at a fixed joint action.
inline double uav_utility(const PeriodContext& ctx, const JointAction& a, int uav_id) {
  check_uav_id(ctx, uav_id);
  const double u = ctx.scenario->utility_offset - total_loss(ctx, a);
  if (u < 0.0) {
    throw std::domain_error(
        "negative utility: utility_offset is too small for this scenario");
  }
  return u;
}

/// Jammer payoff: power-weighted hits on co-channel UAVs under the jammer's
/// own gain estimate.
inline double jammer_utility(const PeriodContext& ctx, const JointAction& a) {
  double sum = 0.0;
  for (int n = 1; n <= ctx.scenario->n_uavs; ++n) {
    if (a.uav_channels[static_cast<std::size_t>(n - 1)] == a.jammer_channel) {
      sum += ctx.power(n) * ctx.scenario->p_jammer * ctx.jammer_gain_jammer_side;
    }
  }
  return sum;
}

/// Jammer payoff when every UAV is co-channel with it; the analytic maximum,
/// used to normalize learning feedback.
inline double jammer_utility_max(const PeriodContext& ctx) {
  double sum = 0.0;
  for (int n = 1; n <= ctx.scenario->n_uavs; ++n) {
    sum += ctx.power(n) * ctx.scenario->p_jammer * ctx.jammer_gain_jammer_side;
  }
  return sum;
}

/// Interference potential: all ordered co-channel pairs, all jamming hits and
/// all flight costs, summed term type by term type. Numerically this follows
/// a different summation order than total_loss, which groups terms per UAV.
inline double potential(const PeriodContext& ctx, const JointAction& a) {
  double pairwise = 0.0;
  const int n_uavs = ctx.scenario->n_uavs;
  for (int n = 1; n <= n_uavs; ++n) {
    const int own = a.uav_channels[static_cast<std::size_t>(n - 1)];
    for (int k = 1; k <= n_uavs; ++k) {
      if (k == n) continue;
      if (a.uav_channels[static_cast<std::size_t>(k - 1)] == own) {
        pairwise += ctx.power(n) * ctx.power(k) * ctx.gain(k);
      }
    }
  }
  double jamming = 0.0;
  for (int n = 1; n <= n_uavs; ++n) {
    if (a.uav_channels[static_cast<std::size_t>(n - 1)] == a.jammer_channel) {
      jamming += ctx.power(n) * ctx.scenario->p_jammer * ctx.jammer_gain_fc_side;
    }
  }
  double flight = 0.0;
  for (int n = 1; n <= n_uavs; ++n) {
    flight += ctx.flight_term(n);
  }
  return pairwise + jamming + flight;
}

/// Effect of one UAV unilaterally switching channels. A deviator's utility
/// gain equals the drop in the interference potential; the two members are
/// computed over independent summation routes so the identity is a real check.
struct DeviationDelta {
  double utility_gain = 0.0;    // utility(after) - utility(before)
  double potential_drop = 0.0;  // potential(before) - potential(after)
};

inline DeviationDelta deviation_delta(const PeriodContext& ctx, const JointAction& a,
                                      int uav_id, int new_channel) {
  check_uav_id(ctx, uav_id);
  if (new_channel < 1 || new_channel > ctx.scenario->n_channels) {
    throw std::out_of_range("channel " + std::to_string(new_channel) + " outside 1.." +
                            std::to_string(ctx.scenario->n_channels));
  }
  JointAction moved = a;
  moved.uav_channels[static_cast<std::size_t>(uav_id - 1)] = new_channel;
  DeviationDelta d;
  d.utility_gain = uav_utility(ctx, moved, uav_id) - uav_utility(ctx, a, uav_id);
  d.potential_drop = potential(ctx, a) - potential(ctx, moved);
  return d;
}

}  // namespace antijam
