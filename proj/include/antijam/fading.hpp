#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace antijam {

/// Discrete small-scale fading model: gain samples and their probabilities.
struct FadingDistribution {
  std::vector<double> gains;
  std::vector<double> probs;
};

/// Expected fading gain, the dot product of gains and probabilities.
inline double expected_fading(const FadingDistribution& dist) {
  double sum = 0.0;
  for (std::size_t i = 0; i < dist.gains.size(); ++i) {
    sum += dist.gains[i] * dist.probs[i];
  }
  return sum;
}

/// Collects invariant violations; empty result means the distribution is valid.
inline std::vector<std::string> validate_fading(const FadingDistribution& dist,
                                                const std::string& label) {
  std::vector<std::string> issues;
  if (dist.gains.empty()) {
    issues.push_back(label + ": fading distribution is empty");
    return issues;
  }
  if (dist.gains.size() != dist.probs.size()) {
    issues.push_back(label + ": gains and probabilities differ in length");
    return issues;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < dist.gains.size(); ++i) {
    if (!std::isfinite(dist.gains[i]) || dist.gains[i] < 0.0) {
      issues.push_back(label + ": fading gain " + std::to_string(i + 1) +
                       " is not a nonnegative finite value");
    }
    if (!std::isfinite(dist.probs[i]) || dist.probs[i] < 0.0) {
      issues.push_back(label + ": fading probability " + std::to_string(i + 1) +
                       " is not a nonnegative finite value");
    }
    sum += dist.probs[i];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    issues.push_back(label + ": fading probabilities sum to " +
                     std::to_string(sum) + ", expected 1");
  }
  return issues;
}

}  // namespace antijam
