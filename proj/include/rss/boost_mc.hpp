#pragma once

#include <cstdint>
#include <string>

namespace rss::fusion {

/// One repeat-until-success fusion trial at the logical level: every one of
/// the 2m photons must survive loss (a single lost photon collapses its
/// vertex), and each attempt whose photon pair arrived succeeds with
/// probability 1/2.
struct BoostOutcome {
  long long trial = 0;
  int attempts_used = 0;
  int lost_photons = 0;
  std::string pattern;  // per-attempt record: S success, F failure, l photon lost
  std::string classification;  // success | failure_loss_collapsed | failure_exhausted
  bool success = false;
};

/// Deterministic per-trial stream: trial k draws from a generator seeded by
/// mixing (seed, k), so results are reproducible and order-independent.
BoostOutcome boosted_fusion_trial(int m, double eta, std::uint64_t seed, long long trial);

struct BoostRate {
  double rate = 0.0;
  double standard_error = 0.0;
};

BoostRate boosted_fusion_rate(int m, double eta, long long trials, std::uint64_t seed);

/// {"trial":..,"attempts_used":..,"lost_photons":..,"pattern":..,"classification":..}
std::string outcome_to_json_line(const BoostOutcome& outcome);

}  // namespace rss::fusion
