#include "rss/boost_mc.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace rss::fusion {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

BoostOutcome boosted_fusion_trial(int m, double eta, std::uint64_t seed, long long trial) {
  if (m < 1) throw std::invalid_argument("fusion attempts m must be >= 1");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta outside [0, 1]");

  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial))));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  BoostOutcome outcome;
  outcome.trial = trial;

  // Retention of all 2m photons; each attempt consumes one photon per side.
  std::vector<bool> left(static_cast<std::size_t>(m)), right(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) left[static_cast<std::size_t>(k)] = uniform(rng) < eta;
  for (int k = 0; k < m; ++k) right[static_cast<std::size_t>(k)] = uniform(rng) < eta;
  for (int k = 0; k < m; ++k) outcome.lost_photons += !left[static_cast<std::size_t>(k)];
  for (int k = 0; k < m; ++k) outcome.lost_photons += !right[static_cast<std::size_t>(k)];

  bool heralded = false;
  for (int k = 0; k < m && !heralded; ++k) {
    ++outcome.attempts_used;
    if (!left[static_cast<std::size_t>(k)] || !right[static_cast<std::size_t>(k)]) {
      outcome.pattern.push_back('l');
      continue;
    }
    if (uniform(rng) < 0.5) {
      outcome.pattern.push_back('S');
      heralded = true;
    } else {
      outcome.pattern.push_back('F');
    }
  }

  // A lost photon anywhere in either vertex collapses its internal
  // entanglement, so an apparently successful herald still fails.
  outcome.success = heralded && outcome.lost_photons == 0;
  if (outcome.success)
    outcome.classification = "success";
  else if (outcome.lost_photons > 0)
    outcome.classification = "failure_loss_collapsed";
  else
    outcome.classification = "failure_exhausted";
  return outcome;
}

BoostRate boosted_fusion_rate(int m, double eta, long long trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  long long successes = 0;
  for (long long k = 0; k < trials; ++k)
    successes += boosted_fusion_trial(m, eta, seed, k).success;
  BoostRate result;
  result.rate = static_cast<double>(successes) / static_cast<double>(trials);
  result.standard_error =
      std::sqrt(result.rate * (1.0 - result.rate) / static_cast<double>(trials));
  return result;
}

std::string outcome_to_json_line(const BoostOutcome& outcome) {
  nlohmann::ordered_json record;
  record["trial"] = outcome.trial;
  record["attempts_used"] = outcome.attempts_used;
  record["lost_photons"] = outcome.lost_photons;
  record["pattern"] = outcome.pattern;
  record["classification"] = outcome.classification;
  return record.dump();
}

}  // namespace rss::fusion
