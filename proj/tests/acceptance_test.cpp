// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Budgets are wall-clock seconds and are part of the checks.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rss/boost_mc.hpp"
#include "rss/formulas.hpp"
#include "rss/fusion.hpp"
#include "rss/protocol.hpp"
#include "rss/targets.hpp"

using namespace rss;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      pass = false;
      if (detail.tellp() > 0) detail << "; ";
      detail << what;
    }
  }
};

using CriterionFn = std::function<void(Outcome&)>;

int g_failures = 0;

void run_criterion(int index, const std::string& name, double budget_seconds,
                   const CriterionFn& fn) {
  Outcome outcome;
  const auto start = std::chrono::steady_clock::now();
  try {
    fn(outcome);
  } catch (const std::exception& error) {
    outcome.pass = false;
    outcome.detail << "exception: " << error.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0 && elapsed > budget_seconds) {
    outcome.pass = false;
    outcome.detail << "over budget (" << elapsed << " s > " << budget_seconds << " s)";
  }
  if (!outcome.pass) ++g_failures;
  std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", outcome.pass ? "PASS" : "FAIL", index,
              name.c_str(), elapsed, outcome.detail.tellp() > 0 ? " -- " : "",
              outcome.detail.str().c_str());
  std::fflush(stdout);
}

ErrorModel mechanism_model(Mechanism mechanism, double a, double b, double fs = 1.0) {
  ErrorModel errors;
  switch (mechanism) {
    case Mechanism::spin_prep:
      errors.spin_init_fidelity = fs;
      errors.step1b = {a, b};
      break;
    case Mechanism::step3:
      errors.step3.fallback = {a, b};
      break;
    case Mechanism::step5a:
      errors.step5a.fallback = {a, b};
      break;
    case Mechanism::step5b:
      errors.step5b.fallback = {a, b};
      break;
    case Mechanism::excitation:
      errors.excitation.fallback = a;
      break;
    case Mechanism::off_resonant:
      errors.off_resonant.fallback = a;
      break;
    case Mechanism::cyclicity:
      errors.cyclicity.fallback = a;
      break;
    case Mechanism::loss:
      errors.loss_early.fallback = a;
      errors.loss_late.fallback = a;
      break;
    case Mechanism::boost:
      break;
  }
  return errors;
}

// ---------------------------------------------------------------------------

void criterion_ideal_correctness(Outcome& outcome) {
  for (int n = 1; n <= 4; ++n) {
    for (int m = 1; m <= 3; ++m) {
      for (Step5bMode mode : {Step5bMode::alternating, Step5bMode::consistent}) {
        const ProtocolConfig config = ProtocolConfig::uniform(n, m, mode);
        const double overlap = generation_fidelity(config, ErrorModel{});
        std::ostringstream what;
        what << "N=" << n << " M=" << m
             << (mode == Step5bMode::alternating ? " alternating" : " consistent")
             << " overlap off by " << std::abs(overlap - 1.0);
        outcome.require(std::abs(overlap - 1.0) < 1e-10, what.str());
      }
    }
  }
}

void criterion_formula_agreement(Outcome& outcome) {
  const double angles[] = {-kPi / 2, -kPi / 4, 0.0, kPi / 4, kPi / 2};
  const double probabilities[] = {0.0, 0.25, 0.5, 0.9, 1.0};

  std::vector<ProtocolConfig> uniform;
  for (int n = 1; n <= 3; ++n)
    for (int m = 1; m <= 2; ++m) uniform.push_back(ProtocolConfig::uniform(n, m));

  std::vector<ProtocolConfig> blocked;  // shapes with inter-block flips
  {
    ProtocolConfig a;
    a.vertex_count = 1;
    a.blocks = {{1, 1}};
    blocked.push_back(a);
    ProtocolConfig b;
    b.vertex_count = 2;
    b.blocks = {{1, 1}, {1, 1}};
    blocked.push_back(b);
    ProtocolConfig c;
    c.vertex_count = 2;
    c.blocks = {{1, 2}, {2}};
    blocked.push_back(c);
  }

  const auto check_grid = [&](Mechanism mechanism, const std::vector<ProtocolConfig>& configs,
                              bool angle_grid) {
    double worst = 0.0;
    int points = 0;
    for (const ProtocolConfig& config : configs) {
      if (angle_grid) {
        for (double dy : angles)
          for (double dz : angles) {
            const ErrorModel errors = mechanism_model(mechanism, dy, dz);
            worst = std::max(worst, std::abs(formulas::closed_form(mechanism, config, errors) -
                                             generation_fidelity(config, errors)));
            ++points;
          }
      } else {
        for (double p : probabilities) {
          const ErrorModel errors = mechanism_model(mechanism, p, 0.0);
          worst = std::max(worst, std::abs(formulas::closed_form(mechanism, config, errors) -
                                           generation_fidelity(config, errors)));
          ++points;
        }
      }
    }
    std::ostringstream what;
    what << to_string(mechanism) << ": max diff " << worst << " over " << points << " points";
    outcome.require(points >= 27 && worst < 1e-9, what.str());
  };

  // Spin preparation sweeps all three of its parameters.
  {
    double worst = 0.0;
    int points = 0;
    for (const ProtocolConfig& config : uniform) {
      for (double fs : probabilities) {
        for (double dy : angles) {
          for (double dz : angles) {
            const ErrorModel errors = mechanism_model(Mechanism::spin_prep, dy, dz, fs);
            worst = std::max(worst,
                             std::abs(formulas::closed_form(Mechanism::spin_prep, config, errors) -
                                      generation_fidelity(config, errors)));
            ++points;
          }
        }
      }
    }
    std::ostringstream what;
    what << "spin_prep: max diff " << worst << " over " << points << " points";
    outcome.require(points >= 27 && worst < 1e-9, what.str());
  }

  check_grid(Mechanism::step3, uniform, true);
  check_grid(Mechanism::step3, blocked, true);
  check_grid(Mechanism::step5a, blocked, true);
  check_grid(Mechanism::step5b, uniform, true);
  check_grid(Mechanism::excitation, uniform, false);
  check_grid(Mechanism::off_resonant, uniform, false);
  check_grid(Mechanism::cyclicity, uniform, false);
  check_grid(Mechanism::loss, uniform, false);
}

void criterion_limiting_cases(Outcome& outcome) {
  // Single vertex of three qubits: the four-party GHZ stabilizers after the
  // canonical local rotation on the spin qubit.
  {
    const ProtocolConfig config = ProtocolConfig::uniform(1, 3);
    const Mixture out = run_protocol(config, ErrorModel{});
    QubitState encoded = to_computational(out.components().front().state, config);
    if (spin_phase_negative(config)) encoded = encoded.pauli_z(0);
    const QubitState ghz = encoded.hadamard(0);
    const std::pair<std::uint64_t, std::uint64_t> stabilizers[] = {
        {0b1111, 0},  // X X X X
        {0, 0b0011},  // Z_s Z_1
        {0, 0b0110},  // Z_1 Z_2
        {0, 0b1100},  // Z_2 Z_3
    };
    for (const auto& [x, z] : stabilizers) {
      const double expectation = ghz.pauli_expectation(x, z);
      std::ostringstream what;
      what << "GHZ stabilizer (x=" << x << ", z=" << z << ") = " << expectation;
      outcome.require(std::abs(expectation - 1.0) < 1e-10, what.str());
    }
  }

  // Three single-qubit vertices: the four-node path-graph stabilizers
  // (chain V1 - V2 - V3 - spin).
  {
    const ProtocolConfig config = ProtocolConfig::uniform(3, 1);
    const Mixture out = run_protocol(config, ErrorModel{});
    QubitState encoded = to_computational(out.components().front().state, config);
    if (spin_phase_negative(config)) encoded = encoded.pauli_z(0);
    const auto bit = [](int q) { return std::uint64_t{1} << q; };
    const std::pair<std::uint64_t, std::uint64_t> stabilizers[] = {
        {bit(1), bit(2)},
        {bit(2), bit(1) | bit(3)},
        {bit(3), bit(2) | bit(0)},
        {bit(0), bit(3)},
    };
    for (const auto& [x, z] : stabilizers) {
      const double expectation = encoded.pauli_expectation(x, z);
      std::ostringstream what;
      what << "cluster stabilizer (x=" << x << ", z=" << z << ") = " << expectation;
      outcome.require(std::abs(expectation - 1.0) < 1e-10, what.str());
    }
  }
}

void criterion_fusion_baseline(Outcome& outcome) {
  for (int m : {1, 2}) {
    fusion::FusionScenario scenario;
    scenario.kind = fusion::ScenarioKind::ideal;
    scenario.qubits_per_vertex = m;
    const fusion::FusionReport report = fusion::run_fusion_scenario(scenario);
    std::ostringstream what;
    what << "M=" << m << " success " << report.success_probability;
    outcome.require(std::abs(report.success_probability - 0.5) < 1e-10, what.str());
  }
}

void criterion_fusion_under_errors(Outcome& outcome) {
  // One-sided flip error: no success, failures heralded by 1 or 3 photons.
  {
    fusion::FusionScenario scenario;
    scenario.kind = fusion::ScenarioKind::step3_one_side;
    scenario.qubits_per_vertex = 2;
    const fusion::FusionReport report = fusion::run_fusion_scenario(scenario);
    outcome.require(report.success_probability < 1e-12, "one-sided flip: success mass nonzero");
    for (const auto& event : report.events) {
      int clicked = 0;
      for (const auto& pc : event.counts) clicked += pc.count;
      if (clicked != 1 && clicked != 3)
        outcome.require(false, "one-sided flip: " + std::to_string(clicked) + "-photon pattern");
    }
  }

  // Both-sided flip error: mass appears on patterns that are failures in the
  // error-free case (two photons at one detector or on one rail pair).
  {
    fusion::FusionScenario scenario;
    scenario.kind = fusion::ScenarioKind::step3_both;
    scenario.qubits_per_vertex = 2;
    const fusion::FusionReport report = fusion::run_fusion_scenario(scenario);
    double ideal_failure_pattern_mass = 0.0;
    for (const auto& event : report.events) {
      int clicked = 0;
      for (const auto& pc : event.counts) clicked += pc.count;
      if (clicked == 2) ideal_failure_pattern_mass += event.probability;
    }
    outcome.require(ideal_failure_pattern_mass > 0.1,
                    "both-sided flip: no mass on two-photon patterns");
  }

  // Inefficient excitation: single-photon success at exactly two detectors.
  {
    fusion::FusionScenario scenario;
    scenario.kind = fusion::ScenarioKind::inefficient_excitation;
    scenario.qubits_per_vertex = 2;
    scenario.probability = 0.5;
    const fusion::FusionReport report = fusion::run_fusion_scenario(scenario);
    std::map<fusion::Port, bool> success_port;
    for (const auto& event : report.events) {
      int clicked = 0;
      for (const auto& pc : event.counts) clicked += pc.count;
      if (clicked != 1) continue;
      if (event.classification == fusion::Classification::success_ac_bd ||
          event.classification == fusion::Classification::success_ad_bc)
        success_port[event.counts.front().port] = true;
    }
    std::ostringstream what;
    what << "single-photon success detectors: " << success_port.size();
    outcome.require(success_port.size() == 2, what.str());
  }

  // Off-resonant extra photons on both sides leave success at one half.
  {
    fusion::FusionScenario scenario;
    scenario.kind = fusion::ScenarioKind::off_resonant_both;
    scenario.qubits_per_vertex = 2;
    scenario.probability = 1.0;
    const fusion::FusionReport report = fusion::run_fusion_scenario(scenario);
    std::ostringstream what;
    what << "off-resonant success " << report.success_probability;
    outcome.require(std::abs(report.success_probability - 0.5) < 1e-10, what.str());
  }

  // V-polarized photons: never success with discrimination, ambiguous without.
  {
    fusion::FusionScenario scenario;
    scenario.kind = fusion::ScenarioKind::cyclicity;
    scenario.qubits_per_vertex = 1;
    scenario.probability = 0.9;
    const fusion::FusionReport with = fusion::run_fusion_scenario(scenario);
    double v_success = 0.0;
    bool saw_v = false;
    for (const auto& event : with.events) {
      if (!event.saw_nonresonant) continue;
      saw_v = true;
      if (event.classification == fusion::Classification::success_ac_bd ||
          event.classification == fusion::Classification::success_ad_bc)
        v_success += event.probability;
    }
    outcome.require(saw_v, "cyclicity scenario produced no V photons");
    outcome.require(v_success < 1e-12, "V-channel events classified as success");

    scenario.channel_discrimination = false;
    const fusion::FusionReport without = fusion::run_fusion_scenario(scenario);
    for (const auto& event : without.events) {
      if (event.saw_nonresonant &&
          event.classification != fusion::Classification::ambiguous)
        outcome.require(false, "V-channel event not reclassified ambiguous");
    }
  }
}

void criterion_boost_numbers(Outcome& outcome) {
  const double standard = formulas::boosted_fusion_success(1, 0.95);
  outcome.require(std::abs(standard - 0.45125) < 1e-12,
                  "standard fusion at 0.95 is " + std::to_string(standard));

  int best_m = 1;
  double best = 0.0;
  for (int m = 1; m <= 10; ++m) {
    const double value = formulas::boosted_fusion_success(m, 0.95);
    if (value > best) {
      best = value;
      best_m = m;
    }
  }
  outcome.require(best_m == 3, "optimal m is " + std::to_string(best_m));
  outcome.require(std::abs(best - 0.6432) < 5e-4, "optimal value is " + std::to_string(best));

  const long long trials = 1000000;
  const fusion::BoostRate rate = fusion::boosted_fusion_rate(3, 0.95, trials, 20240517);
  const double bound = 4.0 / std::sqrt(static_cast<double>(trials));
  std::ostringstream what;
  what << "Monte Carlo " << rate.rate << " vs closed form " << best;
  outcome.require(std::abs(rate.rate - best) < bound, what.str());
}

void criterion_threshold(Outcome& outcome) {
  outcome.require(formulas::optimal_fusion_m(0.80) == 1,
                  "optimal m at 0.80 is " + std::to_string(formulas::optimal_fusion_m(0.80)));
  outcome.require(formulas::optimal_fusion_m(0.95) > 1,
                  "optimal m at 0.95 is " + std::to_string(formulas::optimal_fusion_m(0.95)));
}

void criterion_cyclicity_structure(Outcome& outcome) {
  // Single excitation pulses: three one-qubit blocks.
  {
    ProtocolConfig config;
    config.vertex_count = 1;
    config.blocks = {{1, 1, 1}};
    ErrorModel errors;
    errors.cyclicity.fallback = 0.9;
    const Mixture out = run_protocol(config, errors);
    for (const auto& [ket, amp] : out.components().front().state.terms()) {
      for (int m = 1; m <= 3; ++m) {
        int photons = 0;
        for (const auto& [a, count] : ket.occupations())
          if (a.qubit == m) photons += count;
        if (photons == 0) outcome.require(false, "single-pulse run left a qubit in vacuum");
        ModeAddress early{1, static_cast<std::uint16_t>(m), TimeBin::early, Channel::resonant_h};
        ModeAddress late{1, static_cast<std::uint16_t>(m), TimeBin::late, Channel::resonant_h};
        if (ket.count(early) > 0 && ket.count(late) > 0)
          outcome.require(false, "single-pulse run produced a double resonant qubit");
      }
    }
  }

  // Consecutive excitations: a block of three.
  {
    const ProtocolConfig config = ProtocolConfig::uniform(1, 3);
    ErrorModel errors;
    errors.cyclicity.fallback = 0.9;
    const Mixture out = run_protocol(config, errors);
    bool saw_double = false;
    for (const auto& [ket, amp] : out.components().front().state.terms()) {
      int first_flip = 0;
      for (int m = 1; m <= 3 && first_flip == 0; ++m) {
        ModeAddress flipped{1, static_cast<std::uint16_t>(m), TimeBin::early,
                            Channel::orthogonal_v};
        if (ket.count(flipped) > 0) first_flip = m;
      }
      if (first_flip > 0) {
        for (int m = first_flip + 1; m <= 3; ++m) {
          ModeAddress early{1, static_cast<std::uint16_t>(m), TimeBin::early, Channel::resonant_h};
          if (ket.count(early) > 0)
            outcome.require(false, "early bin populated after an early-bin flip");
        }
      }
      for (int m = 1; m <= 3; ++m) {
        ModeAddress early{1, static_cast<std::uint16_t>(m), TimeBin::early, Channel::resonant_h};
        ModeAddress late{1, static_cast<std::uint16_t>(m), TimeBin::late, Channel::resonant_h};
        if (ket.count(early) == 1 && ket.count(late) == 1) saw_double = true;
      }
    }
    outcome.require(saw_double, "consecutive excitations produced no two-photon component");
  }
}

void criterion_scaling(Outcome& outcome) {
  struct Column {
    Mechanism mechanism;
    double per_photon;  // expected single-photon fidelity factor
    ErrorModel errors;
    std::string name;
  };
  std::vector<Column> columns;
  for (double c : {0.9, 0.95, 0.99}) {
    Column col{Mechanism::cyclicity, c, mechanism_model(Mechanism::cyclicity, c, 0.0),
               "cyclicity C=" + format_double(c)};
    columns.push_back(col);
  }
  {
    const double dy = 0.2, dz = 0.1;
    const double per =
        std::pow(std::cos(dy / 2) * std::cos(dz / 2), 2.0);
    columns.push_back(
        {Mechanism::step3, per, mechanism_model(Mechanism::step3, dy, dz), "flip error"});
  }
  columns.push_back({Mechanism::excitation, 0.95,
                     mechanism_model(Mechanism::excitation, 0.95, 0.0), "excitation 0.95"});
  columns.push_back({Mechanism::loss, 0.99, mechanism_model(Mechanism::loss, 0.01, 0.0),
                     "loss q=0.99"});

  for (const Column& column : columns) {
    double previous = 1.0;
    double product = 1.0;
    for (int photons = 1; photons <= 60; ++photons) {
      const ProtocolConfig config = ProtocolConfig::uniform(photons, 1);
      const double closed = formulas::closed_form(column.mechanism, config, column.errors);
      product *= column.per_photon;
      if (std::abs(closed - product) > 1e-12)
        outcome.require(false, column.name + ": closed form departs from the product form at " +
                                   std::to_string(photons) + " photons");
      if (closed > previous + 1e-15)
        outcome.require(false, column.name + ": not monotone at " + std::to_string(photons));
      previous = closed;
    }
  }

  // Simulated spot checks at 10 photons and below.
  const auto spot = [&](Mechanism mechanism, int photons, const ErrorModel& errors) {
    const ProtocolConfig config = ProtocolConfig::uniform(photons, 1);
    const double closed = formulas::closed_form(mechanism, config, errors);
    const double simulated = generation_fidelity(config, errors);
    std::ostringstream what;
    what << to_string(mechanism) << " spot check at " << photons << " photons: diff "
         << std::abs(closed - simulated);
    outcome.require(std::abs(closed - simulated) < 1e-9, what.str());
  };
  spot(Mechanism::step3, 8, mechanism_model(Mechanism::step3, 0.2, 0.1));
  spot(Mechanism::excitation, 10, mechanism_model(Mechanism::excitation, 0.95, 0.0));
  spot(Mechanism::cyclicity, 6, mechanism_model(Mechanism::cyclicity, 0.95, 0.0));
  spot(Mechanism::loss, 8, mechanism_model(Mechanism::loss, 0.01, 0.0));
}

}  // namespace

int main() {
  run_criterion(1, "ideal-protocol correctness (24 configurations)", 10.0,
                criterion_ideal_correctness);
  run_criterion(2, "closed form vs simulation agreement", 60.0, criterion_formula_agreement);
  run_criterion(3, "GHZ and linear-cluster limiting cases", 0.0, criterion_limiting_cases);
  run_criterion(4, "ideal fusion success probability 1/2", 0.0, criterion_fusion_baseline);
  run_criterion(5, "fusion under generation errors", 0.0, criterion_fusion_under_errors);
  run_criterion(6, "boosted fusion numbers at 95% efficiency", 30.0, criterion_boost_numbers);
  run_criterion(7, "boost threshold behavior", 0.0, criterion_threshold);
  run_criterion(8, "cyclicity structural properties", 0.0, criterion_cyclicity_structure);
  run_criterion(9, "scaling columns over 1..60 photons", 0.0, criterion_scaling);

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
