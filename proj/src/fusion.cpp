#include "rss/fusion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "rss/boost_mc.hpp"
#include "rss/formulas.hpp"

namespace rss::fusion {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

constexpr Channel kOpticalChannels[] = {Channel::resonant_h, Channel::detuned_h,
                                        Channel::orthogonal_v};

struct RailMode {
  std::uint16_t vertex = 0;
  std::uint16_t qubit = 0;
  TimeBin bin = TimeBin::early;
};

ModeAddress rail_address(const RailMode& rail, Channel channel) {
  ModeAddress addr;
  addr.vertex = rail.vertex;
  addr.qubit = rail.qubit;
  addr.bin = rail.bin;
  addr.channel = channel;
  return addr;
}

double factorial(int n) {
  double value = 1.0;
  for (int i = 2; i <= n; ++i) value *= i;
  return value;
}

/// Rewrites the creation operators of `rails` through `matrix` (the rule
/// in_i^dag = sum_j matrix[i][j] out_j^dag), channel by channel, expanding
/// multi-photon monomials with the sqrt(n!) mode normalization.
template <std::size_t K>
PureState apply_rail_unitary(const PureState& state, const std::array<RailMode, K>& rails,
                             const std::array<std::array<double, K>, K>& matrix) {
  using Mono = std::array<std::uint8_t, K>;
  PureState::TermMap result;

  for (const auto& [ket, amp] : state.terms()) {
    // Split off the rail occupations of the optical channels.
    BasisKet base = ket;
    std::array<std::array<int, K>, 3> counts{};
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < K; ++i) {
        const ModeAddress addr = rail_address(rails[i], kOpticalChannels[c]);
        const int n = ket.count(addr);
        if (n > 0) {
          counts[c][i] = n;
          base = base.add_photons(addr, -n);
        }
      }
    }

    std::vector<std::pair<BasisKet, Amplitude>> branches{{base, amp}};
    for (std::size_t c = 0; c < 3; ++c) {
      int total = 0;
      double in_norm = 1.0;
      for (std::size_t i = 0; i < K; ++i) {
        total += counts[c][i];
        in_norm *= factorial(counts[c][i]);
      }
      if (total == 0) continue;

      // Polynomial in the output operators.
      std::map<Mono, double> poly{{Mono{}, 1.0 / std::sqrt(in_norm)}};
      for (std::size_t i = 0; i < K; ++i) {
        for (int photon = 0; photon < counts[c][i]; ++photon) {
          std::map<Mono, double> next;
          for (const auto& [mono, coeff] : poly) {
            for (std::size_t j = 0; j < K; ++j) {
              if (matrix[i][j] == 0.0) continue;
              Mono grown = mono;
              ++grown[j];
              next[grown] += coeff * matrix[i][j];
            }
          }
          poly = std::move(next);
        }
      }

      std::vector<std::pair<BasisKet, Amplitude>> grown;
      for (const auto& [partial, partial_amp] : branches) {
        for (const auto& [mono, coeff] : poly) {
          if (coeff == 0.0) continue;
          double out_norm = 1.0;
          BasisKet target = partial;
          for (std::size_t j = 0; j < K; ++j) {
            if (mono[j] == 0) continue;
            out_norm *= factorial(mono[j]);
            target = target.add_photons(rail_address(rails[j], kOpticalChannels[c]), mono[j]);
          }
          grown.emplace_back(std::move(target), partial_amp * coeff * std::sqrt(out_norm));
        }
      }
      branches = std::move(grown);
    }

    for (auto& [branch, branch_amp] : branches) result[branch] += branch_amp;
  }
  return PureState::from_terms(std::move(result));
}

std::array<RailMode, 4> port_rails() {
  return {RailMode{0, 1, TimeBin::early}, RailMode{0, 1, TimeBin::late},
          RailMode{0, 2, TimeBin::early}, RailMode{0, 2, TimeBin::late}};
}

}  // namespace

const char* to_string(Port port) {
  switch (port) {
    case Port::a: return "A";
    case Port::b: return "B";
    case Port::c: return "C";
    case Port::d: return "D";
  }
  return "?";
}

ModeAddress port_address(Port port, Channel channel) {
  const auto rails = port_rails();
  return rail_address(rails[static_cast<std::size_t>(port)], channel);
}

PureState to_dual_rail(const PureState& state, QubitRef qubit, int rail_pair) {
  if (rail_pair != 1 && rail_pair != 2)
    throw std::invalid_argument("rail pair must be 1 (ports A/B) or 2 (ports C/D)");
  if (qubit.vertex < 1) throw std::invalid_argument("to_dual_rail expects a protocol qubit");

  PureState::TermMap terms;
  for (const auto& [ket, amp] : state.terms()) {
    BasisKet moved(ket.spin());
    for (const auto& [addr, count] : ket.occupations()) {
      ModeAddress target = addr;
      if (addr.vertex == static_cast<std::uint16_t>(qubit.vertex) &&
          addr.qubit == static_cast<std::uint16_t>(qubit.qubit) &&
          addr.channel != Channel::loss) {
        target.vertex = 0;
        target.qubit = static_cast<std::uint16_t>(rail_pair);
      } else if (addr.vertex == 0 && addr.qubit == static_cast<std::uint16_t>(rail_pair)) {
        throw std::invalid_argument("port collision: rail pair already occupied");
      }
      moved = moved.add_photons(target, count);
    }
    terms[moved] += amp;
  }
  return PureState::from_terms(std::move(terms));
}

PureState apply_fusion_transfer(const PureState& state) {
  static const std::array<std::array<double, 4>, 4> kTransfer = {{
      {0.5, 0.5, 0.5, 0.5},
      {0.5, 0.5, -0.5, -0.5},
      {0.5, -0.5, 0.5, -0.5},
      {0.5, -0.5, -0.5, 0.5},
  }};
  return apply_rail_unitary(state, port_rails(), kTransfer);
}

PureState apply_dual_rail_hadamard(const PureState& state, QubitRef qubit) {
  const std::array<RailMode, 2> rails = {
      RailMode{static_cast<std::uint16_t>(qubit.vertex), static_cast<std::uint16_t>(qubit.qubit),
               TimeBin::early},
      RailMode{static_cast<std::uint16_t>(qubit.vertex), static_cast<std::uint16_t>(qubit.qubit),
               TimeBin::late}};
  static const std::array<std::array<double, 2>, 2> kMixer = {{
      {kInvSqrt2, kInvSqrt2},
      {kInvSqrt2, -kInvSqrt2},
  }};
  return apply_rail_unitary(state, rails, kMixer);
}

std::string pattern_string(const std::vector<PortCount>& counts, bool with_channel) {
  std::string out;
  for (const auto& pc : counts) {
    if (!out.empty()) out += ' ';
    out += to_string(pc.port);
    if (with_channel) {
      out += ':';
      switch (pc.channel) {
        case Channel::resonant_h: out += 'H'; break;
        case Channel::detuned_h: out += "Ht"; break;
        case Channel::orthogonal_v: out += 'V'; break;
        case Channel::loss: out += "loss"; break;
      }
    }
    out += '=';
    out += std::to_string(pc.count);
  }
  return out.empty() ? "vacuum" : out;
}

Classification classify_pattern(const std::vector<PortCount>& counts, bool saw_nonresonant,
                                const DetectorModel& model) {
  int total = 0;
  for (const auto& pc : counts) total += pc.count;
  if (total == 0) return Classification::no_entanglement_attempted;

  if (!model.channel_discrimination && saw_nonresonant) return Classification::ambiguous;
  if (model.channel_discrimination) {
    for (const auto& pc : counts)
      if (pc.channel == Channel::orthogonal_v && pc.count > 0)
        return Classification::failure_error_heralded;
  }

  // Resonant pattern; co-polarized detuned clicks are bookkept but do not
  // decide the outcome.
  std::array<int, 4> resonant{};
  for (const auto& pc : counts)
    if (!model.channel_discrimination || pc.channel == Channel::resonant_h)
      resonant[static_cast<std::size_t>(pc.port)] += pc.count;
  const int r_total = resonant[0] + resonant[1] + resonant[2] + resonant[3];

  if (r_total == 0) return Classification::no_entanglement_attempted;

  if (r_total == 1) {
    if (model.context == ErrorContext::single_photon) {
      if (resonant[static_cast<std::size_t>(Port::c)] == 1) return Classification::success_ac_bd;
      if (resonant[static_cast<std::size_t>(Port::d)] == 1) return Classification::success_ad_bc;
      return Classification::no_entanglement_attempted;
    }
    return Classification::failure_error_heralded;
  }

  if (r_total == 2) {
    for (int port = 0; port < 4; ++port) {
      if (resonant[static_cast<std::size_t>(port)] == 2)
        return model.context == ErrorContext::step3_both ? Classification::ambiguous
                                                         : Classification::failure_separable;
    }
    const bool at_a = resonant[0] == 1, at_b = resonant[1] == 1;
    const bool at_c = resonant[2] == 1, at_d = resonant[3] == 1;
    if ((at_a && at_c) || (at_b && at_d)) return Classification::success_ac_bd;
    if ((at_a && at_d) || (at_b && at_c)) return Classification::success_ad_bc;
    // Both photons on one dual-rail pair: unreachable without errors.
    return model.context == ErrorContext::step3_both ? Classification::ambiguous
                                                     : Classification::failure_error_heralded;
  }

  return Classification::failure_error_heralded;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::success_ac_bd: return "success_ac_bd";
    case Classification::success_ad_bc: return "success_ad_bc";
    case Classification::failure_separable: return "failure_separable";
    case Classification::failure_error_heralded: return "failure_error_heralded";
    case Classification::ambiguous: return "ambiguous";
    case Classification::no_entanglement_attempted: return "no_entanglement_attempted";
  }
  return "?";
}

std::vector<DetectionEvent> measure_detectors(const PureState& state, const DetectorModel& model) {
  using Signature = std::vector<BasisKet::Occupation>;
  std::map<Signature, PureState::TermMap> groups;
  for (const auto& [ket, amp] : state.terms()) {
    Signature signature;
    for (const auto& occ : ket.occupations())
      if (occ.first.vertex == 0) signature.push_back(occ);
    groups[std::move(signature)].emplace(ket, amp);
  }

  std::vector<DetectionEvent> events;
  for (auto& [signature, terms] : groups) {
    DetectionEvent event;
    double prob = 0.0;
    for (const auto& [ket, amp] : terms) prob += std::norm(amp);
    if (prob < kPruneTolerance * kPruneTolerance) continue;
    event.probability = prob;

    for (const auto& [addr, count] : signature) {
      if (addr.channel != Channel::resonant_h) event.saw_nonresonant = true;
      Port port = addr.qubit == 1 ? (addr.bin == TimeBin::early ? Port::a : Port::b)
                                  : (addr.bin == TimeBin::early ? Port::c : Port::d);
      int reported = model.number_resolving ? count : std::min<int>(count, 1);
      if (model.channel_discrimination) {
        event.counts.push_back({port, addr.channel, reported});
      } else {
        // Fold every channel into the port total.
        bool merged = false;
        for (auto& pc : event.counts)
          if (pc.port == port) {
            pc.count = model.number_resolving ? pc.count + reported
                                              : std::min(pc.count + reported, 1);
            merged = true;
          }
        if (!merged) event.counts.push_back({port, Channel::resonant_h, reported});
      }
    }
    std::sort(event.counts.begin(), event.counts.end(), [](const PortCount& a, const PortCount& b) {
      if (a.port != b.port) return a.port < b.port;
      return a.channel < b.channel;
    });

    auto post = PureState::from_terms(std::move(terms));
    event.post_state = strip_modes(post, [](const ModeAddress& addr) { return addr.vertex == 0; });
    event.classification = classify_pattern(event.counts, event.saw_nonresonant, model);
    events.push_back(std::move(event));
  }
  return events;
}

// ---------------------------------------------------------------------------

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::ideal: return "ideal";
    case ScenarioKind::step3_one_side: return "step3_one_side";
    case ScenarioKind::step3_both: return "step3_both";
    case ScenarioKind::inefficient_excitation: return "inefficient_excitation";
    case ScenarioKind::off_resonant_both: return "off_resonant_both";
    case ScenarioKind::cyclicity: return "cyclicity";
    case ScenarioKind::boost: return "boost";
  }
  return "?";
}

ScenarioKind scenario_from_string(const std::string& name) {
  for (ScenarioKind kind :
       {ScenarioKind::ideal, ScenarioKind::step3_one_side, ScenarioKind::step3_both,
        ScenarioKind::inefficient_excitation, ScenarioKind::off_resonant_both,
        ScenarioKind::cyclicity, ScenarioKind::boost}) {
    if (name == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown fusion scenario '" + name + "'");
}

namespace {

PureState relabel_vertices(const PureState& state, int offset) {
  PureState::TermMap terms;
  for (const auto& [ket, amp] : state.terms()) {
    BasisKet moved(ket.spin());
    for (const auto& [addr, count] : ket.occupations()) {
      ModeAddress target = addr;
      target.vertex = static_cast<std::uint16_t>(addr.vertex + offset);
      moved = moved.add_photons(target, count);
    }
    terms[moved] += amp;
  }
  return PureState::from_terms(std::move(terms));
}

/// Generates one side of the fusion experiment and disconnects the emitter
/// by projecting its spin onto |down>.
PureState build_side(const FusionScenario& scenario, bool left) {
  ProtocolConfig config;
  config.vertex_count = scenario.with_neighbor ? 2 : 1;
  config.blocks.assign(static_cast<std::size_t>(config.vertex_count),
                       {scenario.qubits_per_vertex});

  ErrorModel errors;
  switch (scenario.kind) {
    case ScenarioKind::ideal:
      break;
    case ScenarioKind::step3_one_side:
      if (left) errors.step3.set({1, 1}, {scenario.delta_y, 0.0});
      break;
    case ScenarioKind::step3_both:
      errors.step3.set({1, 1}, {scenario.delta_y, 0.0});
      break;
    case ScenarioKind::inefficient_excitation:
      errors.excitation.set({1, 1, TimeBin::early}, scenario.probability);
      errors.excitation.set({1, 1, TimeBin::late}, scenario.probability);
      break;
    case ScenarioKind::off_resonant_both:
      errors.off_resonant.fallback = scenario.probability;
      break;
    case ScenarioKind::cyclicity:
      errors.cyclicity.fallback = scenario.probability;
      break;
    case ScenarioKind::boost:
      throw std::logic_error("boost scenario has no amplitude-level side");
  }

  const Mixture generated = run_protocol(config, errors);
  const PureState& pure = generated.components().front().state;
  Projection spin_down =
      project(pure, [](const BasisKet& ket) { return ket.spin() == Spin::down; });
  if (spin_down.probability <= kNormTolerance)
    throw std::runtime_error("spin projection removed the whole state");
  return spin_down.state;
}

ErrorContext context_for(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::step3_both: return ErrorContext::step3_both;
    case ScenarioKind::inefficient_excitation: return ErrorContext::single_photon;
    default: return ErrorContext::none;
  }
}

}  // namespace

FusionReport run_fusion_scenario(const FusionScenario& scenario) {
  FusionReport report;
  if (scenario.kind == ScenarioKind::boost) {
    report.closed_form = formulas::boosted_fusion_success(scenario.boost_m, scenario.eta);
    const BoostRate rate =
        boosted_fusion_rate(scenario.boost_m, scenario.eta, scenario.trials, scenario.seed);
    report.monte_carlo = rate.rate;
    report.standard_error = rate.standard_error;
    report.optimal_m = formulas::optimal_fusion_m(scenario.eta);
    report.success_probability = report.closed_form;
    return report;
  }

  const PureState left = build_side(scenario, /*left=*/true);
  const PureState right =
      relabel_vertices(build_side(scenario, /*left=*/false), scenario.with_neighbor ? 2 : 1);
  PureState joint = tensor(left, right);
  joint = to_dual_rail(joint, {1, 1}, 1);
  joint = to_dual_rail(joint, {scenario.with_neighbor ? 3 : 2, 1}, 2);
  joint = apply_fusion_transfer(joint);

  DetectorModel model;
  model.channel_discrimination = scenario.channel_discrimination;
  model.context = context_for(scenario.kind);
  report.events = measure_detectors(joint, model);

  for (const auto& event : report.events) {
    report.class_mass[event.classification] += event.probability;
    if (event.classification == Classification::success_ac_bd ||
        event.classification == Classification::success_ad_bc)
      report.success_probability += event.probability;
  }
  return report;
}

std::string report_to_json(const FusionScenario& scenario, const FusionReport& report) {
  nlohmann::ordered_json doc;
  doc["scenario"] = to_string(scenario.kind);
  if (scenario.kind == ScenarioKind::boost) {
    doc["m"] = scenario.boost_m;
    doc["eta"] = scenario.eta;
    doc["trials"] = scenario.trials;
    doc["seed"] = scenario.seed;
    doc["closed_form"] = report.closed_form;
    doc["monte_carlo"] = report.monte_carlo;
    doc["standard_error"] = report.standard_error;
    doc["optimal_m"] = report.optimal_m;
    return doc.dump(2);
  }

  doc["qubits_per_vertex"] = scenario.qubits_per_vertex;
  doc["with_neighbor"] = scenario.with_neighbor;
  doc["channel_discrimination"] = scenario.channel_discrimination;
  doc["success_probability"] = report.success_probability;

  nlohmann::ordered_json classes = nlohmann::ordered_json::object();
  for (const auto& [classification, mass] : report.class_mass)
    classes[to_string(classification)] = mass;
  doc["classification"] = classes;

  nlohmann::ordered_json events = nlohmann::ordered_json::array();
  for (const auto& event : report.events) {
    nlohmann::ordered_json entry;
    entry["pattern"] = pattern_string(event.counts, scenario.channel_discrimination);
    entry["probability"] = event.probability;
    entry["classification"] = to_string(event.classification);
    events.push_back(std::move(entry));
  }
  doc["events"] = events;
  return doc.dump(2);
}

}  // namespace rss::fusion
