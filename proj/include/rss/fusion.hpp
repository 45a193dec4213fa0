#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rss/fock.hpp"
#include "rss/protocol.hpp"

namespace rss::fusion {

/// Spatial input/output modes of the fusion circuit. Realized as modes on
/// reserved vertex 0: ports A/B are the early/late rails of qubit 1, C/D of
/// qubit 2, carried per channel.
enum class Port : int { a = 0, b = 1, c = 2, d = 3 };

const char* to_string(Port port);
ModeAddress port_address(Port port, Channel channel);

struct QubitRef {
  int vertex = 1;
  int qubit = 1;
};

/// Converts a time-bin qubit to dual-rail encoding by relabeling its early
/// occupations onto the first rail of `rail_pair` (1 -> ports A/B, 2 -> C/D)
/// and its late occupations onto the second. All non-loss channels are
/// carried along; loss modes stay upstream. Any photon-loss asymmetry from
/// the conversion delay line is expected to have been applied beforehand.
/// Throws if the destination rails are already in use.
PureState to_dual_rail(const PureState& state, QubitRef qubit, int rail_pair);

/// Rewrites the port creation operators through the self-inverse transfer
/// matrix (1/2)[[1,1,1,1],[1,1,-1,-1],[1,-1,1,-1],[1,-1,-1,1]], expanding
/// multi-photon terms with bosonic normalization. Channels pass through the
/// circuit independently.
PureState apply_fusion_transfer(const PureState& state);

/// 50:50 mixing of a qubit's two rails (early/late bins before conversion),
/// per channel: rail1 -> (rail1 + rail2)/sqrt(2), rail2 -> (rail1 - rail2)/sqrt(2).
PureState apply_dual_rail_hadamard(const PureState& state, QubitRef qubit);

enum class Classification {
  success_ac_bd,            // projects onto the (f_A f_C - f_B f_D) residual
  success_ad_bc,            // projects onto the (f_A f_D - f_B f_C) residual
  failure_separable,        // two photons at one detector; states stay separable
  failure_error_heralded,   // pattern only reachable through an error branch
  ambiguous,                // pattern no longer uniquely interpretable
  no_entanglement_attempted,
};

const char* to_string(Classification c);

/// What the classifier may assume about the generation errors feeding the
/// circuit. single_photon: either emitter may have failed to emit, with no
/// record of which. step3_both: both qubits may carry the vacuum/two-photon
/// flip-error component.
enum class ErrorContext { none, single_photon, step3_both };

struct DetectorModel {
  bool number_resolving = true;       // threshold detectors clip reported counts at 1
  bool channel_discrimination = true; // off: counts are summed over channels
  ErrorContext context = ErrorContext::none;
};

struct PortCount {
  Port port = Port::a;
  Channel channel = Channel::resonant_h;  // resonant_h stands in when discrimination is off
  int count = 0;
};

struct DetectionEvent {
  std::vector<PortCount> counts;  // as reported by the detector model
  double probability = 0.0;
  PureState post_state;           // upstream modes after the click, renormalized
  bool saw_nonresonant = false;   // true counts included a V or detuned photon
  Classification classification = Classification::no_entanglement_attempted;
};

std::string pattern_string(const std::vector<PortCount>& counts, bool with_channel);

/// Projects onto photon-number patterns over the ports with Born-rule
/// probabilities. Events are enumerated per physical (port, channel) pattern
/// in canonical order; the detector model only affects the reported counts
/// and the classification.
std::vector<DetectionEvent> measure_detectors(const PureState& state, const DetectorModel& model);

Classification classify_pattern(const std::vector<PortCount>& counts, bool saw_nonresonant,
                                const DetectorModel& model);

// ---------------------------------------------------------------------------
// Scenario harness used by the CLI and the C API.

enum class ScenarioKind {
  ideal,
  step3_one_side,
  step3_both,
  inefficient_excitation,
  off_resonant_both,
  cyclicity,
  boost,
};

const char* to_string(ScenarioKind kind);
ScenarioKind scenario_from_string(const std::string& name);

struct FusionScenario {
  ScenarioKind kind = ScenarioKind::ideal;
  int qubits_per_vertex = 2;  // M of every vertex on both sides
  bool with_neighbor = true;  // sides carry a second, entangled vertex
  double delta_y = 3.14159265358979323846;  // flip error of the step3 scenarios
  double probability = 1.0;   // mechanism probability knob (see run_fusion_scenario)
  bool channel_discrimination = true;
  // boost scenario only:
  int boost_m = 3;
  double eta = 0.95;
  long long trials = 100000;
  std::uint64_t seed = 1;
};

struct FusionReport {
  std::vector<DetectionEvent> events;
  std::map<Classification, double> class_mass;
  double success_probability = 0.0;
  // boost scenario only:
  double closed_form = 0.0;
  double monte_carlo = 0.0;
  double standard_error = 0.0;
  int optimal_m = 0;
};

/// Builds both input states with the scenario's error mechanism, feeds one
/// qubit of each through the circuit, and enumerates every detection event.
/// The probability knob is p_gamma for inefficient_excitation, p_up for
/// off_resonant_both and p_downdown for cyclicity. The boost kind runs the
/// repeat-until-success Monte Carlo instead.
FusionReport run_fusion_scenario(const FusionScenario& scenario);

/// Stable-key-order JSON rendering of a scenario report.
std::string report_to_json(const FusionScenario& scenario, const FusionReport& report);

}  // namespace rss::fusion
