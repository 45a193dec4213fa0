#include "rss/targets.hpp"

#include <cmath>

namespace rss {

namespace {

ModeAddress resonant(int vertex, int qubit, TimeBin bin) {
  ModeAddress addr;
  addr.vertex = static_cast<std::uint16_t>(vertex);
  addr.qubit = static_cast<std::uint16_t>(qubit);
  addr.bin = bin;
  addr.channel = Channel::resonant_h;
  return addr;
}

/// Sum over spin and per-vertex bin choices with the shared entangling
/// phases; `vertex_sign` supplies the extra per-component phases that differ
/// between the two closed forms.
PureState build_reference(const ProtocolConfig& spec, bool minus_vertex_factors) {
  spec.validate();
  const int n_vertices = spec.vertex_count;
  const double sign = spec.initial_sign == InitialSign::plus ? 1.0 : -1.0;
  const double weight = std::pow(0.5, 0.5 * (n_vertices + 1));

  PureState::TermMap terms;
  for (int spin_bit = 0; spin_bit <= 1; ++spin_bit) {
    for (std::uint32_t choice = 0; choice < (1u << n_vertices); ++choice) {
      double amp = weight;
      if (spin_bit == 1) {
        amp *= sign;
        if (!minus_vertex_factors && n_vertices % 2 == 1) amp = -amp;  // (-1)^N
      }
      std::vector<BasisKet::Occupation> occupations;
      for (int n = 1; n <= n_vertices; ++n) {
        const bool late = choice & (1u << (n - 1));
        if (minus_vertex_factors && late) amp = -amp;
        for (int m = 1; m <= spec.vertex_size(n); ++m)
          occupations.emplace_back(resonant(n, m, late ? TimeBin::late : TimeBin::early), 1);
      }
      // Entanglement phases: adjacent all-late vertex pairs, and spin-up with
      // the all-late final vertex.
      for (int n = 1; n < n_vertices; ++n)
        if ((choice & (1u << (n - 1))) && (choice & (1u << n))) amp = -amp;
      if (spin_bit == 1 && (choice & (1u << (n_vertices - 1)))) amp = -amp;

      terms.emplace(BasisKet(spin_bit ? Spin::up : Spin::down, std::move(occupations)), amp);
    }
  }
  return PureState::from_terms(std::move(terms));
}

}  // namespace

PureState build_consistent_target(const ProtocolConfig& spec) {
  return build_reference(spec, /*minus_vertex_factors=*/true);
}

PureState build_alternating_target(const ProtocolConfig& spec) {
  return build_reference(spec, /*minus_vertex_factors=*/false);
}

PureState build_target(const ProtocolConfig& spec) {
  return spec.step5b_mode == Step5bMode::consistent ? build_consistent_target(spec)
                                                    : build_alternating_target(spec);
}

QubitState build_computational_state(const ProtocolConfig& spec) {
  spec.validate();
  const int n_vertices = spec.vertex_count;
  const int n_qubits = 1 + spec.total_photons();
  const double weight = std::pow(0.5, 0.5 * (n_vertices + 1));

  std::map<std::uint64_t, Amplitude> terms;
  for (int spin_bit = 0; spin_bit <= 1; ++spin_bit) {
    for (std::uint32_t choice = 0; choice < (1u << n_vertices); ++choice) {
      double amp = weight;
      for (int n = 1; n < n_vertices; ++n)
        if ((choice & (1u << (n - 1))) && (choice & (1u << n))) amp = -amp;
      if (spin_bit == 1 && (choice & (1u << (n_vertices - 1)))) amp = -amp;

      std::uint64_t bits = spin_bit ? 1 : 0;
      int bit = 1;
      for (int n = 1; n <= n_vertices; ++n) {
        const bool late = choice & (1u << (n - 1));
        for (int m = 1; m <= spec.vertex_size(n); ++m, ++bit)
          if (late) bits |= std::uint64_t{1} << bit;
      }
      terms[bits] += amp;
    }
  }
  return QubitState::from_terms(n_qubits, std::move(terms));
}

PureState late_phase_gate(const PureState& state, const ProtocolConfig& spec, int vertex,
                          double phi) {
  if (vertex < 1 || vertex > spec.vertex_count)
    throw std::invalid_argument("late_phase_gate: vertex outside configuration");
  const ModeAddress key = resonant(vertex, 1, TimeBin::late);
  const Amplitude phase(std::cos(phi), std::sin(phi));
  PureState::TermMap terms;
  for (const auto& [ket, amp] : state.terms())
    terms.emplace(ket, ket.count(key) > 0 ? amp * phase : amp);
  return PureState::from_terms(std::move(terms));
}

PureState remnant_phase_correction(const PureState& state, const ProtocolConfig& spec) {
  return late_phase_gate(state, spec, spec.vertex_count, kPi);
}

double generation_fidelity(const ProtocolConfig& config, const ErrorModel& errors) {
  const Mixture generated = run_protocol(config, errors);
  const PureState target = build_target(config);
  double value = 0.0;
  for (const auto& component : generated.components()) {
    if (component.state.has_loss_modes())
      value += component.probability * fidelity(trace_loss_modes(component.state), target);
    else
      value += component.probability * fidelity(component.state, target);
  }
  return value;
}

}  // namespace rss
