#pragma once

#include "rss/computational.hpp"
#include "rss/fock.hpp"
#include "rss/protocol.hpp"

namespace rss {

/// Reference states built directly from their closed forms, independent of
/// the generation dynamics. The consistent-mode form carries (E - L) vertex
/// factors, the alternating-mode form (E + L) factors with the sign of the
/// spin superposition alternating with the vertex count; both apply the
/// entangling -1 phases between adjacent all-late vertex components and
/// between the spin-up and final all-late components.
PureState build_consistent_target(const ProtocolConfig& spec);
PureState build_alternating_target(const ProtocolConfig& spec);

/// The reference matching the configured step-5b mode.
PureState build_target(const ProtocolConfig& spec);

/// Abstract-register form with a |+> spin factor: the common generalization
/// of the GHZ state (single vertex) and the 1D cluster state (all vertices of
/// size one).
QubitState build_computational_state(const ProtocolConfig& spec);

/// Phase e^{i*phi} on the all-late component of vertex `vertex`, applied as a
/// local mask keyed on that vertex's first qubit.
PureState late_phase_gate(const PureState& state, const ProtocolConfig& spec, int vertex,
                          double phi);

/// The pi case of late_phase_gate on the final vertex: restores canonical
/// graph form after the spin is measured out in the up branch.
PureState remnant_phase_correction(const PureState& state, const ProtocolConfig& spec);

/// Runs the generation sequence and scores it against the matching reference,
/// tracing over loss modes when present.
double generation_fidelity(const ProtocolConfig& config, const ErrorModel& errors);

}  // namespace rss
