#pragma once

#include <cstdint>
#include <map>

#include "rss/fock.hpp"
#include "rss/protocol.hpp"

namespace rss {

/// Dense-over-bitstrings register state used for stabilizer checks and the
/// abstract-qubit form of the resource states. Bit 0 is the emitter spin when
/// present; photonic qubits follow in canonical (vertex, qubit) order with
/// 0 <-> early and 1 <-> late (spin: 0 <-> down).
class QubitState {
 public:
  QubitState() = default;
  static QubitState from_terms(int qubit_count, std::map<std::uint64_t, Amplitude> terms);

  int qubit_count() const { return qubit_count_; }
  const std::map<std::uint64_t, Amplitude>& terms() const { return terms_; }
  Amplitude amplitude(std::uint64_t bits) const;

  QubitState hadamard(int qubit) const;
  QubitState pauli_z(int qubit) const;

  /// <psi| X(x_mask) Z(z_mask) |psi> for disjoint masks.
  double pauli_expectation(std::uint64_t x_mask, std::uint64_t z_mask) const;

 private:
  int qubit_count_ = 0;
  std::map<std::uint64_t, Amplitude> terms_;
};

Amplitude inner_product(const QubitState& a, const QubitState& b);

/// Encodes a photonic state into the computational register. Every qubit of
/// the configuration must carry exactly one resonant photon across its two
/// bins and nothing else; anything outside that codespace throws.
QubitState to_computational(const PureState& state, const ProtocolConfig& config,
                            bool include_spin = true);

/// Whether the generated state's spin factor is (|down> - |up>)-like rather
/// than (|down> + |up>)-like, i.e. whether a Z on the spin qubit is needed to
/// reach the canonical |+>-spin form after encoding.
bool spin_phase_negative(const ProtocolConfig& config);

}  // namespace rss
