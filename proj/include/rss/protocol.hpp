#pragma once

#include <map>
#include <vector>

#include "rss/fock.hpp"
#include "rss/spin_gates.hpp"

namespace rss {

enum class Step5bMode { consistent, alternating };
enum class InitialSign { plus, minus };

/// Shape of one generation run: N vertices, each redundantly encoded on
/// M_n = sum(blocks[n]) photonic qubits, generated as consecutive-excitation
/// sub-vertex blocks.
struct ProtocolConfig {
  int vertex_count = 1;
  std::vector<std::vector<int>> blocks;  // per vertex, sub-vertex sizes M_i
  Step5bMode step5b_mode = Step5bMode::alternating;
  InitialSign initial_sign = InitialSign::plus;

  /// Uniform helper: N vertices, one block of m qubits each.
  static ProtocolConfig uniform(int vertices, int qubits_per_vertex,
                                Step5bMode mode = Step5bMode::alternating,
                                InitialSign sign = InitialSign::plus);

  int vertex_size(int vertex) const;  // M_n, vertex is 1-based
  int block_count(int vertex) const;  // J_n
  int total_photons() const;
  void validate() const;
};

struct RotationError {
  double dy = 0.0;
  double dz = 0.0;
};

struct SubVertexKey {
  int vertex = 1;  // n
  int block = 1;   // j
  friend bool operator<(const SubVertexKey& a, const SubVertexKey& b) {
    return a.vertex != b.vertex ? a.vertex < b.vertex : a.block < b.block;
  }
};

struct PulseKey {
  int vertex = 1;
  int qubit = 1;
  TimeBin bin = TimeBin::early;
  friend bool operator<(const PulseKey& a, const PulseKey& b) {
    if (a.vertex != b.vertex) return a.vertex < b.vertex;
    if (a.qubit != b.qubit) return a.qubit < b.qubit;
    return a.bin < b.bin;
  }
};

struct QubitKey {
  int vertex = 1;
  int qubit = 1;
  friend bool operator<(const QubitKey& a, const QubitKey& b) {
    return a.vertex != b.vertex ? a.vertex < b.vertex : a.qubit < b.qubit;
  }
};

/// A parameter with a broadcast value plus sparse per-index overrides.
template <typename Key, typename Value>
struct Broadcast {
  Value fallback{};
  std::map<Key, Value> overrides;

  Broadcast() = default;
  explicit Broadcast(Value v) : fallback(v) {}

  const Value& get(const Key& key) const {
    auto it = overrides.find(key);
    return it == overrides.end() ? fallback : it->second;
  }
  void set(const Key& key, Value value) { overrides[key] = value; }
};

/// Per-step error parameters. Defaults are the ideal values throughout, so a
/// default-constructed model runs the error-free protocol.
struct ErrorModel {
  double spin_init_fidelity = 1.0;  // weight of the intended basis state at step 1a
  RotationError step1b;
  Broadcast<SubVertexKey, RotationError> step3;   // flip between the bins of block (n, j)
  Broadcast<SubVertexKey, RotationError> step5a;  // flip moving from block j to j+1
  Broadcast<int, RotationError> step5b;           // Hadamard-type gate ending round n
  Broadcast<PulseKey, double> excitation{1.0};    // photon emitted when bright
  Broadcast<PulseKey, double> off_resonant{0.0};  // detuned emission when dark
  Broadcast<PulseKey, double> cyclicity{1.0};     // emitter returns to the bright state
  Broadcast<QubitKey, double> loss_early{0.0};
  Broadcast<QubitKey, double> loss_late{0.0};

  bool has_loss(const ProtocolConfig& config) const;
  void validate(const ProtocolConfig& config) const;
};

/// Runs the full generation sequence: per round, the early emission block,
/// the population-inverting flip, the late emission block, inter-block flips,
/// and the round-closing Hadamard-type gate; loss is applied at the end.
/// The mixed spin initialization (spin_init_fidelity < 1) is the only source
/// of more than one mixture component.
Mixture run_protocol(const ProtocolConfig& config, const ErrorModel& errors);

/// One excitation pulse aimed at (vertex, qubit, bin). Spin-down terms branch
/// over photon emission / no emission / erroneous flip with a V photon;
/// spin-up terms branch over off-resonant detuned emission. Norm-preserving.
PureState emit_photon(const PureState& state, int vertex, int qubit, TimeBin bin,
                      const ErrorModel& errors);

/// Branches every occupied non-loss mode into kept / lost-channel components
/// with per-qubit early and late loss probabilities.
PureState apply_loss(const PureState& state, const ErrorModel& errors);

/// Measurement-based spin initialization: generates one photonic qubit from
/// the (possibly mixed) spin state, measures its time bin, and returns the
/// heralded pure spin state (down for an early click, up for a late one)
/// together with the outcome probability.
Projection initialize_spin_by_measurement(const ErrorModel& errors, TimeBin outcome);

/// The Hadamard-type gate closing round n (1-based) under the configured
/// step-5b mode and preparation sign, with that round's rotation errors.
SpinGate step5b_gate(const ProtocolConfig& config, const ErrorModel& errors, int round);

}  // namespace rss
