#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rss {

using Amplitude = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Numerical policy shared across the library.
inline constexpr double kNormTolerance = 1e-10;
/// Terms with |amplitude| below this are dropped and the state renormalized.
inline constexpr double kPruneTolerance = 1e-14;
/// Hard cap on photons per mode. Generation never exceeds 2; the fusion
/// transfer can legitimately pile up to 4 photons in one output mode.
inline constexpr int kMaxOccupation = 4;

/// Thrown when an operation would push a mode past kMaxOccupation.
class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Spin : std::uint8_t { down = 0, up = 1 };
enum class TimeBin : std::uint8_t { early = 0, late = 1 };

/// Photon channels. A mode is distinguishable by polarization and energy;
/// photons scattered out of the collection path live in the loss channel of
/// the same (vertex, qubit, bin) label.
enum class Channel : std::uint8_t {
  resonant_h = 0,   // the intended photon (H polarized, cycling transition)
  detuned_h = 1,    // co-polarized photon from the off-resonant transition
  orthogonal_v = 2, // V polarized photon accompanying an erroneous spin flip
  loss = 3,
};

/// One optical mode: the m-th qubit of the n-th vertex, in an early or late
/// time bin, on a given channel. Vertex index 0 is reserved for the spatial
/// rails of the fusion circuit (see fusion.hpp); protocol modes use n >= 1.
struct ModeAddress {
  std::uint16_t vertex = 1;
  std::uint16_t qubit = 1;
  TimeBin bin = TimeBin::early;
  Channel channel = Channel::resonant_h;
};

bool operator==(const ModeAddress& a, const ModeAddress& b);
bool operator<(const ModeAddress& a, const ModeAddress& b);
inline bool operator!=(const ModeAddress& a, const ModeAddress& b) { return !(a == b); }

std::string to_string(const ModeAddress& addr);

/// One classical configuration: the emitter spin plus a sparse set of photon
/// occupations. Absent addresses mean zero photons; stored counts are >= 1
/// and kept sorted in canonical address order, so equality of kets is
/// equality of physical configurations.
class BasisKet {
 public:
  using Occupation = std::pair<ModeAddress, std::uint8_t>;

  BasisKet() = default;
  explicit BasisKet(Spin spin) : spin_(spin) {}
  BasisKet(Spin spin, std::vector<Occupation> occupations);

  Spin spin() const { return spin_; }
  const std::vector<Occupation>& occupations() const { return occupations_; }

  int count(const ModeAddress& addr) const;
  int total_photons() const;
  bool has_loss_modes() const;

  BasisKet with_spin(Spin spin) const;
  /// Returns a copy with `delta` photons added to (removed from) `addr`.
  /// Throws OverflowError above kMaxOccupation, std::invalid_argument below 0.
  BasisKet add_photons(const ModeAddress& addr, int delta) const;

  friend bool operator==(const BasisKet& a, const BasisKet& b) {
    return a.spin_ == b.spin_ && a.occupations_ == b.occupations_;
  }
  friend bool operator!=(const BasisKet& a, const BasisKet& b) { return !(a == b); }
  friend bool operator<(const BasisKet& a, const BasisKet& b);

 private:
  Spin spin_ = Spin::down;
  std::vector<Occupation> occupations_;  // sorted by address, counts >= 1
};

/// Sparse normalized superposition over BasisKets. Immutable after
/// construction; every operation returns a new value, so states can be shared
/// freely across threads.
class PureState {
 public:
  using TermMap = std::map<BasisKet, Amplitude>;

  PureState() = default;

  /// A single basis ket with unit amplitude.
  static PureState single(BasisKet ket);
  /// Prunes sub-tolerance amplitudes, then normalizes. Throws
  /// std::invalid_argument if everything cancels.
  static PureState from_terms(TermMap terms);

  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  Amplitude amplitude(const BasisKet& ket) const;
  double norm_squared() const;
  bool has_loss_modes() const;

 private:
  TermMap terms_;
};

/// Probability-weighted ensemble of pure states, e.g. the result of tracing
/// over loss modes. Probabilities sum to one.
class Mixture {
 public:
  struct Component {
    double probability = 0.0;
    PureState state;
  };

  Mixture() = default;
  static Mixture pure(PureState state);
  /// Validates probabilities (each in (0,1], summing to 1 within tolerance).
  static Mixture from_components(std::vector<Component> components);

  const std::vector<Component>& components() const { return components_; }
  std::size_t component_count() const { return components_.size(); }

 private:
  std::vector<Component> components_;
};

/// <a|b> under canonical ket equality.
Amplitude inner_product(const PureState& a, const PureState& b);

/// |<target|state>|^2, or the probability-weighted sum over mixture
/// components. The target must be normalized and free of loss modes.
double fidelity(const PureState& state, const PureState& target);
double fidelity(const Mixture& state, const PureState& target);

/// Traces out the loss channels: terms are grouped by their loss-occupation
/// pattern, each group becoming one component with probability equal to the
/// group norm, renormalized and with the loss addresses removed.
Mixture trace_loss_modes(const PureState& state);

/// Result of projecting a state onto a subspace.
struct Projection {
  double probability = 0.0;
  PureState state;  // normalized post-projection state; empty if probability ~ 0
};

/// Keeps the terms for which `keep` returns true, renormalizing.
Projection project(const PureState& state, const std::function<bool(const BasisKet&)>& keep);

/// Removes every occupation whose address satisfies `match` from every term.
/// Intended for modes that have just been projected onto a definite pattern;
/// merging distinct terms here would be a logic error and throws.
PureState strip_modes(const PureState& state, const std::function<bool(const ModeAddress&)>& match);

/// Product state over disjoint mode sets. Every term of `photonic` must carry
/// spin down; the combined term keeps the spin of `a`.
PureState tensor(const PureState& a, const PureState& photonic);

/// Stable text form used by golden-file tests and the CLI state dump: one
/// line per term, canonical order, 12 significant digits.
std::string to_debug_text(const PureState& state);
std::string to_debug_text(const Mixture& mixture);

/// Formats a float with 12 significant digits (shared CSV/debug convention).
std::string format_double(double value);

}  // namespace rss
