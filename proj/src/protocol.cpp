#include "rss/protocol.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rss {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string(name) + " outside [0, 1]");
}

ModeAddress mode(int vertex, int qubit, TimeBin bin, Channel channel) {
  ModeAddress addr;
  addr.vertex = static_cast<std::uint16_t>(vertex);
  addr.qubit = static_cast<std::uint16_t>(qubit);
  addr.bin = bin;
  addr.channel = channel;
  return addr;
}

double binomial(int n, int k) {
  double value = 1.0;
  for (int i = 1; i <= k; ++i) value = value * (n - k + i) / i;
  return value;
}

}  // namespace

ProtocolConfig ProtocolConfig::uniform(int vertices, int qubits_per_vertex, Step5bMode mode,
                                       InitialSign sign) {
  ProtocolConfig config;
  config.vertex_count = vertices;
  config.blocks.assign(static_cast<std::size_t>(vertices), {qubits_per_vertex});
  config.step5b_mode = mode;
  config.initial_sign = sign;
  return config;
}

int ProtocolConfig::vertex_size(int vertex) const {
  int total = 0;
  for (int m : blocks.at(static_cast<std::size_t>(vertex - 1))) total += m;
  return total;
}

int ProtocolConfig::block_count(int vertex) const {
  return static_cast<int>(blocks.at(static_cast<std::size_t>(vertex - 1)).size());
}

int ProtocolConfig::total_photons() const {
  int total = 0;
  for (int n = 1; n <= vertex_count; ++n) total += vertex_size(n);
  return total;
}

void ProtocolConfig::validate() const {
  if (vertex_count < 1) throw std::invalid_argument("vertex count must be >= 1");
  if (blocks.size() != static_cast<std::size_t>(vertex_count))
    throw std::invalid_argument("blocks must list sub-vertex sizes for every vertex");
  for (const auto& vertex_blocks : blocks) {
    if (vertex_blocks.empty()) throw std::invalid_argument("vertex with no sub-vertices");
    for (int m : vertex_blocks)
      if (m < 1) throw std::invalid_argument("sub-vertex size must be >= 1");
  }
}

bool ErrorModel::has_loss(const ProtocolConfig& config) const {
  for (int n = 1; n <= config.vertex_count; ++n) {
    for (int m = 1; m <= config.vertex_size(n); ++m) {
      if (loss_early.get({n, m}) > 0.0 || loss_late.get({n, m}) > 0.0) return true;
    }
  }
  return false;
}

void ErrorModel::validate(const ProtocolConfig& config) const {
  check_probability(spin_init_fidelity, "spin_init_fidelity");
  config.validate();
  for (int n = 1; n <= config.vertex_count; ++n) {
    for (int m = 1; m <= config.vertex_size(n); ++m) {
      for (TimeBin bin : {TimeBin::early, TimeBin::late}) {
        check_probability(excitation.get({n, m, bin}), "excitation probability");
        check_probability(off_resonant.get({n, m, bin}), "off-resonant probability");
        check_probability(cyclicity.get({n, m, bin}), "cyclicity probability");
      }
      check_probability(loss_early.get({n, m}), "early loss probability");
      check_probability(loss_late.get({n, m}), "late loss probability");
    }
  }
  // Overrides pointing at indices outside the configured shape indicate a
  // config/model mismatch.
  for (const auto& [key, value] : step3.overrides)
    if (key.vertex < 1 || key.vertex > config.vertex_count || key.block < 1 ||
        key.block > config.block_count(key.vertex))
      throw std::invalid_argument("step3 override outside configured blocks");
  for (const auto& [key, value] : step5a.overrides)
    if (key.vertex < 1 || key.vertex > config.vertex_count || key.block < 1 ||
        key.block >= config.block_count(key.vertex))
      throw std::invalid_argument("step5a override outside configured blocks");
  for (const auto& [key, value] : step5b.overrides)
    if (key < 1 || key > config.vertex_count)
      throw std::invalid_argument("step5b override outside configured vertices");
}

PureState emit_photon(const PureState& state, int vertex, int qubit, TimeBin bin,
                      const ErrorModel& errors) {
  const PulseKey key{vertex, qubit, bin};
  const double p_return = errors.cyclicity.get(key);
  const double p_emit = errors.excitation.get(key);
  const double p_dark = errors.off_resonant.get(key);
  const ModeAddress resonant = mode(vertex, qubit, bin, Channel::resonant_h);
  const ModeAddress flipped = mode(vertex, qubit, bin, Channel::orthogonal_v);
  const ModeAddress detuned = mode(vertex, qubit, bin, Channel::detuned_h);

  const double w_bright = std::sqrt(p_return * p_emit);
  const double w_idle = std::sqrt(p_return * (1.0 - p_emit));
  const double w_flip = std::sqrt(1.0 - p_return);
  const double w_dark_idle = std::sqrt(1.0 - p_dark);
  const double w_dark_emit = std::sqrt(p_dark);

  PureState::TermMap terms;
  for (const auto& [ket, amp] : state.terms()) {
    if (ket.spin() == Spin::down) {
      if (ket.count(resonant) != 0)
        throw std::invalid_argument("double excitation of mode " + to_string(resonant));
      if (w_bright > 0.0) terms[ket.add_photons(resonant, 1)] += amp * w_bright;
      if (w_idle > 0.0) terms[ket] += amp * w_idle;
      if (w_flip > 0.0) terms[ket.add_photons(flipped, 1).with_spin(Spin::up)] += amp * w_flip;
    } else {
      if (w_dark_idle > 0.0) terms[ket] += amp * w_dark_idle;
      if (w_dark_emit > 0.0) terms[ket.add_photons(detuned, 1)] += amp * w_dark_emit;
    }
  }
  return PureState::from_terms(std::move(terms));
}

PureState apply_loss(const PureState& state, const ErrorModel& errors) {
  PureState::TermMap terms;
  for (const auto& [ket, amp] : state.terms()) {
    // Expand the kept/lost binomial branches mode by mode.
    std::vector<std::pair<BasisKet, Amplitude>> branches{{BasisKet(ket.spin()), amp}};
    for (const auto& [addr, count] : ket.occupations()) {
      double p_lost = 0.0;
      if (addr.channel != Channel::loss) {
        const QubitKey key{addr.vertex, addr.qubit};
        p_lost = addr.bin == TimeBin::early ? errors.loss_early.get(key)
                                            : errors.loss_late.get(key);
      }
      std::vector<std::pair<BasisKet, Amplitude>> next;
      for (const auto& [partial, partial_amp] : branches) {
        if (p_lost <= 0.0 || addr.channel == Channel::loss) {
          next.emplace_back(partial.add_photons(addr, count), partial_amp);
          continue;
        }
        const ModeAddress sink = mode(addr.vertex, addr.qubit, addr.bin, Channel::loss);
        const double q_kept = 1.0 - p_lost;
        for (int kept = 0; kept <= count; ++kept) {
          const double weight =
              std::sqrt(binomial(count, kept) * std::pow(q_kept, kept) *
                        std::pow(p_lost, count - kept));
          if (weight <= 0.0) continue;
          BasisKet branch = partial;
          if (kept > 0) branch = branch.add_photons(addr, kept);
          if (count - kept > 0) branch = branch.add_photons(sink, count - kept);
          next.emplace_back(std::move(branch), partial_amp * weight);
        }
      }
      branches = std::move(next);
    }
    for (auto& [branch, branch_amp] : branches) terms[branch] += branch_amp;
  }
  return PureState::from_terms(std::move(terms));
}

SpinGate step5b_gate(const ProtocolConfig& config, const ErrorModel& errors, int round) {
  const RotationError rot = errors.step5b.get(round);
  bool inverse;
  if (config.step5b_mode == Step5bMode::consistent) {
    inverse = config.initial_sign == InitialSign::minus;
  } else {
    // Alternating sequence, starting with the inverse gate for a |+>
    // preparation and with the plain gate for |->.
    const bool odd_round = (round % 2) == 1;
    inverse = config.initial_sign == InitialSign::plus ? odd_round : !odd_round;
  }
  return inverse ? inverse_hadamard_gate(rot.dy, rot.dz) : hadamard_gate(rot.dy, rot.dz);
}

namespace {

/// Steps 2-5 for a single pure spin branch.
PureState run_rounds(const ProtocolConfig& config, const ErrorModel& errors, PureState state) {
  for (int n = 1; n <= config.vertex_count; ++n) {
    const auto& vertex_blocks = config.blocks[static_cast<std::size_t>(n - 1)];
    int first_qubit = 1;
    for (int j = 1; j <= static_cast<int>(vertex_blocks.size()); ++j) {
      const int block_size = vertex_blocks[static_cast<std::size_t>(j - 1)];
      for (int m = first_qubit; m < first_qubit + block_size; ++m)
        state = emit_photon(state, n, m, TimeBin::early, errors);
      const RotationError flip_rot = errors.step3.get({n, j});
      state = apply_spin_gate(state, flip_gate(flip_rot.dy, flip_rot.dz));
      for (int m = first_qubit; m < first_qubit + block_size; ++m)
        state = emit_photon(state, n, m, TimeBin::late, errors);
      if (j < static_cast<int>(vertex_blocks.size())) {
        const RotationError between = errors.step5a.get({n, j});
        state = apply_spin_gate(state, flip_gate(between.dy, between.dz));
      }
      first_qubit += block_size;
    }
    state = apply_spin_gate(state, step5b_gate(config, errors, n));
  }
  if (errors.has_loss(config)) state = apply_loss(state, errors);
  return state;
}

SpinGate step1b_gate(const ProtocolConfig& config, const ErrorModel& errors) {
  // Prepares |-> from |down> with the plain Hadamard and |+> (up to a global
  // sign) with the inverse one.
  return config.initial_sign == InitialSign::plus
             ? inverse_hadamard_gate(errors.step1b.dy, errors.step1b.dz)
             : hadamard_gate(errors.step1b.dy, errors.step1b.dz);
}

}  // namespace

Mixture run_protocol(const ProtocolConfig& config, const ErrorModel& errors) {
  errors.validate(config);
  const SpinGate preparation = step1b_gate(config, errors);

  std::vector<Mixture::Component> components;
  const double intended = errors.spin_init_fidelity;
  if (intended > 0.0) {
    PureState state = apply_spin_gate(PureState::single(BasisKet(Spin::down)), preparation);
    components.push_back({intended, run_rounds(config, errors, std::move(state))});
  }
  if (intended < 1.0) {
    PureState state = apply_spin_gate(PureState::single(BasisKet(Spin::up)), preparation);
    components.push_back({1.0 - intended, run_rounds(config, errors, std::move(state))});
  }
  return Mixture::from_components(std::move(components));
}

Projection initialize_spin_by_measurement(const ErrorModel& errors, TimeBin outcome) {
  // One bootstrap photonic qubit: early block, flip, late block, and a
  // closing flip that restores the bright/dark labels the heralding is
  // written in.
  const auto bootstrap = [&errors](Spin initial) {
    PureState state = PureState::single(BasisKet(initial));
    state = emit_photon(state, 1, 1, TimeBin::early, errors);
    state = apply_spin_gate(state, flip_gate());
    state = emit_photon(state, 1, 1, TimeBin::late, errors);
    return apply_spin_gate(state, flip_gate());
  };

  const ModeAddress clicked = mode(1, 1, outcome, Channel::resonant_h);
  const auto clean_click = [&clicked](const BasisKet& ket) {
    return ket.count(clicked) == 1 && ket.total_photons() == 1;
  };

  double total_probability = 0.0;
  std::vector<std::pair<double, PureState>> survivors;
  const double weights[2] = {errors.spin_init_fidelity, 1.0 - errors.spin_init_fidelity};
  const Spin initials[2] = {Spin::down, Spin::up};
  for (int i = 0; i < 2; ++i) {
    if (weights[i] <= 0.0) continue;
    Projection projected = project(bootstrap(initials[i]), clean_click);
    if (projected.probability <= kNormTolerance) continue;
    total_probability += weights[i] * projected.probability;
    survivors.emplace_back(weights[i] * projected.probability, std::move(projected.state));
  }
  if (survivors.empty())
    throw std::invalid_argument("requested measurement outcome has zero probability");
  if (survivors.size() != 1)
    throw std::runtime_error("time-bin click did not herald a pure spin state");

  Projection result;
  result.probability = total_probability;
  result.state = strip_modes(survivors.front().second,
                             [](const ModeAddress&) { return true; });
  return result;
}

}  // namespace rss
