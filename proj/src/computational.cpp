#include "rss/computational.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace rss {

QubitState QubitState::from_terms(int qubit_count, std::map<std::uint64_t, Amplitude> terms) {
  if (qubit_count < 1 || qubit_count > 62) throw std::invalid_argument("unsupported qubit count");
  double norm2 = 0.0;
  for (auto it = terms.begin(); it != terms.end();) {
    if (it->first >> qubit_count) throw std::invalid_argument("bitstring outside register");
    if (std::abs(it->second) < kPruneTolerance) {
      it = terms.erase(it);
    } else {
      norm2 += std::norm(it->second);
      ++it;
    }
  }
  if (norm2 <= 0.0) throw std::invalid_argument("cannot normalize a zero state");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& [bits, amp] : terms) amp *= scale;
  QubitState state;
  state.qubit_count_ = qubit_count;
  state.terms_ = std::move(terms);
  return state;
}

Amplitude QubitState::amplitude(std::uint64_t bits) const {
  auto it = terms_.find(bits);
  return it == terms_.end() ? Amplitude(0.0, 0.0) : it->second;
}

QubitState QubitState::hadamard(int qubit) const {
  const std::uint64_t mask = std::uint64_t{1} << qubit;
  const double inv_sqrt2 = 0.70710678118654752440;
  std::map<std::uint64_t, Amplitude> next;
  for (const auto& [bits, amp] : terms_) {
    next[bits & ~mask] += amp * inv_sqrt2;
    next[bits | mask] += amp * ((bits & mask) ? -inv_sqrt2 : inv_sqrt2);
  }
  return from_terms(qubit_count_, std::move(next));
}

QubitState QubitState::pauli_z(int qubit) const {
  const std::uint64_t mask = std::uint64_t{1} << qubit;
  std::map<std::uint64_t, Amplitude> next;
  for (const auto& [bits, amp] : terms_) next[bits] = (bits & mask) ? -amp : amp;
  return from_terms(qubit_count_, std::move(next));
}

double QubitState::pauli_expectation(std::uint64_t x_mask, std::uint64_t z_mask) const {
  if (x_mask & z_mask) throw std::invalid_argument("overlapping X and Z masks");
  Amplitude sum(0.0, 0.0);
  for (const auto& [bits, amp] : terms_) {
    const Amplitude partner = amplitude(bits ^ x_mask);
    const double sign = std::popcount(bits & z_mask) % 2 == 0 ? 1.0 : -1.0;
    sum += std::conj(partner) * sign * amp;
  }
  return sum.real();
}

Amplitude inner_product(const QubitState& a, const QubitState& b) {
  if (a.qubit_count() != b.qubit_count())
    throw std::invalid_argument("register size mismatch");
  Amplitude sum(0.0, 0.0);
  for (const auto& [bits, amp] : a.terms()) sum += std::conj(amp) * b.amplitude(bits);
  return sum;
}

QubitState to_computational(const PureState& state, const ProtocolConfig& config,
                            bool include_spin) {
  config.validate();
  // Map (vertex, qubit) to its register bit.
  std::map<std::pair<int, int>, int> bit_of;
  int next_bit = include_spin ? 1 : 0;
  for (int n = 1; n <= config.vertex_count; ++n)
    for (int m = 1; m <= config.vertex_size(n); ++m) bit_of[{n, m}] = next_bit++;

  std::map<std::uint64_t, Amplitude> terms;
  std::vector<int> per_qubit(static_cast<std::size_t>(next_bit), 0);
  for (const auto& [ket, amp] : state.terms()) {
    std::uint64_t bits = 0;
    if (include_spin && ket.spin() == Spin::up) bits |= 1;
    std::fill(per_qubit.begin(), per_qubit.end(), 0);
    for (const auto& [addr, count] : ket.occupations()) {
      auto it = bit_of.find({addr.vertex, addr.qubit});
      if (it == bit_of.end() || addr.channel != Channel::resonant_h || count != 1)
        throw std::invalid_argument("state outside the one-photon-per-qubit codespace");
      per_qubit[static_cast<std::size_t>(it->second)] += count;
      if (addr.bin == TimeBin::late) bits |= std::uint64_t{1} << it->second;
    }
    for (const auto& [key, bit] : bit_of)
      if (per_qubit[static_cast<std::size_t>(bit)] != 1)
        throw std::invalid_argument("state outside the one-photon-per-qubit codespace");
    terms[bits] += amp;
  }
  return QubitState::from_terms(next_bit, std::move(terms));
}

bool spin_phase_negative(const ProtocolConfig& config) {
  const bool sign_minus = config.initial_sign == InitialSign::minus;
  const bool odd = config.vertex_count % 2 == 1;
  return sign_minus != odd;  // (-1)^N times the preparation sign
}

}  // namespace rss
