#include "rss/spin_gates.hpp"

#include <cmath>

namespace rss {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

Amplitude phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

double eps_plus(double delta) { return std::cos(delta / 2) + std::sin(delta / 2); }
double eps_minus(double delta) { return std::cos(delta / 2) - std::sin(delta / 2); }

double SpinGate::unitarity_defect() const {
  // U*U - I entrywise.
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Amplitude sum(0.0, 0.0);
      for (int k = 0; k < 2; ++k) sum += std::conj(entries[k][i]) * entries[k][j];
      if (i == j) sum -= 1.0;
      worst = std::max(worst, std::abs(sum));
    }
  }
  return worst;
}

SpinGate compose(const SpinGate& second, const SpinGate& first) {
  SpinGate out;
  out.kind = second.kind;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Amplitude sum(0.0, 0.0);
      for (int k = 0; k < 2; ++k) sum += second.entries[i][k] * first.entries[k][j];
      out.entries[i][j] = sum;
    }
  return out;
}

SpinGate hadamard_gate(double dy, double dz) {
  const double ep = eps_plus(dy);
  const double em = eps_minus(dy);
  const Amplitude fw = phase(dz / 2);   // phase picked up by the |down> component
  const Amplitude bw = phase(-dz / 2);  // phase picked up by the |up> component
  SpinGate g;
  g.kind = GateKind::hadamard;
  g.entries[0][0] = kInvSqrt2 * em * fw;
  g.entries[0][1] = kInvSqrt2 * ep * fw;
  g.entries[1][0] = -kInvSqrt2 * ep * bw;
  g.entries[1][1] = kInvSqrt2 * em * bw;
  return g;
}

SpinGate inverse_hadamard_gate(double dy, double dz) {
  const double ep = eps_plus(dy);
  const double em = eps_minus(dy);
  const Amplitude fw = phase(dz / 2);
  const Amplitude bw = phase(-dz / 2);
  SpinGate g;
  g.kind = GateKind::inverse_hadamard;
  g.entries[0][0] = -kInvSqrt2 * ep * fw;
  g.entries[0][1] = kInvSqrt2 * em * fw;
  g.entries[1][0] = -kInvSqrt2 * em * bw;
  g.entries[1][1] = -kInvSqrt2 * ep * bw;
  return g;
}

SpinGate flip_gate(double dy, double dz) {
  const double c = std::cos(dy / 2);
  const double s = std::sin(dy / 2);
  const Amplitude fw = phase(dz / 2);
  const Amplitude bw = phase(-dz / 2);
  SpinGate g;
  g.kind = GateKind::flip;
  g.entries[0][0] = -s * fw;
  g.entries[0][1] = c * fw;
  g.entries[1][0] = -c * bw;
  g.entries[1][1] = -s * bw;
  return g;
}

SpinGate z_phase_gate(double phi) {
  SpinGate g;
  g.kind = GateKind::z_phase;
  g.entries[0][0] = 1.0;
  g.entries[0][1] = 0.0;
  g.entries[1][0] = 0.0;
  g.entries[1][1] = phase(phi);
  return g;
}

PureState apply_spin_gate(const PureState& state, const SpinGate& gate) {
  PureState::TermMap terms;
  for (const auto& [ket, amp] : state.terms()) {
    const int col = ket.spin() == Spin::down ? 0 : 1;
    const Amplitude to_down = gate.entries[0][col];
    const Amplitude to_up = gate.entries[1][col];
    if (std::abs(to_down) > 0.0) terms[ket.with_spin(Spin::down)] += amp * to_down;
    if (std::abs(to_up) > 0.0) terms[ket.with_spin(Spin::up)] += amp * to_up;
  }
  return PureState::from_terms(std::move(terms));
}

}  // namespace rss
