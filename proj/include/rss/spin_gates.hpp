#pragma once

#include <array>

#include "rss/fock.hpp"

namespace rss {

enum class GateKind { hadamard, inverse_hadamard, flip, z_phase };

/// A 2x2 unitary on the emitter spin, stored in basis order (|down>, |up>).
/// entries[row][col]: col is the input basis state, row the output component.
struct SpinGate {
  GateKind kind = GateKind::flip;
  std::array<std::array<Amplitude, 2>, 2> entries{};

  /// max |U*U - I| entry; constructed gates satisfy < 1e-12.
  double unitarity_defect() const;
};

SpinGate compose(const SpinGate& second, const SpinGate& first);

/// Spin Hadamard with rotation errors, Rz(dz) * Ry(pi/2 + dy).
/// At (0,0): |up> -> (|down>+|up>)/sqrt(2), |down> -> (|down>-|up>)/sqrt(2).
SpinGate hadamard_gate(double dy = 0.0, double dz = 0.0);

/// Inverse spin Hadamard with errors, Rz(dz) * Ry(3*pi/2 + dy).
/// At (0,0): |up> -> (|down>-|up>)/sqrt(2), |down> -> -(|down>+|up>)/sqrt(2).
SpinGate inverse_hadamard_gate(double dy = 0.0, double dz = 0.0);

/// Spin flip with errors, Rz(dz) * Ry(pi + dy).
/// At (0,0): |up> -> |down>, |down> -> -|up>.
SpinGate flip_gate(double dy = 0.0, double dz = 0.0);

/// Phase e^{i*phi} on the spin-up component.
SpinGate z_phase_gate(double phi);

/// cos(d/2) + sin(d/2) and cos(d/2) - sin(d/2); the error amplitudes the
/// gate entries are built from. eps_plus^2 + eps_minus^2 == 2.
double eps_plus(double delta);
double eps_minus(double delta);

/// Applies the gate to the spin factor of every term; photonic occupations
/// are untouched and normalization is preserved.
PureState apply_spin_gate(const PureState& state, const SpinGate& gate);

}  // namespace rss
