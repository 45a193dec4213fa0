#pragma once

#include <span>
#include <vector>

#include "rss/protocol.hpp"

namespace rss {

enum class Mechanism {
  spin_prep,
  step3,
  step5a,
  step5b,
  excitation,
  off_resonant,
  cyclicity,
  loss,
  boost,
};

const char* to_string(Mechanism mechanism);
Mechanism mechanism_from_string(const std::string& name);

namespace formulas {

/// Fidelity under a mixed spin preparation of weight fs combined with
/// rotation errors on the preparing gate:
/// ((2*fs - 1) * cos(dy) * cos(dz) + 1) / 2.
double spin_prep(double fs, double dy, double dz);

/// Fidelity under flip errors between the bins of each sub-vertex block,
/// |prod_n cos(sum_j dz/2) prod_j cos(dy/2)|^2. `per_vertex[n]` lists the
/// (dy, dz) of every block of vertex n+1.
double step3_flip(const std::vector<std::vector<RotationError>>& per_vertex);

/// Same functional form over the flips that advance between blocks;
/// `per_vertex[n]` lists the J_n - 1 inter-block rotations of vertex n+1.
double step5a(const std::vector<std::vector<RotationError>>& per_vertex);

/// Fidelity under errors on the round-closing Hadamard-type gates, via the
/// alternating-amplitude recursion; reduces to |prod cos(d/2)|^2 when either
/// error component vanishes everywhere.
double step5b(const std::vector<RotationError>& per_round);

/// The reduced product form of step5b, valid with a single error component.
double step5b_reduced(const std::vector<RotationError>& per_round);

double excitation(std::span<const double> p_emit);        // prod p
double off_resonant(std::span<const double> p_dark);      // prod (1 - p)
double cyclicity(std::span<const double> p_return);       // prod p
double loss(std::span<const double> q_kept);              // prod q

/// Cyclicity of a transition whose decay is enhanced by a factor fp:
/// C = fp / (fp + 1).
double cyclicity_from_enhancement(double fp);

/// Success probability of repeat-until-success fusion on vertices of m
/// redundantly encoding qubits at end-to-end efficiency eta:
/// (1 - 2^-m) * eta^(2m).
double boosted_fusion_success(int m, double eta);

/// argmax_m of boosted_fusion_success over 1..max_m.
int optimal_fusion_m(double eta, int max_m = 64);

/// Closed form for one mechanism evaluated on a configured error model.
/// For `loss` the early and late probabilities must agree per qubit.
double closed_form(Mechanism mechanism, const ProtocolConfig& config, const ErrorModel& errors);

}  // namespace formulas

}  // namespace rss
