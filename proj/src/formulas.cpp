#include "rss/formulas.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace rss {

const char* to_string(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::spin_prep: return "spin_prep";
    case Mechanism::step3: return "step3";
    case Mechanism::step5a: return "step5a";
    case Mechanism::step5b: return "step5b";
    case Mechanism::excitation: return "excitation";
    case Mechanism::off_resonant: return "off_resonant";
    case Mechanism::cyclicity: return "cyclicity";
    case Mechanism::loss: return "loss";
    case Mechanism::boost: return "boost";
  }
  return "?";
}

Mechanism mechanism_from_string(const std::string& name) {
  for (Mechanism m : {Mechanism::spin_prep, Mechanism::step3, Mechanism::step5a,
                      Mechanism::step5b, Mechanism::excitation, Mechanism::off_resonant,
                      Mechanism::cyclicity, Mechanism::loss, Mechanism::boost}) {
    if (name == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown mechanism '" + name + "'");
}

namespace formulas {

double spin_prep(double fs, double dy, double dz) {
  if (!(fs >= 0.0 && fs <= 1.0)) throw std::invalid_argument("fs outside [0, 1]");
  return 0.5 * ((2.0 * fs - 1.0) * std::cos(dy) * std::cos(dz) + 1.0);
}

namespace {

double flip_product_form(const std::vector<std::vector<RotationError>>& per_vertex) {
  double amplitude = 1.0;
  for (const auto& rotations : per_vertex) {
    double dz_half_sum = 0.0;
    double cos_product = 1.0;
    for (const RotationError& rot : rotations) {
      dz_half_sum += rot.dz / 2.0;
      cos_product *= std::cos(rot.dy / 2.0);
    }
    amplitude *= std::cos(dz_half_sum) * cos_product;
  }
  return amplitude * amplitude;
}

}  // namespace

double step3_flip(const std::vector<std::vector<RotationError>>& per_vertex) {
  return flip_product_form(per_vertex);
}

double step5a(const std::vector<std::vector<RotationError>>& per_vertex) {
  return flip_product_form(per_vertex);
}

double step5b(const std::vector<RotationError>& per_round) {
  // f_a = e^{i dz_a / 2} (eps_a(dy_a) f_{a-1} + eps_{a+1}(dy_a) f*_{a-1}),
  // with eps parity following the alternation of the round-closing gates and
  // base f_0 = 1; the fidelity is (Re f_N / 2^N)^2.
  std::complex<double> f(1.0, 0.0);
  int parity = 1;
  for (const RotationError& rot : per_round) {
    const double eps_same = parity % 2 == 1 ? eps_minus(rot.dy) : eps_plus(rot.dy);
    const double eps_next = parity % 2 == 1 ? eps_plus(rot.dy) : eps_minus(rot.dy);
    const std::complex<double> phase(std::cos(rot.dz / 2.0), std::sin(rot.dz / 2.0));
    f = phase * (eps_same * f + eps_next * std::conj(f));
    ++parity;
  }
  const double scaled = f.real() / std::pow(2.0, static_cast<double>(per_round.size()));
  return scaled * scaled;
}

double step5b_reduced(const std::vector<RotationError>& per_round) {
  double amplitude = 1.0;
  for (const RotationError& rot : per_round) {
    if (rot.dy != 0.0 && rot.dz != 0.0)
      throw std::invalid_argument("reduced form needs one error component to vanish");
    amplitude *= std::cos((rot.dy != 0.0 ? rot.dy : rot.dz) / 2.0);
  }
  return amplitude * amplitude;
}

namespace {

double product(std::span<const double> values) {
  double result = 1.0;
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
    result *= v;
  }
  return result;
}

double product_complement(std::span<const double> values) {
  double result = 1.0;
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
    result *= 1.0 - v;
  }
  return result;
}

}  // namespace

double excitation(std::span<const double> p_emit) { return product(p_emit); }
double off_resonant(std::span<const double> p_dark) { return product_complement(p_dark); }
double cyclicity(std::span<const double> p_return) { return product(p_return); }
double loss(std::span<const double> q_kept) { return product(q_kept); }

double cyclicity_from_enhancement(double fp) {
  if (fp < 0.0) throw std::invalid_argument("enhancement factor must be >= 0");
  return fp / (fp + 1.0);
}

double boosted_fusion_success(int m, double eta) {
  if (m < 1) throw std::invalid_argument("fusion attempts m must be >= 1");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta outside [0, 1]");
  return (1.0 - std::pow(2.0, -m)) * std::pow(eta, 2.0 * m);
}

int optimal_fusion_m(double eta, int max_m) {
  if (max_m < 1) throw std::invalid_argument("max_m must be >= 1");
  int best = 1;
  double best_value = boosted_fusion_success(1, eta);
  for (int m = 2; m <= max_m; ++m) {
    const double value = boosted_fusion_success(m, eta);
    if (value > best_value) {
      best = m;
      best_value = value;
    }
  }
  return best;
}

double closed_form(Mechanism mechanism, const ProtocolConfig& config, const ErrorModel& errors) {
  errors.validate(config);
  switch (mechanism) {
    case Mechanism::spin_prep:
      return spin_prep(errors.spin_init_fidelity, errors.step1b.dy, errors.step1b.dz);
    case Mechanism::step3: {
      std::vector<std::vector<RotationError>> per_vertex;
      for (int n = 1; n <= config.vertex_count; ++n) {
        std::vector<RotationError> rotations;
        for (int j = 1; j <= config.block_count(n); ++j) rotations.push_back(errors.step3.get({n, j}));
        per_vertex.push_back(std::move(rotations));
      }
      return step3_flip(per_vertex);
    }
    case Mechanism::step5a: {
      std::vector<std::vector<RotationError>> per_vertex;
      for (int n = 1; n <= config.vertex_count; ++n) {
        std::vector<RotationError> rotations;
        for (int j = 1; j < config.block_count(n); ++j) rotations.push_back(errors.step5a.get({n, j}));
        per_vertex.push_back(std::move(rotations));
      }
      return step5a(per_vertex);
    }
    case Mechanism::step5b: {
      std::vector<RotationError> per_round;
      for (int n = 1; n <= config.vertex_count; ++n) per_round.push_back(errors.step5b.get(n));
      return step5b(per_round);
    }
    case Mechanism::excitation: {
      std::vector<double> p;
      for (int n = 1; n <= config.vertex_count; ++n)
        for (int m = 1; m <= config.vertex_size(n); ++m) {
          const double early = errors.excitation.get({n, m, TimeBin::early});
          const double late = errors.excitation.get({n, m, TimeBin::late});
          if (early != late)
            throw std::invalid_argument("closed form requires bin-uniform excitation");
          p.push_back(early);
        }
      return excitation(p);
    }
    case Mechanism::off_resonant: {
      std::vector<double> p;
      for (int n = 1; n <= config.vertex_count; ++n)
        for (int m = 1; m <= config.vertex_size(n); ++m) {
          const double early = errors.off_resonant.get({n, m, TimeBin::early});
          const double late = errors.off_resonant.get({n, m, TimeBin::late});
          if (early != late)
            throw std::invalid_argument("closed form requires bin-uniform off-resonant rate");
          p.push_back(early);
        }
      return off_resonant(p);
    }
    case Mechanism::cyclicity: {
      std::vector<double> p;
      for (int n = 1; n <= config.vertex_count; ++n)
        for (int m = 1; m <= config.vertex_size(n); ++m) {
          const double early = errors.cyclicity.get({n, m, TimeBin::early});
          const double late = errors.cyclicity.get({n, m, TimeBin::late});
          if (early != late)
            throw std::invalid_argument("closed form requires bin-uniform cyclicity");
          p.push_back(early);
        }
      return cyclicity(p);
    }
    case Mechanism::loss: {
      std::vector<double> q;
      for (int n = 1; n <= config.vertex_count; ++n)
        for (int m = 1; m <= config.vertex_size(n); ++m) {
          const double early = errors.loss_early.get({n, m});
          const double late = errors.loss_late.get({n, m});
          if (early != late)
            throw std::invalid_argument("closed form requires bin-uniform loss");
          q.push_back(1.0 - early);
        }
      return loss(q);
    }
    case Mechanism::boost:
      throw std::invalid_argument("boost has no per-state closed form; use boosted_fusion_success");
  }
  throw std::invalid_argument("unknown mechanism");
}

}  // namespace formulas

}  // namespace rss
