#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "rss/fock.hpp"

using namespace rss;
using test::addr;
using test::ket;
using test::state_of;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

TEST_CASE("basis kets canonicalize their occupation order") {
  const ModeAddress a = addr(1, 1, TimeBin::early);
  const ModeAddress b = addr(2, 1, TimeBin::late);
  const BasisKet forward(Spin::down, {{a, 1}, {b, 1}});
  const BasisKet backward(Spin::down, {{b, 1}, {a, 1}});
  CHECK(forward == backward);
  CHECK(forward.occupations().front().first == a);
  CHECK(forward.count(b) == 1);
  CHECK(forward.count(addr(3, 1, TimeBin::early)) == 0);
  CHECK(forward.total_photons() == 2);

  // Zero-count entries vanish; duplicates are rejected.
  const BasisKet sparse(Spin::up, {{a, 0}});
  CHECK(sparse.occupations().empty());
  CHECK_THROWS_AS(BasisKet(Spin::up, {{a, 1}, {a, 1}}), std::invalid_argument);
}

TEST_CASE("occupation arithmetic respects the photon cap") {
  const ModeAddress a = addr(1, 1, TimeBin::early);
  BasisKet k = ket(Spin::down);
  for (int i = 0; i < kMaxOccupation; ++i) k = k.add_photons(a, 1);
  CHECK(k.count(a) == kMaxOccupation);
  CHECK_THROWS_AS(k.add_photons(a, 1), OverflowError);
  CHECK_THROWS_AS(ket(Spin::down).add_photons(a, -1), std::invalid_argument);
  CHECK(k.add_photons(a, -kMaxOccupation).occupations().empty());
}

TEST_CASE("inserting the same configuration twice merges amplitudes") {
  const BasisKet k = ket(Spin::down, {addr(1, 1, TimeBin::early)});
  const PureState s = state_of({{k, 0.5}, {k, 0.5}});
  CHECK(s.term_count() == 1);
  CHECK(s.amplitude(k).real() == doctest::Approx(1.0));
}

TEST_CASE("normalization prunes negligible terms") {
  const BasisKet big = ket(Spin::down);
  const BasisKet tiny = ket(Spin::up);
  const PureState s = state_of({{big, 1.0}, {tiny, 1e-16}});
  CHECK(s.term_count() == 1);
  CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(PureState::from_terms({}), std::invalid_argument);
}

TEST_CASE("inner products") {
  const BasisKet down = ket(Spin::down);
  const BasisKet up = ket(Spin::up);
  const PureState plus = state_of({{down, kInvSqrt2}, {up, kInvSqrt2}});

  CHECK(inner_product(plus, plus).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(inner_product(PureState::single(down), PureState::single(up))) == 0.0);
  CHECK(inner_product(plus, PureState::single(down)).real() ==
        doctest::Approx(kInvSqrt2).epsilon(1e-12));

  // Conjugate symmetry on random states.
  std::mt19937 rng(7);
  for (int i = 0; i < 50; ++i) {
    const PureState a = test::random_state(rng);
    const PureState b = test::random_state(rng);
    const Amplitude ab = inner_product(a, b);
    const Amplitude ba = inner_product(b, a);
    CHECK(std::abs(ab - std::conj(ba)) < 1e-12);
  }
}

TEST_CASE("fidelity of pure states and mixtures") {
  const PureState down = PureState::single(ket(Spin::down));
  const PureState up = PureState::single(ket(Spin::up));
  CHECK(fidelity(down, down) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(down, up) == doctest::Approx(0.0).epsilon(1e-12));

  const Mixture half = Mixture::from_components({{0.5, down}, {0.5, up}});
  CHECK(fidelity(half, down) == doctest::Approx(0.5).epsilon(1e-12));

  const PureState lossy =
      PureState::single(ket(Spin::down, {addr(1, 1, TimeBin::early, Channel::loss)}));
  CHECK_THROWS_AS(fidelity(down, lossy), std::invalid_argument);
}

TEST_CASE("mixture validation") {
  const PureState down = PureState::single(ket(Spin::down));
  CHECK_THROWS_AS(Mixture::from_components({{0.5, down}}), std::invalid_argument);
  CHECK_THROWS_AS(Mixture::from_components({{0.0, down}, {1.0, down}}), std::invalid_argument);
}

namespace {

/// Brute-force loss oracle: attaches sqrt(q)/sqrt(p) kept/lost branches to
/// every photon of a lossless state by direct enumeration.
PureState expand_loss_by_hand(const PureState& input, double p_lost) {
  const double sq = std::sqrt(1.0 - p_lost);
  const double sp = std::sqrt(p_lost);
  PureState::TermMap terms;
  for (const auto& [k, amp] : input.terms()) {
    const auto& occ = k.occupations();
    const std::size_t n = occ.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      BasisKet branch(k.spin());
      Amplitude weight = amp;
      for (std::size_t i = 0; i < n; ++i) {
        ModeAddress lost = occ[i].first;
        lost.channel = Channel::loss;
        if (mask & (std::size_t{1} << i)) {
          branch = branch.add_photons(lost, occ[i].second);
          weight *= sp;
        } else {
          branch = branch.add_photons(occ[i].first, occ[i].second);
          weight *= sq;
        }
      }
      terms[branch] += weight;
    }
  }
  return PureState::from_terms(std::move(terms));
}

}  // namespace

TEST_CASE("trace over loss modes") {
  SUBCASE("no loss occupation gives one full-weight component") {
    const PureState s = state_of({{ket(Spin::down, {addr(1, 1, TimeBin::early)}), kInvSqrt2},
                                  {ket(Spin::up, {addr(1, 1, TimeBin::late)}), kInvSqrt2}});
    const Mixture traced = trace_loss_modes(s);
    REQUIRE(traced.component_count() == 1);
    CHECK(traced.components().front().probability == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity(traced, s) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("orthogonal loss patterns split with their squared weights") {
    const double q = 0.75;
    const PureState s = state_of(
        {{ket(Spin::down, {addr(1, 1, TimeBin::early)}), std::sqrt(q)},
         {ket(Spin::down, {addr(1, 1, TimeBin::early, Channel::loss)}), std::sqrt(1.0 - q)}});
    const Mixture traced = trace_loss_modes(s);
    REQUIRE(traced.component_count() == 2);
    double total = 0.0;
    for (const auto& c : traced.components()) {
      total += c.probability;
      CHECK(!c.state.has_loss_modes());
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("three-photon entangled vertex with uniform retention") {
    // (|eee> + |lll>)/sqrt(2) with q = 0.95 per photon; all-retained
    // component carries q^3 = 0.857375.
    const double q = 0.95;
    const PureState vertex = state_of(
        {{ket(Spin::down, {addr(1, 1, TimeBin::early), addr(1, 2, TimeBin::early),
                           addr(1, 3, TimeBin::early)}),
          kInvSqrt2},
         {ket(Spin::down,
              {addr(1, 1, TimeBin::late), addr(1, 2, TimeBin::late), addr(1, 3, TimeBin::late)}),
          kInvSqrt2}});
    const PureState lossy = expand_loss_by_hand(vertex, 1.0 - q);
    const Mixture traced = trace_loss_modes(lossy);

    double total = 0.0;
    double retained_probability = 0.0;
    for (const auto& c : traced.components()) {
      total += c.probability;
      if (std::abs(fidelity(c.state, vertex) - 1.0) < 1e-9) retained_probability += c.probability;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(retained_probability == doctest::Approx(0.857375).epsilon(1e-10));
    // No coherence survives between different retained patterns: overall
    // fidelity equals the all-retained weight alone.
    CHECK(fidelity(traced, vertex) == doctest::Approx(0.857375).epsilon(1e-10));
  }

  SUBCASE("fidelity after tracing matches the pattern-sum oracle") {
    std::mt19937 rng(11);
    for (int round = 0; round < 20; ++round) {
      const PureState clean = test::random_state(rng);
      const PureState lossy = expand_loss_by_hand(clean, 0.3);
      const Mixture traced = trace_loss_modes(lossy);

      // Oracle: enumerate loss patterns, project, expand directly.
      std::map<std::vector<BasisKet::Occupation>, PureState::TermMap> patterns;
      for (const auto& [k, amp] : lossy.terms()) {
        std::vector<BasisKet::Occupation> pattern, kept;
        for (const auto& occ : k.occupations())
          (occ.first.channel == Channel::loss ? pattern : kept).push_back(occ);
        patterns[pattern].emplace(BasisKet(k.spin(), kept), amp);
      }
      double oracle = 0.0;
      for (const auto& [pattern, terms] : patterns) {
        Amplitude overlap(0.0, 0.0);
        for (const auto& [k, amp] : terms) overlap += std::conj(clean.amplitude(k)) * amp;
        oracle += std::norm(overlap);
      }
      CHECK(fidelity(traced, clean) == doctest::Approx(oracle).epsilon(1e-10));

      double total = 0.0;
      for (const auto& c : traced.components()) total += c.probability;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("projection and stripping") {
  const PureState s = state_of({{ket(Spin::down, {addr(1, 1, TimeBin::early)}), 0.6},
                                {ket(Spin::up, {addr(1, 1, TimeBin::late)}), 0.8}});
  const Projection down = project(s, [](const BasisKet& k) { return k.spin() == Spin::down; });
  CHECK(down.probability == doctest::Approx(0.36).epsilon(1e-12));
  CHECK(down.state.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));

  const PureState stripped =
      strip_modes(down.state, [](const ModeAddress&) { return true; });
  CHECK(stripped.term_count() == 1);
  CHECK(stripped.terms().begin()->first.occupations().empty());

  // Stripping that would merge distinct configurations is refused.
  const PureState two = state_of({{ket(Spin::down, {addr(1, 1, TimeBin::early)}), kInvSqrt2},
                                  {ket(Spin::down, {addr(1, 1, TimeBin::late)}), kInvSqrt2}});
  CHECK_THROWS_AS(strip_modes(two, [](const ModeAddress&) { return true; }),
                  std::invalid_argument);
}

TEST_CASE("tensor products require disjoint modes and a photonic factor") {
  const PureState spinful = state_of({{ket(Spin::down, {addr(1, 1, TimeBin::early)}), kInvSqrt2},
                                      {ket(Spin::up, {addr(1, 1, TimeBin::late)}), kInvSqrt2}});
  const PureState photons = PureState::single(ket(Spin::down, {addr(2, 1, TimeBin::early)}));
  const PureState joined = tensor(spinful, photons);
  CHECK(joined.term_count() == 2);
  CHECK(joined.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(tensor(spinful, spinful), std::invalid_argument);
  const PureState up_factor = PureState::single(ket(Spin::up, {addr(3, 1, TimeBin::early)}));
  CHECK_THROWS_AS(tensor(spinful, up_factor), std::invalid_argument);
}

TEST_CASE("debug serialization is stable") {
  const PureState s = state_of(
      {{ket(Spin::down, {addr(1, 1, TimeBin::early)}), 0.5},
       {ket(Spin::down, {addr(1, 1, TimeBin::late)}), -0.5},
       {ket(Spin::up, {addr(1, 1, TimeBin::early), addr(1, 1, TimeBin::late, Channel::loss)}),
        Amplitude(0.0, kInvSqrt2)}});
  CHECK(to_debug_text(s) ==
        "0.5+0i |down; (1,1,e,H):1>\n"
        "-0.5+0i |down; (1,1,l,H):1>\n"
        "0+0.707106781187i |up; (1,1,e,H):1 (1,1,l,loss):1>\n");

  const Mixture m = Mixture::pure(PureState::single(ket(Spin::down)));
  CHECK(to_debug_text(m) == "component p=1\n1+0i |down>\n");
}
