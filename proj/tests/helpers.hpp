#pragma once

#include <initializer_list>
#include <random>
#include <vector>

#include "rss/fock.hpp"

namespace rss::test {

inline ModeAddress addr(int n, int m, TimeBin bin, Channel channel = Channel::resonant_h) {
  ModeAddress a;
  a.vertex = static_cast<std::uint16_t>(n);
  a.qubit = static_cast<std::uint16_t>(m);
  a.bin = bin;
  a.channel = channel;
  return a;
}

inline BasisKet ket(Spin spin, std::initializer_list<ModeAddress> photons = {}) {
  std::vector<BasisKet::Occupation> occ;
  for (const ModeAddress& a : photons) occ.emplace_back(a, 1);
  return BasisKet(spin, std::move(occ));
}

inline PureState state_of(std::initializer_list<std::pair<BasisKet, Amplitude>> terms) {
  PureState::TermMap map;
  for (const auto& [k, amp] : terms) map[k] += amp;
  return PureState::from_terms(std::move(map));
}

/// Random normalized state over a small fixed mode set, for property tests.
inline PureState random_state(std::mt19937& rng, int max_terms = 6) {
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> n_terms(1, max_terms);
  std::normal_distribution<double> gauss(0.0, 1.0);
  PureState::TermMap terms;
  const int wanted = n_terms(rng);
  for (int i = 0; i < wanted; ++i) {
    std::vector<BasisKet::Occupation> occ;
    for (int q = 1; q <= 2; ++q) {
      if (coin(rng)) occ.emplace_back(addr(1, q, coin(rng) ? TimeBin::late : TimeBin::early), 1);
    }
    BasisKet key(coin(rng) ? Spin::up : Spin::down, std::move(occ));
    terms[key] += Amplitude(gauss(rng), gauss(rng));
  }
  for (auto it = terms.begin(); it != terms.end();) {
    it = std::abs(it->second) < 1e-9 ? terms.erase(it) : std::next(it);
  }
  if (terms.empty()) terms[BasisKet(Spin::down)] = 1.0;
  return PureState::from_terms(std::move(terms));
}

}  // namespace rss::test
