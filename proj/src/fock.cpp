#include "rss/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace rss {

namespace {

const char* channel_token(Channel c) {
  switch (c) {
    case Channel::resonant_h: return "H";
    case Channel::detuned_h: return "Ht";
    case Channel::orthogonal_v: return "V";
    case Channel::loss: return "loss";
  }
  return "?";
}

int channel_rank(Channel c) { return static_cast<int>(c); }

}  // namespace

bool operator==(const ModeAddress& a, const ModeAddress& b) {
  return a.vertex == b.vertex && a.qubit == b.qubit && a.bin == b.bin && a.channel == b.channel;
}

bool operator<(const ModeAddress& a, const ModeAddress& b) {
  if (a.vertex != b.vertex) return a.vertex < b.vertex;
  if (a.qubit != b.qubit) return a.qubit < b.qubit;
  if (a.bin != b.bin) return a.bin < b.bin;
  return channel_rank(a.channel) < channel_rank(b.channel);
}

std::string to_string(const ModeAddress& addr) {
  std::ostringstream out;
  out << '(' << addr.vertex << ',' << addr.qubit << ','
      << (addr.bin == TimeBin::early ? 'e' : 'l') << ',' << channel_token(addr.channel) << ')';
  return out.str();
}

BasisKet::BasisKet(Spin spin, std::vector<Occupation> occupations) : spin_(spin) {
  std::sort(occupations.begin(), occupations.end(),
            [](const Occupation& a, const Occupation& b) { return a.first < b.first; });
  for (const auto& [addr, count] : occupations) {
    if (count == 0) continue;
    if (count > kMaxOccupation)
      throw OverflowError("occupation above " + std::to_string(kMaxOccupation) + " photons at " +
                          to_string(addr));
    if (!occupations_.empty() && occupations_.back().first == addr)
      throw std::invalid_argument("duplicate mode address " + to_string(addr));
    occupations_.emplace_back(addr, count);
  }
}

int BasisKet::count(const ModeAddress& addr) const {
  auto it = std::lower_bound(occupations_.begin(), occupations_.end(), addr,
                             [](const Occupation& o, const ModeAddress& a) { return o.first < a; });
  if (it != occupations_.end() && it->first == addr) return it->second;
  return 0;
}

int BasisKet::total_photons() const {
  int total = 0;
  for (const auto& [addr, count] : occupations_) total += count;
  return total;
}

bool BasisKet::has_loss_modes() const {
  return std::any_of(occupations_.begin(), occupations_.end(),
                     [](const Occupation& o) { return o.first.channel == Channel::loss; });
}

BasisKet BasisKet::with_spin(Spin spin) const {
  BasisKet ket(*this);
  ket.spin_ = spin;
  return ket;
}

BasisKet BasisKet::add_photons(const ModeAddress& addr, int delta) const {
  BasisKet ket(*this);
  auto it = std::lower_bound(ket.occupations_.begin(), ket.occupations_.end(), addr,
                             [](const Occupation& o, const ModeAddress& a) { return o.first < a; });
  int current = (it != ket.occupations_.end() && it->first == addr) ? it->second : 0;
  int next = current + delta;
  if (next < 0) throw std::invalid_argument("negative occupation at " + to_string(addr));
  if (next > kMaxOccupation)
    throw OverflowError("occupation above " + std::to_string(kMaxOccupation) + " photons at " +
                        to_string(addr));
  if (it != ket.occupations_.end() && it->first == addr) {
    if (next == 0)
      ket.occupations_.erase(it);
    else
      it->second = static_cast<std::uint8_t>(next);
  } else if (next > 0) {
    ket.occupations_.insert(it, {addr, static_cast<std::uint8_t>(next)});
  }
  return ket;
}

bool operator<(const BasisKet& a, const BasisKet& b) {
  if (a.spin_ != b.spin_) return a.spin_ < b.spin_;
  return std::lexicographical_compare(
      a.occupations_.begin(), a.occupations_.end(), b.occupations_.begin(), b.occupations_.end(),
      [](const BasisKet::Occupation& x, const BasisKet::Occupation& y) {
        if (x.first != y.first) return x.first < y.first;
        return x.second < y.second;
      });
}

PureState PureState::single(BasisKet ket) {
  PureState state;
  state.terms_.emplace(std::move(ket), Amplitude(1.0, 0.0));
  return state;
}

PureState PureState::from_terms(TermMap terms) {
  double norm2 = 0.0;
  for (auto it = terms.begin(); it != terms.end();) {
    if (std::abs(it->second) < kPruneTolerance) {
      it = terms.erase(it);
    } else {
      norm2 += std::norm(it->second);
      ++it;
    }
  }
  if (norm2 <= 0.0) throw std::invalid_argument("cannot normalize a zero state");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& [ket, amp] : terms) amp *= scale;
  PureState state;
  state.terms_ = std::move(terms);
  return state;
}

Amplitude PureState::amplitude(const BasisKet& ket) const {
  auto it = terms_.find(ket);
  return it == terms_.end() ? Amplitude(0.0, 0.0) : it->second;
}

double PureState::norm_squared() const {
  double norm2 = 0.0;
  for (const auto& [ket, amp] : terms_) norm2 += std::norm(amp);
  return norm2;
}

bool PureState::has_loss_modes() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const auto& t) { return t.first.has_loss_modes(); });
}

Mixture Mixture::pure(PureState state) {
  Mixture m;
  m.components_.push_back({1.0, std::move(state)});
  return m;
}

Mixture Mixture::from_components(std::vector<Component> components) {
  double total = 0.0;
  for (const auto& c : components) {
    if (c.probability <= 0.0 || c.probability > 1.0 + kNormTolerance)
      throw std::invalid_argument("mixture probability outside (0, 1]");
    if (std::abs(c.state.norm_squared() - 1.0) > kNormTolerance)
      throw std::invalid_argument("mixture component not normalized");
    total += c.probability;
  }
  if (std::abs(total - 1.0) > kNormTolerance)
    throw std::invalid_argument("mixture probabilities do not sum to 1");
  Mixture m;
  m.components_ = std::move(components);
  return m;
}

Amplitude inner_product(const PureState& a, const PureState& b) {
  // Iterate the smaller map, probe the larger.
  const PureState& small = a.term_count() <= b.term_count() ? a : b;
  const PureState& large = a.term_count() <= b.term_count() ? b : a;
  Amplitude sum(0.0, 0.0);
  for (const auto& [ket, amp] : small.terms()) {
    const Amplitude other = large.amplitude(ket);
    if (&small == &a)
      sum += std::conj(amp) * other;
    else
      sum += std::conj(other) * amp;
  }
  return sum;
}

namespace {

void check_target(const PureState& target) {
  if (target.has_loss_modes())
    throw std::invalid_argument("fidelity target contains loss-channel occupations");
}

}  // namespace

double fidelity(const PureState& state, const PureState& target) {
  check_target(target);
  return std::norm(inner_product(target, state));
}

double fidelity(const Mixture& state, const PureState& target) {
  check_target(target);
  double sum = 0.0;
  for (const auto& c : state.components()) sum += c.probability * std::norm(inner_product(target, c.state));
  return sum;
}

Mixture trace_loss_modes(const PureState& state) {
  using LossPattern = std::vector<BasisKet::Occupation>;
  std::map<LossPattern, PureState::TermMap> groups;
  for (const auto& [ket, amp] : state.terms()) {
    LossPattern pattern;
    std::vector<BasisKet::Occupation> kept;
    for (const auto& occ : ket.occupations()) {
      if (occ.first.channel == Channel::loss)
        pattern.push_back(occ);
      else
        kept.push_back(occ);
    }
    groups[std::move(pattern)].emplace(BasisKet(ket.spin(), std::move(kept)), amp);
  }

  std::vector<Mixture::Component> components;
  for (auto& [pattern, terms] : groups) {
    double prob = 0.0;
    for (const auto& [ket, amp] : terms) prob += std::norm(amp);
    if (prob < kPruneTolerance * kPruneTolerance) continue;
    components.push_back({prob, PureState::from_terms(std::move(terms))});
  }
  return Mixture::from_components(std::move(components));
}

Projection project(const PureState& state, const std::function<bool(const BasisKet&)>& keep) {
  PureState::TermMap terms;
  double prob = 0.0;
  for (const auto& [ket, amp] : state.terms()) {
    if (!keep(ket)) continue;
    prob += std::norm(amp);
    terms.emplace(ket, amp);
  }
  Projection result;
  result.probability = prob;
  if (prob > kPruneTolerance * kPruneTolerance) result.state = PureState::from_terms(std::move(terms));
  return result;
}

PureState strip_modes(const PureState& state,
                      const std::function<bool(const ModeAddress&)>& match) {
  PureState::TermMap terms;
  for (const auto& [ket, amp] : state.terms()) {
    std::vector<BasisKet::Occupation> kept;
    for (const auto& occ : ket.occupations())
      if (!match(occ.first)) kept.push_back(occ);
    auto [it, inserted] = terms.emplace(BasisKet(ket.spin(), std::move(kept)), amp);
    if (!inserted)
      throw std::invalid_argument("strip_modes would merge distinct terms; project first");
  }
  return PureState::from_terms(std::move(terms));
}

PureState tensor(const PureState& a, const PureState& photonic) {
  PureState::TermMap terms;
  for (const auto& [ket_b, amp_b] : photonic.terms())
    if (ket_b.spin() != Spin::down)
      throw std::invalid_argument("tensor operand must be photonic (spin down throughout)");
  for (const auto& [ket_a, amp_a] : a.terms()) {
    for (const auto& [ket_b, amp_b] : photonic.terms()) {
      BasisKet combined = ket_a;
      for (const auto& [addr, count] : ket_b.occupations()) {
        if (ket_a.count(addr) != 0)
          throw std::invalid_argument("tensor operands share mode " + to_string(addr));
        combined = combined.add_photons(addr, count);
      }
      terms[combined] += amp_a * amp_b;
    }
  }
  return PureState::from_terms(std::move(terms));
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

namespace {

std::string format_amplitude(const Amplitude& amp) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.12g%+.12gi", amp.real(), amp.imag());
  return buf;
}

void append_term(std::ostringstream& out, const BasisKet& ket, const Amplitude& amp) {
  out << format_amplitude(amp) << " |" << (ket.spin() == Spin::down ? "down" : "up");
  if (!ket.occupations().empty()) {
    out << ';';
    for (const auto& [addr, count] : ket.occupations())
      out << ' ' << to_string(addr) << ':' << static_cast<int>(count);
  }
  out << ">\n";
}

}  // namespace

std::string to_debug_text(const PureState& state) {
  std::ostringstream out;
  for (const auto& [ket, amp] : state.terms()) append_term(out, ket, amp);
  return out.str();
}

std::string to_debug_text(const Mixture& mixture) {
  std::ostringstream out;
  for (const auto& c : mixture.components()) {
    out << "component p=" << format_double(c.probability) << "\n";
    out << to_debug_text(c.state);
  }
  return out.str();
}

}  // namespace rss
