#include "rss/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace rss {

namespace {

std::string trim(const std::string& text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  return text.substr(begin, end - begin);
}

TimeBin parse_bin(const std::string& text, const std::string& context) {
  if (text == "early" || text == "e") return TimeBin::early;
  if (text == "late" || text == "l") return TimeBin::late;
  throw ParseError(context + ": expected 'early' or 'late', got '" + text + "'");
}

/// Splits "name[1,2]" into the base name and index tokens.
std::pair<std::string, std::vector<std::string>> split_indexed_key(const std::string& key,
                                                                   const std::string& context) {
  const std::size_t open = key.find('[');
  if (open == std::string::npos) return {key, {}};
  if (key.back() != ']') throw ParseError(context + ": malformed index suffix in '" + key + "'");
  const std::string base = trim(key.substr(0, open));
  const std::string inner = key.substr(open + 1, key.size() - open - 2);
  return {base, split_trimmed(inner, ',')};
}

}  // namespace

double parse_double(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (trim(text.substr(used)).empty()) return value;
  } catch (const std::exception&) {
  }
  throw ParseError(context + ": expected a number, got '" + text + "'");
}

long long parse_int(const std::string& text, const std::string& context) {
  try {
    std::size_t used = 0;
    const long long value = std::stoll(text, &used);
    if (trim(text.substr(used)).empty()) return value;
  } catch (const std::exception&) {
  }
  throw ParseError(context + ": expected an integer, got '" + text + "'");
}

bool parse_bool(const std::string& text, const std::string& context) {
  if (text == "true" || text == "on" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "off" || text == "0" || text == "no") return false;
  throw ParseError(context + ": expected a boolean, got '" + text + "'");
}

std::vector<std::string> split_trimmed(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == separator) {
      parts.push_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(trim(current));
  if (parts.size() == 1 && parts.front().empty()) parts.clear();
  return parts;
}

RotationError parse_rotation(const std::string& text, const std::string& context) {
  const auto parts = split_trimmed(text, ',');
  if (parts.size() != 2) throw ParseError(context + ": expected 'dy, dz', got '" + text + "'");
  return {parse_double(parts[0], context), parse_double(parts[1], context)};
}

ConfigDoc ConfigDoc::parse_string(const std::string& text, const std::string& origin) {
  ConfigDoc doc;
  doc.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  std::string current_section;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = origin + ":" + std::to_string(line_number);
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(where + ": unterminated section header");
      current_section = trim(line.substr(1, line.size() - 2));
      if (current_section.empty()) throw ParseError(where + ": empty section name");
      if (!doc.has_section(current_section)) doc.sections_.emplace_back(current_section, std::vector<Entry>{});
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
    if (current_section.empty()) throw ParseError(where + ": entry before any [section]");
    Entry entry;
    entry.key = trim(line.substr(0, eq));
    entry.value = trim(line.substr(eq + 1));
    entry.line = line_number;
    if (entry.key.empty()) throw ParseError(where + ": empty key");
    for (auto& [name, entries] : doc.sections_) {
      if (name == current_section) {
        entries.push_back(std::move(entry));
        break;
      }
    }
  }
  return doc;
}

ConfigDoc ConfigDoc::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str(), path);
}

bool ConfigDoc::has_section(const std::string& name) const {
  for (const auto& [section, entries] : sections_)
    if (section == name) return true;
  return false;
}

const std::vector<ConfigDoc::Entry>& ConfigDoc::section(const std::string& name) const {
  static const std::vector<Entry> empty;
  for (const auto& [section, entries] : sections_)
    if (section == name) return entries;
  return empty;
}

std::optional<std::string> ConfigDoc::get(const std::string& dotted) const {
  const std::size_t dot = dotted.find('.');
  if (dot == std::string::npos) return std::nullopt;
  const std::string section_name = dotted.substr(0, dot);
  const std::string key = dotted.substr(dot + 1);
  const std::vector<Entry>& entries = section(section_name);
  // Last assignment wins.
  std::optional<std::string> value;
  for (const auto& entry : entries)
    if (entry.key == key) value = entry.value;
  return value;
}

void ConfigDoc::set(const std::string& dotted, const std::string& value) {
  const std::size_t dot = dotted.find('.');
  if (dot == std::string::npos) throw ParseError("config key must be 'section.key'");
  const std::string section_name = dotted.substr(0, dot);
  const std::string key = dotted.substr(dot + 1);
  for (auto& [name, entries] : sections_) {
    if (name != section_name) continue;
    for (auto& entry : entries) {
      if (entry.key == key) {
        entry.value = value;
        return;
      }
    }
    entries.push_back({key, value, 0});
    return;
  }
  sections_.emplace_back(section_name, std::vector<Entry>{{key, value, 0}});
}

ProtocolConfig ConfigDoc::protocol_config() const {
  ProtocolConfig config;
  for (const auto& entry : section("protocol")) {
    const std::string context = origin_ + ": protocol." + entry.key;
    if (entry.key == "vertices") {
      config.vertex_count = static_cast<int>(parse_int(entry.value, context));
    } else if (entry.key == "blocks") {
      config.blocks.clear();
      for (const std::string& vertex_part : split_trimmed(entry.value, ';')) {
        std::vector<int> sizes;
        for (const std::string& size : split_trimmed(vertex_part, ','))
          sizes.push_back(static_cast<int>(parse_int(size, context)));
        config.blocks.push_back(std::move(sizes));
      }
    } else if (entry.key == "step5b_mode") {
      if (entry.value == "alternating")
        config.step5b_mode = Step5bMode::alternating;
      else if (entry.value == "consistent")
        config.step5b_mode = Step5bMode::consistent;
      else
        throw ParseError(context + ": expected 'alternating' or 'consistent'");
    } else if (entry.key == "initial_sign") {
      if (entry.value == "plus")
        config.initial_sign = InitialSign::plus;
      else if (entry.value == "minus")
        config.initial_sign = InitialSign::minus;
      else
        throw ParseError(context + ": expected 'plus' or 'minus'");
    } else {
      throw ParseError(context + ": unknown protocol key");
    }
  }
  // A vertex count without explicit blocks means single-excitation vertices.
  if (config.blocks.empty())
    config.blocks.assign(static_cast<std::size_t>(config.vertex_count), {1});
  if (static_cast<int>(config.blocks.size()) != config.vertex_count)
    throw ParseError(origin_ + ": protocol.blocks lists " + std::to_string(config.blocks.size()) +
                     " vertices but protocol.vertices = " + std::to_string(config.vertex_count));
  try {
    config.validate();
  } catch (const std::invalid_argument& error) {
    throw ParseError(origin_ + ": " + error.what());
  }
  return config;
}

ErrorModel ConfigDoc::error_model(const ProtocolConfig& config) const {
  ErrorModel errors;
  for (const auto& entry : section("errors")) {
    const std::string context = origin_ + ": errors." + entry.key;
    const auto [base, indices] = split_indexed_key(entry.key, context);

    const auto need_indices = [&](std::size_t count) {
      if (indices.size() != count)
        throw ParseError(context + ": expected " + std::to_string(count) + " indices");
    };

    if (base == "spin_init_fidelity") {
      need_indices(0);
      errors.spin_init_fidelity = parse_double(entry.value, context);
    } else if (base == "step1b") {
      need_indices(0);
      errors.step1b = parse_rotation(entry.value, context);
    } else if (base == "step3" || base == "step5a") {
      auto& param = base == "step3" ? errors.step3 : errors.step5a;
      if (indices.empty()) {
        param.fallback = parse_rotation(entry.value, context);
      } else {
        need_indices(2);
        param.set({static_cast<int>(parse_int(indices[0], context)),
                   static_cast<int>(parse_int(indices[1], context))},
                  parse_rotation(entry.value, context));
      }
    } else if (base == "step5b") {
      if (indices.empty()) {
        errors.step5b.fallback = parse_rotation(entry.value, context);
      } else {
        need_indices(1);
        errors.step5b.set(static_cast<int>(parse_int(indices[0], context)),
                          parse_rotation(entry.value, context));
      }
    } else if (base == "excitation" || base == "off_resonant" || base == "cyclicity") {
      auto& param = base == "excitation" ? errors.excitation
                    : base == "off_resonant" ? errors.off_resonant
                                             : errors.cyclicity;
      const double value = parse_double(entry.value, context);
      if (indices.empty()) {
        param.fallback = value;
      } else if (indices.size() == 2) {
        const int n = static_cast<int>(parse_int(indices[0], context));
        const int m = static_cast<int>(parse_int(indices[1], context));
        param.set({n, m, TimeBin::early}, value);
        param.set({n, m, TimeBin::late}, value);
      } else {
        need_indices(3);
        param.set({static_cast<int>(parse_int(indices[0], context)),
                   static_cast<int>(parse_int(indices[1], context)),
                   parse_bin(indices[2], context)},
                  value);
      }
    } else if (base == "loss_early" || base == "loss_late") {
      auto& param = base == "loss_early" ? errors.loss_early : errors.loss_late;
      const double value = parse_double(entry.value, context);
      if (indices.empty()) {
        param.fallback = value;
      } else {
        need_indices(2);
        param.set({static_cast<int>(parse_int(indices[0], context)),
                   static_cast<int>(parse_int(indices[1], context))},
                  value);
      }
    } else {
      throw ParseError(context + ": unknown error parameter");
    }
  }
  try {
    errors.validate(config);
  } catch (const std::invalid_argument& error) {
    throw ParseError(origin_ + ": " + error.what());
  }
  return errors;
}

fusion::FusionScenario ConfigDoc::fusion_scenario() const {
  fusion::FusionScenario scenario;
  if (!has_section("fusion")) throw ParseError(origin_ + ": missing [fusion] section");
  for (const auto& entry : section("fusion")) {
    const std::string context = origin_ + ": fusion." + entry.key;
    if (entry.key == "scenario") {
      try {
        scenario.kind = fusion::scenario_from_string(entry.value);
      } catch (const std::invalid_argument& error) {
        throw ParseError(context + ": " + error.what());
      }
    } else if (entry.key == "qubits_per_vertex") {
      scenario.qubits_per_vertex = static_cast<int>(parse_int(entry.value, context));
    } else if (entry.key == "with_neighbor") {
      scenario.with_neighbor = parse_bool(entry.value, context);
    } else if (entry.key == "delta_y") {
      scenario.delta_y = parse_double(entry.value, context);
    } else if (entry.key == "probability") {
      scenario.probability = parse_double(entry.value, context);
    } else if (entry.key == "discrimination") {
      scenario.channel_discrimination = parse_bool(entry.value, context);
    } else if (entry.key == "m") {
      scenario.boost_m = static_cast<int>(parse_int(entry.value, context));
    } else if (entry.key == "eta") {
      scenario.eta = parse_double(entry.value, context);
    } else if (entry.key == "trials") {
      scenario.trials = parse_int(entry.value, context);
    } else if (entry.key == "seed") {
      scenario.seed = static_cast<std::uint64_t>(parse_int(entry.value, context));
    } else {
      throw ParseError(context + ": unknown fusion key");
    }
  }
  return scenario;
}

}  // namespace rss
