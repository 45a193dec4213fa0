#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rss/fusion.hpp"
#include "rss/protocol.hpp"

namespace rss {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A flat declarative document with [section] headers and key = value lines.
/// '#' starts a comment. Scalar error parameters broadcast to every index;
/// bracketed keys like step3[2,1] override single entries.
class ConfigDoc {
 public:
  struct Entry {
    std::string key;
    std::string value;
    int line = 0;
  };

  static ConfigDoc parse_string(const std::string& text, const std::string& origin = "<string>");
  static ConfigDoc parse_file(const std::string& path);

  /// Lookup / upsert by "section.key".
  std::optional<std::string> get(const std::string& dotted) const;
  void set(const std::string& dotted, const std::string& value);

  bool has_section(const std::string& name) const;
  const std::vector<Entry>& section(const std::string& name) const;  // empty if absent

  /// Builds and validates the [protocol] section.
  ProtocolConfig protocol_config() const;
  /// Builds and validates the [errors] section against a configuration.
  ErrorModel error_model(const ProtocolConfig& config) const;
  /// Builds the [fusion] section.
  fusion::FusionScenario fusion_scenario() const;

 private:
  std::vector<std::pair<std::string, std::vector<Entry>>> sections_;
  std::string origin_;
};

// Shared small parsers; all throw ParseError with the offending text.
double parse_double(const std::string& text, const std::string& context);
long long parse_int(const std::string& text, const std::string& context);
bool parse_bool(const std::string& text, const std::string& context);
std::vector<std::string> split_trimmed(const std::string& text, char separator);
RotationError parse_rotation(const std::string& text, const std::string& context);

}  // namespace rss
