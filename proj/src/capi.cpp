#include "rss/rss.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "rss/boost_mc.hpp"
#include "rss/config.hpp"
#include "rss/fock.hpp"
#include "rss/formulas.hpp"
#include "rss/fusion.hpp"
#include "rss/protocol.hpp"
#include "rss/targets.hpp"

struct rss_config {
  rss::ConfigDoc doc;
};

struct rss_result {
  rss::ProtocolConfig config;
  rss::Mixture state;
};

namespace {

thread_local std::string g_last_error;

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out) std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

template <typename Fn>
rss_status guarded(Fn&& fn) {
  try {
    fn();
    return RSS_OK;
  } catch (const rss::ParseError& error) {
    g_last_error = error.what();
    return RSS_ERR_PARSE;
  } catch (const std::invalid_argument& error) {
    g_last_error = error.what();
    return RSS_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& error) {
    g_last_error = error.what();
    return RSS_ERR_INTERNAL;
  }
}

rss_status require(bool condition, const char* message) {
  if (condition) return RSS_OK;
  g_last_error = message;
  return RSS_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* rss_version(void) { return "0.1.0"; }

const char* rss_status_name(rss_status status) {
  switch (status) {
    case RSS_OK: return "ok";
    case RSS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case RSS_ERR_PARSE: return "parse_error";
    case RSS_ERR_SELF_CHECK: return "self_check_failed";
    case RSS_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* rss_last_error(void) { return g_last_error.c_str(); }

void rss_string_free(char* text) { std::free(text); }

rss_status rss_config_parse_file(const char* path, rss_config** out) {
  if (rss_status s = require(path && out, "null argument"); s != RSS_OK) return s;
  return guarded([&] { *out = new rss_config{rss::ConfigDoc::parse_file(path)}; });
}

rss_status rss_config_parse_string(const char* text, rss_config** out) {
  if (rss_status s = require(text && out, "null argument"); s != RSS_OK) return s;
  return guarded([&] { *out = new rss_config{rss::ConfigDoc::parse_string(text)}; });
}

rss_status rss_config_set(rss_config* config, const char* key, const char* value) {
  if (rss_status s = require(config && key && value, "null argument"); s != RSS_OK) return s;
  return guarded([&] { config->doc.set(key, value); });
}

rss_status rss_config_get(const rss_config* config, const char* key, char** out) {
  if (rss_status s = require(config && key && out, "null argument"); s != RSS_OK) return s;
  return guarded([&] {
    const auto value = config->doc.get(key);
    *out = value ? copy_string(*value) : nullptr;
  });
}

rss_status rss_config_validate(const rss_config* config) {
  if (rss_status s = require(config != nullptr, "null config"); s != RSS_OK) return s;
  return guarded([&] {
    const rss::ProtocolConfig protocol = config->doc.protocol_config();
    (void)config->doc.error_model(protocol);
  });
}

rss_status rss_config_total_photons(const rss_config* config, int* out) {
  if (rss_status s = require(config && out, "null argument"); s != RSS_OK) return s;
  return guarded([&] { *out = config->doc.protocol_config().total_photons(); });
}

void rss_config_free(rss_config* config) { delete config; }

rss_status rss_generate(const rss_config* config, rss_result** out) {
  if (rss_status s = require(config && out, "null argument"); s != RSS_OK) return s;
  return guarded([&] {
    const rss::ProtocolConfig protocol = config->doc.protocol_config();
    const rss::ErrorModel errors = config->doc.error_model(protocol);
    *out = new rss_result{protocol, rss::run_protocol(protocol, errors)};
  });
}

rss_status rss_result_fidelity(const rss_result* result, double* out) {
  if (rss_status s = require(result && out, "null argument"); s != RSS_OK) return s;
  return guarded([&] {
    const rss::PureState target = rss::build_target(result->config);
    double value = 0.0;
    for (const auto& component : result->state.components()) {
      if (component.state.has_loss_modes()) {
        value +=
            component.probability * rss::fidelity(rss::trace_loss_modes(component.state), target);
      } else {
        value += component.probability * rss::fidelity(component.state, target);
      }
    }
    *out = value;
  });
}

rss_status rss_simulated_fidelity(const rss_config* config, double* out) {
  if (rss_status s = require(config && out, "null argument"); s != RSS_OK) return s;
  return guarded([&] {
    const rss::ProtocolConfig protocol = config->doc.protocol_config();
    *out = rss::generation_fidelity(protocol, config->doc.error_model(protocol));
  });
}

rss_status rss_result_component_count(const rss_result* result, size_t* out) {
  if (rss_status s = require(result && out, "null argument"); s != RSS_OK) return s;
  *out = result->state.component_count();
  return RSS_OK;
}

rss_status rss_result_serialize(const rss_result* result, char** out) {
  if (rss_status s = require(result && out, "null argument"); s != RSS_OK) return s;
  return guarded([&] { *out = copy_string(rss::to_debug_text(result->state)); });
}

void rss_result_free(rss_result* result) { delete result; }

rss_status rss_closed_form(const rss_config* config, const char* mechanism, double* out) {
  if (rss_status s = require(config && mechanism && out, "null argument"); s != RSS_OK) return s;
  return guarded([&] {
    const rss::ProtocolConfig protocol = config->doc.protocol_config();
    const rss::ErrorModel errors = config->doc.error_model(protocol);
    *out = rss::formulas::closed_form(rss::mechanism_from_string(mechanism), protocol, errors);
  });
}

double rss_formula_spin_prep(double fs, double dy, double dz) {
  return rss::formulas::spin_prep(fs, dy, dz);
}

double rss_boost_success(int m, double eta) {
  return rss::formulas::boosted_fusion_success(m, eta);
}

int rss_boost_optimal_m(double eta) { return rss::formulas::optimal_fusion_m(eta); }

rss_status rss_fusion_report(const rss_config* config, char** out) {
  if (rss_status s = require(config && out, "null argument"); s != RSS_OK) return s;
  return guarded([&] {
    const rss::fusion::FusionScenario scenario = config->doc.fusion_scenario();
    const rss::fusion::FusionReport report = rss::fusion::run_fusion_scenario(scenario);
    *out = copy_string(rss::fusion::report_to_json(scenario, report));
  });
}

rss_status rss_boost_rate(int m, double eta, long long trials, uint64_t seed, double* rate,
                          double* standard_error) {
  if (rss_status s = require(rate && standard_error, "null argument"); s != RSS_OK) return s;
  return guarded([&] {
    const rss::fusion::BoostRate result = rss::fusion::boosted_fusion_rate(m, eta, trials, seed);
    *rate = result.rate;
    *standard_error = result.standard_error;
  });
}

rss_status rss_boost_trials_jsonl(int m, double eta, long long trials, uint64_t seed, char** out) {
  if (rss_status s = require(out != nullptr, "null argument"); s != RSS_OK) return s;
  return guarded([&] {
    std::ostringstream lines;
    for (long long k = 0; k < trials; ++k)
      lines << rss::fusion::outcome_to_json_line(rss::fusion::boosted_fusion_trial(m, eta, seed, k))
            << '\n';
    *out = copy_string(lines.str());
  });
}

}  // extern "C"
