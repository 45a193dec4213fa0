// Command line front end for the resource-state simulator. All simulation
// work goes through the shared library's C API (rss/rss.h); this file only
// parses arguments, drives parameter grids and formats CSV/JSON output.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rss/rss.h"

namespace {

constexpr double kSelfCheckTolerance = 1e-9;
constexpr int kMaxSimulatedVertices = 6;
constexpr int kMaxSimulatedPhotons = 12;

bool g_verbose = false;

void log_note(const std::string& message) {
  if (g_verbose) std::cerr << "rss: " << message << "\n";
}

[[noreturn]] void fail(int code, const std::string& message) {
  std::cerr << "rss: error: " << message << "\n";
  std::exit(code);
}

int exit_code_for(rss_status status) {
  return (status == RSS_ERR_PARSE || status == RSS_ERR_INVALID_ARGUMENT) ? 2 : 1;
}

void check(rss_status status, const std::string& what) {
  if (status != RSS_OK) fail(exit_code_for(status), what + ": " + rss_last_error());
}

struct ConfigHandle {
  rss_config* ptr = nullptr;
  ~ConfigHandle() { rss_config_free(ptr); }
};

void load_config(const std::string& path, ConfigHandle& config) {
  check(rss_config_parse_file(path.c_str(), &config.ptr), "loading '" + path + "'");
  log_note("loaded configuration " + path);
}

std::optional<std::string> config_get(const rss_config* config, const std::string& key) {
  char* raw = nullptr;
  check(rss_config_get(config, key.c_str(), &raw), "reading " + key);
  if (!raw) return std::nullopt;
  std::string value(raw);
  rss_string_free(raw);
  return value;
}

void config_set(rss_config* config, const std::string& key, const std::string& value) {
  check(rss_config_set(config, key.c_str(), value.c_str()), "setting " + key);
}

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(1, "cannot write '" + path + "'");
  out << content;
}

/// "start,stop,count" inclusive grid, or a single value.
std::vector<double> parse_grid(const std::string& text, const std::string& what) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, ',')) parts.push_back(part);
  try {
    if (parts.size() == 1) return {std::stod(parts[0])};
    if (parts.size() == 3) {
      const double start = std::stod(parts[0]);
      const double stop = std::stod(parts[1]);
      const int count = std::stoi(parts[2]);
      if (count < 1) throw std::invalid_argument("count");
      std::vector<double> grid;
      for (int i = 0; i < count; ++i)
        grid.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
      return grid;
    }
  } catch (const std::exception&) {
  }
  fail(2, what + ": expected 'value' or 'start, stop, count', got '" + text + "'");
}

std::vector<double> grid_or(const rss_config* config, const std::string& key, double fallback) {
  const auto value = config_get(config, key);
  if (!value) return {fallback};
  return parse_grid(*value, key);
}

/// "lo:hi[:count]" for command line ranges.
std::vector<double> parse_range_flag(const std::string& text, const std::string& what) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, ':')) parts.push_back(part);
  try {
    if (parts.size() == 1) return {std::stod(parts[0])};
    if (parts.size() == 2) {
      // integer-stepped inclusive range
      std::vector<double> grid;
      for (int v = std::stoi(parts[0]); v <= std::stoi(parts[1]); ++v) grid.push_back(v);
      if (!grid.empty()) return grid;
    }
    if (parts.size() == 3) {
      const double start = std::stod(parts[0]);
      const double stop = std::stod(parts[1]);
      const int count = std::stoi(parts[2]);
      std::vector<double> grid;
      for (int i = 0; i < count; ++i)
        grid.push_back(count == 1 ? start : start + (stop - start) * i / (count - 1));
      if (!grid.empty()) return grid;
    }
  } catch (const std::exception&) {
  }
  fail(2, what + ": expected 'v', 'lo:hi' or 'start:stop:count', got '" + text + "'");
}

// ---------------------------------------------------------------------------

int cmd_generate(const std::string& config_path, const std::string& out_path) {
  ConfigHandle config;
  load_config(config_path, config);

  rss_result* result = nullptr;
  check(rss_generate(config.ptr, &result), "generation");
  std::unique_ptr<rss_result, decltype(&rss_result_free)> guard(result, rss_result_free);

  double fidelity = 0.0;
  check(rss_result_fidelity(result, &fidelity), "fidelity");
  size_t components = 0;
  check(rss_result_component_count(result, &components), "component count");
  char* dump = nullptr;
  check(rss_result_serialize(result, &dump), "serialization");

  std::ostringstream out;
  out << "fidelity = " << fmt(fidelity) << "\n";
  out << "components = " << components << "\n";
  out << dump;
  rss_string_free(dump);
  write_output(out_path, out.str());
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepRow {
  std::vector<std::pair<std::string, std::string>> columns;
};

struct SweepResult {
  std::vector<std::string> header;
  std::vector<SweepRow> rows;
  double worst_difference = 0.0;
  bool any_checked = false;
};

bool is_angle_mechanism(const std::string& mechanism) {
  return mechanism == "step3" || mechanism == "step5a" || mechanism == "step5b";
}

bool is_probability_mechanism(const std::string& mechanism) {
  return mechanism == "excitation" || mechanism == "off_resonant" ||
         mechanism == "cyclicity" || mechanism == "loss";
}

void apply_mechanism(rss_config* config, const std::string& mechanism, double a, double b,
                     double fs) {
  const std::string rotation = fmt(a) + ", " + fmt(b);
  if (mechanism == "spin_prep") {
    config_set(config, "errors.spin_init_fidelity", fmt(fs));
    config_set(config, "errors.step1b", rotation);
  } else if (mechanism == "step3") {
    config_set(config, "errors.step3", rotation);
  } else if (mechanism == "step5a") {
    config_set(config, "errors.step5a", rotation);
  } else if (mechanism == "step5b") {
    config_set(config, "errors.step5b", rotation);
  } else if (mechanism == "excitation") {
    config_set(config, "errors.excitation", fmt(a));
  } else if (mechanism == "off_resonant") {
    config_set(config, "errors.off_resonant", fmt(a));
  } else if (mechanism == "cyclicity") {
    config_set(config, "errors.cyclicity", fmt(a));
  } else if (mechanism == "loss") {
    config_set(config, "errors.loss_early", fmt(a));
    config_set(config, "errors.loss_late", fmt(a));
  } else {
    fail(2, "unknown sweep mechanism '" + mechanism + "'");
  }
}

SweepResult run_sweep(rss_config* config, bool closed_form_only, long long trials,
                      uint64_t seed) {
  const auto mechanism_value = config_get(config, "sweep.mechanism");
  if (!mechanism_value) fail(2, "sweep requires sweep.mechanism");
  const std::string mechanism = *mechanism_value;

  if (const auto flag = config_get(config, "sweep.closed_form_only"))
    closed_form_only = closed_form_only || *flag == "true" || *flag == "on" || *flag == "1";

  SweepResult result;

  if (mechanism == "boost") {
    result.header = {"eta", "m", "closed_form", "monte_carlo", "standard_error", "optimal_m"};
    const std::vector<double> etas = grid_or(config, "sweep.eta", 0.95);
    const std::vector<double> ms = grid_or(config, "sweep.m", 3);
    for (double eta : etas) {
      for (double m_raw : ms) {
        const int m = static_cast<int>(m_raw);
        SweepRow row;
        row.columns.emplace_back("eta", fmt(eta));
        row.columns.emplace_back("m", std::to_string(m));
        row.columns.emplace_back("closed_form", fmt(rss_boost_success(m, eta)));
        if (closed_form_only) {
          row.columns.emplace_back("monte_carlo", "");
          row.columns.emplace_back("standard_error", "");
        } else {
          double rate = 0.0, se = 0.0;
          check(rss_boost_rate(m, eta, trials, seed, &rate, &se), "monte carlo");
          row.columns.emplace_back("monte_carlo", fmt(rate));
          row.columns.emplace_back("standard_error", fmt(se));
        }
        row.columns.emplace_back("optimal_m", std::to_string(rss_boost_optimal_m(eta)));
        result.rows.push_back(std::move(row));
      }
    }
    return result;
  }

  // Photon-count scaling sweeps rebuild the shape per row as a chain of
  // single-qubit vertices.
  std::vector<double> photon_grid{0};
  bool photon_sweep = false;
  if (const auto photons = config_get(config, "sweep.photons")) {
    photon_grid = parse_grid(*photons, "sweep.photons");
    photon_sweep = true;
  }

  std::vector<double> fs_grid{1.0}, a_grid{0.0}, b_grid{0.0};
  if (mechanism == "spin_prep") {
    fs_grid = grid_or(config, "sweep.fs", 1.0);
    a_grid = grid_or(config, "sweep.dy", 0.0);
    b_grid = grid_or(config, "sweep.dz", 0.0);
    result.header = {"fs", "dy", "dz"};
  } else if (is_angle_mechanism(mechanism)) {
    a_grid = grid_or(config, "sweep.dy", 0.0);
    b_grid = grid_or(config, "sweep.dz", 0.0);
    result.header = {"dy", "dz"};
  } else if (is_probability_mechanism(mechanism)) {
    const auto p = config_get(config, "sweep.p");
    if (!p) fail(2, "sweep mechanism '" + mechanism + "' requires sweep.p");
    a_grid = parse_grid(*p, "sweep.p");
    result.header = {"p"};
  } else {
    fail(2, "unknown sweep mechanism '" + mechanism + "'");
  }
  if (photon_sweep) result.header.insert(result.header.begin(), "photons");
  result.header.push_back("closed_form");
  result.header.push_back("simulated");
  result.header.push_back("abs_diff");

  for (double photons_raw : photon_grid) {
    const int photons = static_cast<int>(photons_raw);
    if (photon_sweep) {
      std::string blocks;
      for (int k = 0; k < photons; ++k) blocks += k ? "; 1" : "1";
      config_set(config, "protocol.vertices", std::to_string(photons));
      config_set(config, "protocol.blocks", blocks);
    }
    int total_photons = 0;
    check(rss_config_total_photons(config, &total_photons), "shape");
    for (double fs : fs_grid) {
      for (double a : a_grid) {
        for (double b : b_grid) {
          apply_mechanism(config, mechanism, a, b, fs);

          SweepRow row;
          if (photon_sweep) row.columns.emplace_back("photons", std::to_string(photons));
          if (mechanism == "spin_prep") row.columns.emplace_back("fs", fmt(fs));
          if (mechanism == "spin_prep" || is_angle_mechanism(mechanism)) {
            row.columns.emplace_back("dy", fmt(a));
            row.columns.emplace_back("dz", fmt(b));
          } else {
            row.columns.emplace_back("p", fmt(a));
          }

          double closed = 0.0;
          check(rss_closed_form(config, mechanism.c_str(), &closed), "closed form");
          row.columns.emplace_back("closed_form", fmt(closed));

          const bool simulate = !closed_form_only && total_photons <= kMaxSimulatedPhotons &&
                                (!photon_sweep || photons <= kMaxSimulatedVertices);
          if (simulate) {
            double simulated = 0.0;
            check(rss_simulated_fidelity(config, &simulated), "simulation");
            const double diff = std::abs(closed - simulated);
            row.columns.emplace_back("simulated", fmt(simulated));
            row.columns.emplace_back("abs_diff", fmt(diff));
            result.worst_difference = std::max(result.worst_difference, diff);
            result.any_checked = true;
          } else {
            row.columns.emplace_back("simulated", "");
            row.columns.emplace_back("abs_diff", "");
          }
          result.rows.push_back(std::move(row));
        }
      }
    }
  }
  return result;
}

std::string render_csv(const SweepResult& result) {
  std::ostringstream out;
  for (std::size_t i = 0; i < result.header.size(); ++i)
    out << (i ? "," : "") << result.header[i];
  out << "\n";
  for (const SweepRow& row : result.rows) {
    for (std::size_t i = 0; i < row.columns.size(); ++i)
      out << (i ? "," : "") << row.columns[i].second;
    out << "\n";
  }
  return out.str();
}

std::string render_json(const SweepResult& result) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const SweepRow& row : result.rows) {
    nlohmann::ordered_json entry;
    for (const auto& [key, value] : row.columns) entry[key] = value;
    rows.push_back(std::move(entry));
  }
  return rows.dump(2) + "\n";
}

int cmd_sweep(const std::string& config_path, const std::string& out_path,
              const std::string& format, bool closed_form_only, long long trials, uint64_t seed) {
  ConfigHandle config;
  load_config(config_path, config);
  const SweepResult result = run_sweep(config.ptr, closed_form_only, trials, seed);
  write_output(out_path, format == "json" ? render_json(result) : render_csv(result));
  log_note("sweep finished: " + std::to_string(result.rows.size()) + " rows, worst |closed-sim| = " +
           fmt(result.worst_difference));
  if (result.any_checked && result.worst_difference >= kSelfCheckTolerance) {
    std::cerr << "rss: self-check failed: |closed_form - simulated| = "
              << fmt(result.worst_difference) << "\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_fusion(const std::string& config_path, const std::string& out_path,
               std::optional<long long> trials, std::optional<uint64_t> seed,
               const std::string& records_path) {
  ConfigHandle config;
  load_config(config_path, config);
  if (trials) config_set(config.ptr, "fusion.trials", std::to_string(*trials));
  if (seed) config_set(config.ptr, "fusion.seed", std::to_string(*seed));

  char* report = nullptr;
  check(rss_fusion_report(config.ptr, &report), "fusion scenario");
  std::string text(report);
  rss_string_free(report);
  write_output(out_path, text + "\n");

  if (!records_path.empty()) {
    const auto scenario = config_get(config.ptr, "fusion.scenario");
    if (!scenario || *scenario != "boost")
      fail(2, "--records requires the boost scenario");
    const auto get_or = [&](const std::string& key, const std::string& fallback) {
      const auto value = config_get(config.ptr, key);
      return value ? *value : fallback;
    };
    char* lines = nullptr;
    check(rss_boost_trials_jsonl(std::stoi(get_or("fusion.m", "3")),
                                 std::stod(get_or("fusion.eta", "0.95")),
                                 std::stoll(get_or("fusion.trials", "100000")),
                                 std::stoull(get_or("fusion.seed", "1")), &lines),
          "boost trials");
    write_output(records_path, lines);
    rss_string_free(lines);
  }
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_boost_scan(const std::string& eta_range, const std::string& m_range,
                   long long trials, uint64_t seed, const std::string& out_path,
                   const std::string& format) {
  SweepResult result;
  result.header = {"eta", "m", "closed_form", "monte_carlo", "standard_error", "optimal_m"};
  for (double eta : parse_range_flag(eta_range, "--eta")) {
    for (double m_raw : parse_range_flag(m_range, "--m")) {
      const int m = static_cast<int>(m_raw);
      double rate = 0.0, se = 0.0;
      check(rss_boost_rate(m, eta, trials, seed, &rate, &se), "monte carlo");
      SweepRow row;
      row.columns.emplace_back("eta", fmt(eta));
      row.columns.emplace_back("m", std::to_string(m));
      row.columns.emplace_back("closed_form", fmt(rss_boost_success(m, eta)));
      row.columns.emplace_back("monte_carlo", fmt(rate));
      row.columns.emplace_back("standard_error", fmt(se));
      row.columns.emplace_back("optimal_m", std::to_string(rss_boost_optimal_m(eta)));
      result.rows.push_back(std::move(row));
    }
  }
  write_output(out_path, format == "json" ? render_json(result) : render_csv(result));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* level = std::getenv("RSS_LOG"))
    g_verbose = level[0] != '\0' && std::string(level) != "0";

  CLI::App app{"redundantly encoded resource-state simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, format = "csv", records_path;
  std::string eta_range = "0.95", m_range = "1:5";
  long long trials = 100000;
  uint64_t seed = 1;
  bool closed_form_only = false;
  std::optional<long long> fusion_trials;
  std::optional<uint64_t> fusion_seed;

  CLI::App* generate = app.add_subcommand("generate", "run the protocol and dump the state");
  generate->add_option("--config", config_path, "configuration file")->required();
  generate->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* sweep = app.add_subcommand("sweep", "closed form vs simulation over a grid");
  sweep->add_option("--config", config_path, "configuration file")->required();
  sweep->add_option("--out", out_path, "output path (default stdout)");
  sweep->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_flag("--closed-form-only", closed_form_only, "skip the simulation column");
  sweep->add_option("--trials", trials, "Monte Carlo trials for boost sweeps");
  sweep->add_option("--seed", seed, "Monte Carlo seed");

  CLI::App* fusion = app.add_subcommand("fusion", "run a fusion scenario, emit a JSON report");
  fusion->add_option("--config", config_path, "configuration file")->required();
  fusion->add_option("--out", out_path, "output path (default stdout)");
  fusion->add_option("--trials", fusion_trials, "override fusion.trials");
  fusion->add_option("--seed", fusion_seed, "override fusion.seed");
  fusion->add_option("--records", records_path, "write per-trial JSON lines (boost scenario)");

  CLI::App* boost_scan = app.add_subcommand("boost-scan", "repeat-until-success fusion scan");
  boost_scan->add_option("--eta", eta_range, "efficiency: value or start:stop:count");
  boost_scan->add_option("--m", m_range, "encoding depth: value or lo:hi");
  boost_scan->add_option("--trials", trials, "Monte Carlo trials per point");
  boost_scan->add_option("--seed", seed, "Monte Carlo seed");
  boost_scan->add_option("--out", out_path, "output path (default stdout)");
  boost_scan->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(config_path, out_path);
    if (sweep->parsed())
      return cmd_sweep(config_path, out_path, format, closed_form_only, trials, seed);
    if (fusion->parsed())
      return cmd_fusion(config_path, out_path, fusion_trials, fusion_seed, records_path);
    if (boost_scan->parsed())
      return cmd_boost_scan(eta_range, m_range, trials, seed, out_path, format);
  } catch (const std::exception& error) {
    fail(1, error.what());
  }
  return 2;
}
