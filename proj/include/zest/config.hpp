#pragma once

// Run configuration: a line-oriented `key = value` format with `[model]` and
// `[run]` sections and `#` comments.  Parsing validates everything before any
// computation runs: unknown keys, duplicate keys, type mismatches, and range
// violations are each reported as a diagnostic with the offending line
// number; a config is usable only when the diagnostic list is empty.

#include <cctype>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "zest/errors.hpp"
#include "zest/numeric.hpp"
#include "zest/potential.hpp"
#include "zest/sphere.hpp"

namespace zest {

enum class Command { PhaseShifts, Kernel, WaveKernel, Orbit, Flow, Phases, Selftest };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::PhaseShifts: return "phase-shifts";
    case Command::Kernel: return "kernel";
    case Command::WaveKernel: return "wave-kernel";
    case Command::Orbit: return "orbit";
    case Command::Flow: return "flow";
    case Command::Phases: return "phases";
    case Command::Selftest: return "selftest";
  }
  return "selftest";
}

struct RunConfig {
  Command command = Command::Selftest;
  bool command_set = false;  // whether the config text named a command
  PotentialModel model;

  // command-specific keys (defaults are usable for every command)
  int l_min = 20;
  int l_max = 60;
  int big_l_max = 200;  // partial-wave cutoff for kernel synthesis (key L_max)
  double theta = 0.5 * detail::kPi;
  std::vector<double> lambda_ladder = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
  std::vector<double> b_list = {2.0, 5.0, 10.0};
  double tau_max = 10.0;
  double flow_k = 1.0;
  int grid_size = 2001;
  Smoothing smoothing = Smoothing::Abel;
  double smoothing_param = 0.0;  // 0 = the smoothing's own default
  double tol = 1e-10;
  int threads = 0;  // 0 = number of available execution units
  std::string output_path;
};

struct Diagnostic {
  int line = 0;
  std::string message;
};

struct ParseResult {
  RunConfig config;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline bool parse_double(const std::string& s, double& out) {
  const char* p = s.c_str();
  char* end = nullptr;
  out = std::strtod(p, &end);
  return end != p && *end == '\0';
}

inline bool parse_int(const std::string& s, int& out) {
  const char* p = s.c_str();
  char* end = nullptr;
  const long v = std::strtol(p, &end, 10);
  if (end == p || *end != '\0') return false;
  out = static_cast<int>(v);
  return v == out;
}

inline bool parse_double_list(const std::string& s, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!parse_double(trim(item), v)) return false;
    out.push_back(v);
  }
  return !out.empty();
}

}  // namespace detail

// Parses and fully validates a configuration.  On any problem the returned
// diagnostics carry line numbers; the config member is meaningful only when
// ok().
inline ParseResult parse_config(const std::string& text) {
  ParseResult res;
  RunConfig& cfg = res.config;
  auto fail = [&res](int line, const std::string& msg) {
    res.diagnostics.push_back({line, msg});
  };

  std::vector<std::pair<std::string, int>> seen;  // section.key -> first line
  std::string section;
  int mu_line = 0, model_line = 0;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(lineno, "malformed section header '" + line + "'");
        continue;
      }
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "run") {
        fail(lineno, "unknown section '[" + section + "]' (expected [model] or [run])");
        section.clear();
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(lineno, "expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      fail(lineno, "expected 'key = value', got '" + line + "'");
      continue;
    }
    if (section.empty()) {
      fail(lineno, "key '" + key + "' appears before any [model] or [run] section");
      continue;
    }

    const std::string qual = section + "." + key;
    bool dup = false;
    for (const auto& [k, l] : seen) {
      if (k == qual) {
        fail(lineno, "duplicate key '" + key + "' (first set on line " + std::to_string(l) + ")");
        dup = true;
        break;
      }
    }
    if (dup) continue;
    seen.emplace_back(qual, lineno);

    auto need_double = [&](double& slot) {
      double v = 0.0;
      if (!detail::parse_double(value, v)) {
        fail(lineno, "key '" + key + "' needs a number, got '" + value + "'");
        return;
      }
      slot = v;
    };
    auto need_int = [&](int& slot) {
      int v = 0;
      if (!detail::parse_int(value, v)) {
        fail(lineno, "key '" + key + "' needs an integer, got '" + value + "'");
        return;
      }
      slot = v;
    };
    auto need_list = [&](std::vector<double>& slot) {
      std::vector<double> v;
      if (!detail::parse_double_list(value, v)) {
        fail(lineno, "key '" + key + "' needs a comma-separated list of numbers, got '" +
                         value + "'");
        return;
      }
      slot = std::move(v);
    };

    if (section == "model") {
      model_line = lineno;
      if (key == "gamma") need_double(cfg.model.gamma);
      else if (key == "mu") { mu_line = lineno; need_double(cfg.model.mu); }
      else if (key == "R0") need_double(cfg.model.R0);
      else if (key == "v2_beta") need_double(cfg.model.v2_beta);
      else if (key == "v2_eps2") need_double(cfg.model.v2_eps2);
      else if (key == "dim") need_int(cfg.model.dim);
      else if (key == "cutoff") {
        if (value == "cut") cfg.model.cutoff_mode = CutoffMode::CutInterior;
        else if (value == "pure") cfg.model.cutoff_mode = CutoffMode::PureHomogeneous;
        else fail(lineno, "key 'cutoff' must be 'cut' or 'pure', got '" + value + "'");
      } else {
        fail(lineno, "unknown key '" + key + "' in [model]");
      }
    } else {  // [run]
      if (key == "command") {
        bool found = false;
        for (Command c : {Command::PhaseShifts, Command::Kernel, Command::WaveKernel,
                          Command::Orbit, Command::Flow, Command::Phases, Command::Selftest}) {
          if (value == to_string(c)) {
            cfg.command = c;
            cfg.command_set = true;
            found = true;
            break;
          }
        }
        if (!found) fail(lineno, "unknown command '" + value + "'");
      }
      else if (key == "l_min") need_int(cfg.l_min);
      else if (key == "l_max") need_int(cfg.l_max);
      else if (key == "L_max") need_int(cfg.big_l_max);
      else if (key == "theta") need_double(cfg.theta);
      else if (key == "lambda_ladder") need_list(cfg.lambda_ladder);
      else if (key == "b_list") need_list(cfg.b_list);
      else if (key == "tau_max") need_double(cfg.tau_max);
      else if (key == "flow_k") need_double(cfg.flow_k);
      else if (key == "grid_size") need_int(cfg.grid_size);
      else if (key == "smoothing") {
        if (value == "none") cfg.smoothing = Smoothing::None;
        else if (value == "abel") cfg.smoothing = Smoothing::Abel;
        else if (value == "gauss") cfg.smoothing = Smoothing::Gauss;
        else fail(lineno, "key 'smoothing' must be none, abel, or gauss; got '" + value + "'");
      }
      else if (key == "smoothing_param") need_double(cfg.smoothing_param);
      else if (key == "tol") need_double(cfg.tol);
      else if (key == "threads") need_int(cfg.threads);
      else if (key == "output_path") cfg.output_path = value;
      else fail(lineno, "unknown key '" + key + "' in [run]");
    }
  }

  if (!res.diagnostics.empty()) return res;

  // Range validation, each attached to the most relevant line.
  if (!(cfg.model.mu > 0.0 && cfg.model.mu < 2.0)) {
    fail(mu_line, "mu must lie in (0,2)");
  }
  try {
    cfg.model.validate();
  } catch (const validation_error& e) {
    if (res.diagnostics.empty()) fail(model_line, e.what());
  }
  if (cfg.l_min < 0) fail(0, "l_min must be nonnegative");
  if (cfg.l_max < cfg.l_min) fail(0, "l_max must be >= l_min");
  if (cfg.big_l_max < 1) fail(0, "L_max must be positive");
  if (cfg.grid_size < 3) fail(0, "grid_size must be at least 3");
  if (!(cfg.tol > 0.0)) fail(0, "tol must be positive");
  if (cfg.threads < 0) fail(0, "threads must be nonnegative (0 = auto)");
  for (double l : cfg.lambda_ladder) {
    if (!(l > 0.0)) {
      fail(0, "lambda_ladder entries must be positive");
      break;
    }
  }
  for (double b : cfg.b_list) {
    if (!(b > 0.0)) {
      fail(0, "b_list entries must be positive");
      break;
    }
  }
  if (cfg.smoothing == Smoothing::Gauss && !(cfg.smoothing_param > 0.0)) {
    fail(0, "gauss smoothing needs a positive smoothing_param (width)");
  }
  return res;
}

inline std::string format_diagnostics(const ParseResult& res, const std::string& origin) {
  std::string out;
  for (const auto& d : res.diagnostics) {
    out += origin + ":" + std::to_string(d.line) + ": " + d.message + "\n";
  }
  return out;
}

}  // namespace zest
