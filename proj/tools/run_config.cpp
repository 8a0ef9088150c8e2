#include "run_config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "fracstep/errors.hpp"

namespace fracstep::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError("config: '" + std::string(key) + "' expects a number, got '" +
                      std::string(v) + "'");
  }
  return out;
}

int to_int(std::string_view key, std::string_view v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError("config: '" + std::string(key) + "' expects an integer, got '" +
                      std::string(v) + "'");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") {
    return true;
  }
  if (v == "false" || v == "0" || v == "no") {
    return false;
  }
  throw ConfigError("config: '" + std::string(key) + "' expects true or false");
}

std::vector<double> to_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    out.push_back(to_double(key, trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) {
      break;
    }
    v.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

Strategy parse_strategy(std::string_view name) {
  if (name == "barrier") {
    return Strategy::barrier;
  }
  if (name == "split") {
    return Strategy::split;
  }
  if (name == "shift") {
    return Strategy::shift;
  }
  throw ConfigError("config: unknown strategy '" + std::string(name) + "'");
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::barrier:
      return "barrier";
    case Strategy::split:
      return "split";
    case Strategy::shift:
      return "shift";
  }
  return "barrier";
}

void RunConfig::validate() const {
  const auto need = [](bool ok, const char* what) {
    if (!ok) {
      throw ConfigError(std::string("config: ") + what);
    }
  };
  need(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  need(problem != ProblemId::ex2 || gamma > 0.0, "gamma must be positive for ex2");
  need(m >= 1 && m <= 12, "m must lie in [1, 12]");
  need(spatial_cells >= 1 && spatial_cells <= 2000, "spatial_cells must lie in [1, 2000]");
  need(residual_samples >= 0, "residual_samples must be non-negative");
  need(tol > 0.0, "tol must be positive");
  need(growth > 1.0, "growth must exceed 1");
  need(tau_min > 0.0, "tau_min must be positive");
  need(!tau_init || *tau_init >= tau_min, "tau_init must be at least tau_min");
  need(detect_step_threshold > 0.0 && detect_min_distance > 0.0,
       "detection thresholds must be positive");
  need(max_forced_cells >= 1 && max_restarts >= 0, "invalid forced-cell or restart budget");
  need(rho > 0.0 && rho < 1.0, "rho must lie in (0, 1)");
  need(onsets.empty() || onsets.front() == 0.0, "onsets must start at 0");
  need(solution_times >= 2, "solution_times must be at least 2");
  need(!out.empty(), "out must not be empty");
  if (weights != "unit" && weights != "halving") {
    for (double w : to_list("weights", weights)) {
      need(w > 0.0, "weights must be positive");
    }
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::set<std::string, std::less<>> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view v = trim(line.substr(eq + 1));
    if (key.empty() || v.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    }
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError("config: duplicate key '" + std::string(key) + "'");
    }
    if (key == "label") {
      c.label = v;
    } else if (key == "problem") {
      c.problem = parse_problem_id(v);
    } else if (key == "alpha") {
      c.alpha = to_double(key, v);
    } else if (key == "gamma") {
      c.gamma = to_double(key, v);
    } else if (key == "jump_shift") {
      c.jump_shift = to_double(key, v);
    } else if (key == "m") {
      c.m = to_int(key, v);
    } else if (key == "last_node_shift") {
      c.last_node_shift = to_bool(key, v);
    } else if (key == "spatial_cells") {
      c.spatial_cells = to_int(key, v);
    } else if (key == "residual_samples") {
      c.residual_samples = to_int(key, v);
    } else if (key == "tol") {
      c.tol = to_double(key, v);
    } else if (key == "growth") {
      c.growth = to_double(key, v);
    } else if (key == "tau_init") {
      c.tau_init = to_double(key, v);
    } else if (key == "tau_min") {
      c.tau_min = to_double(key, v);
    } else if (key == "detect") {
      c.detect = to_bool(key, v);
    } else if (key == "detect_step_threshold") {
      c.detect_step_threshold = to_double(key, v);
    } else if (key == "detect_min_distance") {
      c.detect_min_distance = to_double(key, v);
    } else if (key == "max_forced_cells") {
      c.max_forced_cells = to_int(key, v);
    } else if (key == "max_restarts") {
      c.max_restarts = to_int(key, v);
    } else if (key == "barrier") {
      if (v == "generalized") {
        c.barrier = BarrierKind::generalized;
      } else if (v == "plain") {
        c.barrier = BarrierKind::plain;
      } else {
        throw ConfigError("config: barrier must be generalized or plain");
      }
    } else if (key == "onsets") {
      c.onsets = to_list(key, v);
    } else if (key == "weights") {
      c.weights = v;
      if (c.weights != "unit" && c.weights != "halving") {
        (void)to_list(key, v);
      }
    } else if (key == "rho") {
      c.rho = to_double(key, v);
    } else if (key == "strategy") {
      c.strategy = parse_strategy(v);
    } else if (key == "ex2_reference") {
      c.ex2_reference = to_bool(key, v);
    } else if (key == "solution_times") {
      c.solution_times = to_int(key, v);
    } else if (key == "out") {
      c.out = std::string(v);
    } else {
      throw ConfigError("config: unknown key '" + std::string(key) + "'");
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot read " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig c = parse_config(text.str());
  if (c.label.empty()) {
    c.label = path.stem().string();
  }
  return c;
}

}  // namespace fracstep::cli
