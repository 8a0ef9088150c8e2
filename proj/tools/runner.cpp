#include "runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <boost/program_options.hpp>
#include <nlohmann/json.hpp>

#include "fracstep/adaptive_controller.hpp"
#include "fracstep/errors.hpp"
#include "fracstep/reference_solutions.hpp"
#include "fracstep/strategies.hpp"

namespace fracstep::cli {
namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

BarrierSpec make_barrier(const RunConfig& c, const ProblemSpec& spec, double lambda) {
  std::vector<double> onsets = c.onsets;
  if (onsets.empty()) {
    onsets = c.barrier == BarrierKind::plain ? std::vector<double>{0.0} : spec.onsets();
  }
  BarrierSpec b = BarrierSpec::unit(c.alpha, lambda, onsets);
  if (c.weights == "halving") {
    for (std::size_t k = 0; k < b.weights.size(); ++k) {
      b.weights[k] = std::ldexp(1.0, -static_cast<int>(k));
    }
  } else if (c.weights != "unit") {
    std::vector<double> w;
    std::string_view v = c.weights;
    while (!v.empty()) {
      const auto comma = v.find(',');
      w.push_back(std::stod(std::string(v.substr(0, comma))));
      if (comma == std::string_view::npos) {
        break;
      }
      v.remove_prefix(comma + 1);
    }
    if (w.size() != b.onsets.size()) {
      throw ConfigError("config: need one weight per barrier onset");
    }
    b.weights = w;
  }
  b.validate();
  return extend_for_negative_lambda(b, spec.horizon, c.rho);
}

struct Files {
  std::string mesh;
  std::string trace;
  std::string solution;
  std::string report;
};

struct Computed {
  RunSummary summary;
  Files files;
};

Computed compute(const RunConfig& c) {
  c.validate();
  ProblemSpec spec = make_problem(c.problem, c.alpha, c.gamma, c.spatial_cells);
  spec.jump_shift = c.jump_shift;
  spec.validate();
  const AssembledOperator op = assemble(spec.spatial);
  const CollocationRule rule = CollocationRule::gauss_lobatto(c.m, c.last_node_shift);
  const BarrierSpec bspec = make_barrier(c, spec, compute_lambda(spec.spatial));

  AdaptiveParams p;
  p.tol = c.tol;
  p.growth = c.growth;
  p.tau_init = c.tau_init;
  p.tau_min = c.tau_min;
  p.detect = c.detect;
  p.detect_step_threshold = c.detect_step_threshold;
  p.detect_min_distance = c.detect_min_distance;
  p.max_forced_cells = c.max_forced_cells;
  p.max_restarts = c.max_restarts;
  p.validate();
  if (c.detect && c.strategy != Strategy::barrier) {
    throw ConfigError("config: detection is only available with strategy = barrier");
  }

  RunReport report;
  std::function<Eigen::VectorXd(double)> u;
  std::shared_ptr<const PiecewiseSolution> flat;
  std::shared_ptr<const MergedSolution> merged;
  switch (c.strategy) {
    case Strategy::barrier: {
      const CollocationStepper stepper(spec, op, rule, c.residual_samples);
      AdaptiveRun run = run_adaptive(stepper, bspec, p);
      report = std::move(run.report);
      flat = std::make_shared<const PiecewiseSolution>(std::move(run.solution));
      break;
    }
    case Strategy::shift: {
      AdaptiveRun run = solve_by_shifting(spec, rule, op, bspec, p, c.residual_samples);
      report = std::move(run.report);
      flat = std::make_shared<const PiecewiseSolution>(std::move(run.solution));
      break;
    }
    case Strategy::split: {
      SplitRun run = solve_by_splitting(spec, rule, op, bspec, p, c.residual_samples);
      report = std::move(run.report);
      merged = std::make_shared<const MergedSolution>(std::move(run.solution));
      break;
    }
  }
  if (flat) {
    u = [flat](double t) { return evaluate(*flat, std::min(t, flat->end())); };
  } else {
    u = [merged](double t) { return merged->evaluate(t); };
  }

  const std::vector<double> times = time_samples(spec.horizon, static_cast<std::size_t>(c.solution_times));
  std::optional<ExactSolution> exact = exact_solution(c.problem, c.alpha);
  std::string reference = exact ? "exact" : "none";
  if (!exact && c.problem == ProblemId::ex2 && c.ex2_reference) {
    exact = reference_for_ex2(c.alpha, c.gamma, p, c.spatial_cells);
    reference = "numerical";
  }

  Computed out;
  RunSummary& s = out.summary;
  s.label = c.label;
  s.step_count = report.step_count();
  s.error_bound = report.total_weight * c.tol;
  s.min_step_width = report.min_step_width();
  s.wall_time = report.wall_time;
  if (exact) {
    s.max_error = max_error(op, u, *exact, time_samples(spec.horizon));
  }

  std::ostringstream mesh;
  mesh << "step_index,t_left,t_right,width\n";
  for (std::size_t k = 0; k < report.cells.size(); ++k) {
    const CellRecord& cell = report.cells[k];
    mesh << k << ',' << num(cell.left) << ',' << num(cell.right) << ','
         << num(cell.right - cell.left) << '\n';
  }
  out.files.mesh = mesh.str();

  std::ostringstream trace;
  trace << "t,residual_linf,barrier_value,tol_times_barrier,forced\n";
  for (const CellRecord& cell : report.cells) {
    const bool forced = !cell.actions.empty() && cell.actions.back() == StepAction::forced;
    for (const ResidualTracePoint& pt : cell.samples) {
      trace << num(pt.t) << ',' << num(pt.residual) << ',' << num(pt.barrier) << ','
            << num(c.tol * pt.barrier) << ',' << (forced ? 1 : 0) << '\n';
    }
  }
  out.files.trace = trace.str();

  std::ostringstream sol;
  sol << "t,x,value\n";
  for (double t : times) {
    const Eigen::VectorXd values = op.sample_table * u(t);
    for (std::size_t i = 0; i < op.sample_coords.size(); ++i) {
      sol << num(t) << ',' << num(op.sample_coords[i]) << ','
          << num(values(static_cast<Eigen::Index>(i))) << '\n';
    }
  }
  out.files.solution = sol.str();

  nlohmann::json j;
  j["label"] = c.label;
  j["problem"] = std::string(to_string(c.problem));
  j["strategy"] = std::string(to_string(c.strategy));
  j["alpha"] = c.alpha;
  j["tol"] = c.tol;
  j["step_count"] = s.step_count;
  j["solve_count"] = report.solve_count;
  j["forced_cells"] = report.forced_cells;
  j["restarts"] = report.restarts;
  j["total_weight"] = report.total_weight;
  j["error_bound"] = s.error_bound;
  j["max_error"] = s.max_error ? nlohmann::json(*s.max_error) : nlohmann::json(nullptr);
  j["error_reference"] = reference;
  j["first_step_width"] = report.first_step_width();
  j["min_step_width"] = s.min_step_width;
  j["max_residual_ratio"] = report.max_residual_ratio(c.tol);
  j["onsets"] = bspec.onsets;
  j["detected_onsets"] = report.detected_onsets;
  j["wall_time"] = s.wall_time;
  out.files.report = j.dump(2) + "\n";
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) {
    throw Error("cannot write " + path.string());
  }
}

void write_files(const fs::path& dir, const Files& files) {
  fs::create_directories(dir);
  write_file(dir / "mesh.csv", files.mesh);
  write_file(dir / "residual_trace.csv", files.trace);
  write_file(dir / "solution.csv", files.solution);
  write_file(dir / "report.json", files.report);
}

std::string compare_table(const std::vector<RunSummary>& rows) {
  std::ostringstream csv;
  csv << "config_label,step_count,max_error,error_bound,min_step_width,wall_time\n";
  for (const RunSummary& r : rows) {
    csv << r.label << ',' << r.step_count << ',' << (r.max_error ? num(*r.max_error) : "") << ','
        << num(r.error_bound) << ',' << num(r.min_step_width) << ',' << num(r.wall_time) << '\n';
  }
  return csv.str();
}

}  // namespace

RunSummary execute(const RunConfig& config) {
  Computed c = compute(config);
  write_files(config.out, c.files);
  return c.summary;
}

std::vector<RunSummary> compare(const std::vector<RunConfig>& configs, const fs::path& out) {
  if (configs.size() < 2) {
    throw ConfigError("compare: need at least two configurations");
  }
  std::set<std::string> labels;
  for (const RunConfig& c : configs) {
    if (c.problem != configs.front().problem) {
      throw ConfigError("compare: configurations use different problems");
    }
    if (!labels.insert(c.label).second) {
      throw ConfigError("compare: duplicate label '" + c.label + "'");
    }
  }
  std::vector<Computed> results;
  for (const RunConfig& c : configs) {
    results.push_back(compute(c));
  }
  std::vector<RunSummary> rows;
  for (const Computed& r : results) {
    write_files(out / r.summary.label, r.files);
    rows.push_back(r.summary);
  }
  write_file(out / "compare.csv", compare_table(rows));
  return rows;
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  namespace po = boost::program_options;
  po::options_description desc("fracstep options");
  desc.add_options()("help,h", "show this help")(
      "config", po::value<std::string>(), "run configuration file (key = value)")(
      "strategy", po::value<std::string>(), "override the strategy: barrier, split or shift")(
      "out", po::value<std::string>(), "output directory")(
      "compare", po::value<std::string>(), "comma separated configuration files to compare");
  try {
    po::variables_map vm;
    po::store(po::command_line_parser(args).options(desc).run(), vm);
    po::notify(vm);
    if (vm.count("help") != 0U) {
      out << desc << '\n';
      return 0;
    }
    std::optional<Strategy> strategy;
    if (vm.count("strategy") != 0U) {
      strategy = parse_strategy(vm["strategy"].as<std::string>());
    }
    if (vm.count("compare") != 0U) {
      std::vector<RunConfig> configs;
      std::string list = vm["compare"].as<std::string>();
      std::istringstream in(list);
      std::string path;
      while (std::getline(in, path, ',')) {
        if (!path.empty()) {
          configs.push_back(load_config(path));
          if (strategy) {
            configs.back().strategy = *strategy;
          }
        }
      }
      const fs::path dir = vm.count("out") != 0U ? fs::path(vm["out"].as<std::string>())
                                                 : fs::path("fracstep_compare");
      for (const RunSummary& r : compare(configs, dir)) {
        out << r.label << ": " << r.step_count << " steps\n";
      }
      out << "wrote " << (dir / "compare.csv").string() << '\n';
      return 0;
    }
    if (vm.count("config") == 0U) {
      err << "fracstep: --config or --compare is required\n" << desc << '\n';
      return 3;
    }
    RunConfig config = load_config(vm["config"].as<std::string>());
    if (strategy) {
      config.strategy = *strategy;
    }
    if (vm.count("out") != 0U) {
      config.out = vm["out"].as<std::string>();
    }
    const RunSummary s = execute(config);
    out << s.label << ": " << s.step_count << " steps";
    if (s.max_error) {
      out << ", max error " << num(*s.max_error) << " (bound " << num(s.error_bound) << ")";
    }
    out << ", wrote " << config.out.string() << '\n';
    return 0;
  } catch (const po::error& e) {
    err << "fracstep: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    err << "fracstep: " << e.what() << '\n';
    return 3;
  } catch (const LockingError& e) {
    err << "fracstep: " << e.what() << '\n';
    return 2;
  } catch (const SubproblemError& e) {
    err << "fracstep: " << e.what() << '\n';
    return e.locking() ? 2 : 1;
  } catch (const std::exception& e) {
    err << "fracstep: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace fracstep::cli
