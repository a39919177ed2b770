#include "qnewton/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qnewton/cli/log.hpp"
#include "qnewton/cli/trace_csv.hpp"
#include "qnewton/errors.hpp"
#include "qnewton/objective.hpp"
#include "qnewton/poly_text.hpp"
#include "qnewton/polysys.hpp"
#include "qnewton/stepper.hpp"

namespace qn::cli {

namespace {

std::string join_g17(const Vector& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_g17(v[i]);
  }
  return s;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool write_text_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    err << "cannot write file: " << path << "\n";
    return false;
  }
  out << text;
  return bool(out);
}

int exit_code_for(Termination t) {
  switch (t) {
    case Termination::GradToleranceMet: return 0;
    case Termination::MaxIterations: return 2;
    case Termination::Diverged: return 3;
    case Termination::NumericFailure: return 4;
  }
  return 4;
}

void print_report(std::ostream& out, const CriticalPointReport& report) {
  out << "grad_norm: " << format_g17(report.grad_norm) << "\n";
  out << "hessian_eigenvalues: " << join_g17(report.hessian_eigenvalues) << "\n";
  out << "classification: " << to_string(report.classification) << "\n";
}

// Basin bookkeeping shared by bench aggregation: terminal points sorted
// lexicographically, merged when within dedupe distance of the nearest
// existing representative.
struct Basin {
  Vector representative;
  std::size_t run_index = 0;  // first run that landed here (sorted order)
  int count = 0;
};

std::vector<Basin> aggregate_basins(const std::vector<std::pair<Vector, std::size_t>>& points,
                                    double dedupe_distance) {
  auto sorted = points;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Basin> basins;
  for (const auto& [x, run_index] : sorted) {
    Basin* nearest = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (auto& basin : basins) {
      const double d = distance(x, basin.representative);
      if (d < best) {
        best = d;
        nearest = &basin;
      }
    }
    if (nearest && best <= dedupe_distance) {
      ++nearest->count;
    } else {
      basins.push_back({x, run_index, 1});
    }
  }
  return basins;
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::NQN: return "NQN";
    case Variant::NQNB: return "NQNB";
    case Variant::NQNB_S: return "NQNB_S";
    case Variant::G: return "G";
  }
  return "?";
}

std::vector<Vector> sample_starts(int num_starts, int dim, double lo, double hi,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vector> starts;
  starts.reserve(static_cast<std::size_t>(std::max(num_starts, 0)));
  for (int s = 0; s < num_starts; ++s) {
    Vector x(static_cast<std::size_t>(dim));
    for (auto& xi : x) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
      xi = lo + u * (hi - lo);
    }
    starts.push_back(std::move(x));
  }
  return starts;
}

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CostFunction f;
  StepperConfig sc;
  try {
    rc = load_run_config(config_path);
    f = make_objective(rc);
    sc = make_stepper_config(rc);
    if (!rc.x0) throw ConfigError("run requires an 'x0' starting point");
    if (static_cast<int>(rc.x0->size()) != f.dim)
      throw ConfigError("x0 has " + std::to_string(rc.x0->size()) + " entries but objective '" +
                        f.label + "' has dimension " + std::to_string(f.dim));
    sc = sc.resolved(f.dim);  // generates deltas; surfaces invariant violations
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  }

  log_info("run: objective=" + f.label + " variant=" + variant_name(rc.variant));
  const RunResult result = run(f, *rc.x0, sc);
  for (const IterationRecord& rec : result.trace)
    log_debug("iter " + std::to_string(rec.iteration) + ": f=" + format_g17(rec.f_value) +
              " grad_norm=" + format_g17(rec.grad_norm) +
              " delta_index=" + std::to_string(rec.outcome.delta_index) +
              " gamma=" + format_g17(rec.outcome.gamma));

  if (rc.trace) {
    std::vector<std::pair<std::string, std::string>> comments = {
        {"objective", f.label},
        {"variant", variant_name(rc.variant)},
        {"tau", format_g17(sc.tau)},
        {"delta_seed", std::to_string(result.delta_seed)},
        {"deltas", join_g17(result.deltas, ",")},
        {"kappa", format_g17(result.kappa)},
    };
    const std::string csv = emit_trace_csv(rows_from_result(result), comments);
    if (!write_text_file(*rc.trace, csv, err)) return 1;
  }

  out << "termination: " << to_string(result.termination) << "\n";
  out << "iterations: " << result.iterations() << "\n";
  out << "final_f: " << format_g17(result.final_f) << "\n";
  out << "final_x: " << join_g17(result.final_x) << "\n";
  print_report(out, result.final_report);
  return exit_code_for(result.termination);
}

int cmd_solve_poly(const std::string& system_path, const SolvePolyOptions& options,
                   std::ostream& out, std::ostream& err) {
  PolySystem sys = PolySystem({Polynomial::zero(1)});
  int source_polys = 0;
  try {
    if (options.complex_mode) {
      const auto complex_polys = parse_complex_system_file(system_path);
      source_polys = static_cast<int>(complex_polys.size());
      sys = complex_to_real(complex_polys);
    } else {
      sys = parse_system_file(system_path);
      source_polys = static_cast<int>(sys.polynomials().size());
    }
    if (options.num_starts < 0) throw std::runtime_error("--starts must be >= 0");
    if (!(options.box_lo < options.box_hi))
      throw std::runtime_error("--box requires LO < HI");
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return 1;
  }

  const int m = sys.num_vars();
  const int d = sys.cost_degree();
  const double r = exponent_bound_r(m, d);
  const double tau = tau0(sys);

  out << "system: " << source_polys << (options.complex_mode ? " complex" : "")
      << " polynomial" << (source_polys == 1 ? "" : "s") << ", " << m << " real variable"
      << (m == 1 ? "" : "s") << "\n";
  out << "cost_degree: " << d << "\n";
  out << "R: " << format_g17(r) << "\n";
  out << "tau0: " << format_g17(tau) << "\n";
  out << "starts: " << options.num_starts << " in [" << format_g17(options.box_lo) << ", "
      << format_g17(options.box_hi) << "]^" << m << " seed=" << options.seed << "\n";

  StepperConfig sc = StepperConfig::defaults(Variant::G);
  sc.tau = tau;
  const auto starts = sample_starts(options.num_starts, m, options.box_lo, options.box_hi,
                                    options.seed);
  for (std::size_t i = 0; i < starts.size(); ++i)
    log_debug("start " + std::to_string(i) + ": (" + join_g17(starts[i], ", ") + ")");
  const SolveOutcome outcome = solve_system(sys, starts, sc);

  out << "roots: " << outcome.roots.size() << "\n";
  for (std::size_t i = 0; i < outcome.roots.size(); ++i)
    out << "root " << i + 1 << ": (" << join_g17(outcome.roots[i].first, ", ")
        << ") residual=" << format_g17(outcome.roots[i].second) << "\n";
  out << "non_root_critical_points: " << outcome.non_root_critical.size() << "\n";
  for (std::size_t i = 0; i < outcome.non_root_critical.size(); ++i) {
    const auto& cp = outcome.non_root_critical[i];
    out << "critical " << i + 1 << ": (" << join_g17(cp.x, ", ") << ") f=" << format_g17(cp.f)
        << " grad_norm=" << format_g17(cp.grad_norm) << "\n";
  }
  out << "diverged: " << outcome.diverged << "\n";
  out << "unconverged: " << outcome.unconverged << "\n";
  out << "numeric_failures: " << outcome.numeric_failures << "\n";
  log_info("solve-poly: " + std::to_string(outcome.roots.size()) + " roots from " +
           std::to_string(options.num_starts) + " starts");
  return 0;
}

int cmd_bench(const std::string& config_path, int jobs, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CostFunction f;
  StepperConfig sc;
  try {
    rc = load_run_config(config_path);
    f = make_objective(rc);
    sc = make_stepper_config(rc);
    if (!rc.start_box) throw ConfigError("bench requires a 'start_box'");
    if (!rc.num_starts) throw ConfigError("bench requires 'num_starts'");
    if (*rc.num_starts < 0) throw ConfigError("num_starts must be >= 0");
    sc = sc.resolved(f.dim);  // resolve once; workers share the frozen config
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  }

  const int num_starts = *rc.num_starts;
  const std::uint64_t start_seed = rc.start_seed ? *rc.start_seed : 12345;
  const auto starts =
      sample_starts(num_starts, f.dim, (*rc.start_box)[0], (*rc.start_box)[1], start_seed);

  std::vector<RunResult> results(starts.size());
  if (!starts.empty()) {
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(starts.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= starts.size()) return;
        results[i] = run(f, starts[i], sc);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  // Aggregate in start order (thread-schedule independent).
  int diverged = 0, unconverged = 0, numeric_failures = 0, saddle_terminals = 0;
  long long total_iterations = 0, total_steps = 0, total_trials = 0;
  std::vector<std::pair<Vector, std::size_t>> converged_points;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const RunResult& r = results[i];
    total_iterations += r.iterations();
    for (const auto& rec : r.trace) {
      ++total_steps;
      total_trials += rec.outcome.armijo_trials;
    }
    switch (r.termination) {
      case Termination::Diverged: ++diverged; break;
      case Termination::NumericFailure: ++numeric_failures; break;
      case Termination::MaxIterations: ++unconverged; break;
      case Termination::GradToleranceMet:
        converged_points.emplace_back(r.final_x, i);
        if (r.final_report.classification == Classification::Saddle) ++saddle_terminals;
        break;
    }
  }
  const auto basins = aggregate_basins(converged_points, 1e-6);
  const double mean_iterations =
      results.empty() ? 0.0 : static_cast<double>(total_iterations) / results.size();
  const double mean_armijo_trials =
      total_steps == 0 ? 0.0 : static_cast<double>(total_trials) / total_steps;

  std::ostringstream csv;
  csv << "# objective=" << f.label << "\n";
  csv << "# variant=" << variant_name(rc.variant) << "\n";
  csv << "# tau=" << format_g17(sc.tau) << "\n";
  csv << "# start_seed=" << start_seed << "\n";
  csv << "# delta_seed=" << sc.delta_seed << "\n";
  csv << "# deltas=" << join_g17(sc.deltas, ",") << "\n";
  csv << "# num_starts=" << num_starts << "\n";
  csv << "# diverged=" << diverged << "\n";
  csv << "# unconverged=" << unconverged << "\n";
  csv << "# numeric_failures=" << numeric_failures << "\n";
  csv << "# saddle_terminals=" << saddle_terminals << "\n";
  csv << "# mean_iterations=" << format_g17(mean_iterations) << "\n";
  csv << "# mean_armijo_trials=" << format_g17(mean_armijo_trials) << "\n";
  csv << "basin,count,classification,f,grad_norm";
  for (int j = 0; j < f.dim; ++j) csv << ",x_" << j;
  csv << "\n";
  for (std::size_t b = 0; b < basins.size(); ++b) {
    const RunResult& rep = results[basins[b].run_index];
    csv << b << "," << basins[b].count << "," << to_string(rep.final_report.classification) << ","
        << format_g17(rep.final_f) << "," << format_g17(rep.final_report.grad_norm);
    for (double xi : basins[b].representative) csv << "," << format_g17(xi);
    csv << "\n";
  }

  if (rc.summary) {
    if (!write_text_file(*rc.summary, csv.str(), err)) return 1;
  } else {
    out << csv.str();
  }
  log_info("bench: " + std::to_string(num_starts) + " starts, " + std::to_string(basins.size()) +
           " basins");
  return 0;
}

int cmd_rate(const std::string& trace_path, const std::optional<Vector>& target, std::ostream& out,
             std::ostream& err) {
  std::vector<TraceRow> rows;
  try {
    rows = parse_trace_csv(read_text_file(trace_path));
  } catch (const std::exception& e) {
    err << "rate: " << e.what() << "\n";
    return 1;
  }
  if (rows.empty()) {
    err << "rate: trace has no rows\n";
    return 1;
  }

  Vector x_star;
  std::size_t usable = rows.size();
  if (target) {
    x_star = *target;
    if (x_star.size() != rows.front().x.size()) {
      err << "rate: --target has " << x_star.size() << " entries but the trace has "
          << rows.front().x.size() << "\n";
      return 1;
    }
  } else {
    x_star = rows.back().x;  // terminal row doubles as the limit estimate
    usable = rows.size() - 1;
  }

  std::vector<double> errors;
  errors.reserve(usable);
  for (std::size_t i = 0; i < usable; ++i) errors.push_back(distance(rows[i].x, x_star));

  double order = 0.0;
  try {
    order = estimate_order_from_errors(errors);
  } catch (const InsufficientDataError& e) {
    err << "rate: " << e.what() << "\n";
    return 2;
  }

  out << "estimated_order: " << format_g17(order) << "\n";
  // Tail of the per-step ratios e_{n+1}/e_n over the window the estimate used.
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const bool ok = errors[i] > 1e-13 && errors[i] <= 1e-2 && errors[i + 1] > 1e-13 &&
                    errors[i + 1] <= 1e-2;
    if (ok) ratios.push_back(errors[i + 1] / errors[i]);
  }
  const std::size_t tail = std::min<std::size_t>(ratios.size(), 5);
  out << "tail_error_ratios:";
  for (std::size_t i = ratios.size() - tail; i < ratios.size(); ++i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", ratios[i]);
    out << " " << buf;
  }
  out << "\n";
  return 0;
}

}  // namespace qn::cli
