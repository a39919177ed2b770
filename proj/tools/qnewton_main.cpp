#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "qnewton/cli/commands.hpp"

namespace {

// Parses "x,y,..." into a vector; returns false on any malformed entry.
bool parse_point(const std::string& text, qn::Vector& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string piece = text.substr(pos, comma - pos);
    char* end = nullptr;
    const double v = std::strtod(piece.c_str(), &end);
    if (piece.empty() || end != piece.c_str() + piece.size()) return false;
    out.push_back(v);
    pos = comma + 1;
  }
  return !out.empty();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saddle-repelling modified Newton optimizer: seeded runs, "
               "polynomial-system root finding, batch benchmarks, rate estimation"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run_cmd = app.add_subcommand("run", "optimize from a JSON config, write a trace CSV");
  run_cmd->add_option("config", run_config, "JSON config path")->required();

  std::string system_path;
  qn::cli::SolvePolyOptions solve_opts;
  std::vector<double> box{solve_opts.box_lo, solve_opts.box_hi};
  auto* solve_cmd = app.add_subcommand("solve-poly", "find roots of a polynomial system");
  solve_cmd->add_option("system", system_path, "polynomial system file")->required();
  solve_cmd->add_flag("--complex", solve_opts.complex_mode,
                      "variables are complex (z1, z2, ...); split into real pairs");
  solve_cmd->add_option("--starts", solve_opts.num_starts, "number of random starts");
  solve_cmd->add_option("--box", box, "sampling box LO HI")->expected(2);
  solve_cmd->add_option("--seed", solve_opts.seed, "start-sampling seed");

  std::string bench_config;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs <= 0) jobs = 1;
  auto* bench_cmd = app.add_subcommand("bench", "run many seeded starts, summarize basins");
  bench_cmd->add_option("config", bench_config, "JSON config path")->required();
  bench_cmd->add_option("--jobs", jobs, "worker threads");

  std::string trace_path;
  std::string target_text;
  auto* rate_cmd = app.add_subcommand("rate", "estimate convergence order from a trace CSV");
  rate_cmd->add_option("trace", trace_path, "trace CSV path")->required();
  rate_cmd->add_option("--target", target_text, "limit point as x,y,... (default: final iterate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (run_cmd->parsed()) return qn::cli::cmd_run(run_config, std::cout, std::cerr);
  if (solve_cmd->parsed()) {
    solve_opts.box_lo = box[0];
    solve_opts.box_hi = box[1];
    return qn::cli::cmd_solve_poly(system_path, solve_opts, std::cout, std::cerr);
  }
  if (bench_cmd->parsed()) return qn::cli::cmd_bench(bench_config, jobs, std::cout, std::cerr);
  if (rate_cmd->parsed()) {
    std::optional<qn::Vector> target;
    if (!target_text.empty()) {
      qn::Vector point;
      if (!parse_point(target_text, point)) {
        std::cerr << "rate: malformed --target '" << target_text << "'\n";
        return 1;
      }
      target = std::move(point);
    }
    return qn::cli::cmd_rate(trace_path, target, std::cout, std::cerr);
  }
  return 1;
}
