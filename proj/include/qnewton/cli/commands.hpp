#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qnewton/cli/run_config.hpp"
#include "qnewton/vec.hpp"

// Subcommand entry points. Each returns the process exit code:
//   0  success (for `run`: gradient tolerance met)
//   1  configuration / parse / I/O error
//   2  `run` hit max_iterations; `rate` had too few usable iterates
//   3  `run` diverged
//   4  `run` hit a numeric failure
// Streams are injected so tests can capture output byte-for-byte.

namespace qn::cli {

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err);

struct SolvePolyOptions {
  bool complex_mode = false;
  int num_starts = 20;
  double box_lo = -2.0;
  double box_hi = 2.0;
  std::uint64_t seed = 12345;
};

int cmd_solve_poly(const std::string& system_path, const SolvePolyOptions& options,
                   std::ostream& out, std::ostream& err);

int cmd_bench(const std::string& config_path, int jobs, std::ostream& out, std::ostream& err);

// target empty means "use the trace's own final point".
int cmd_rate(const std::string& trace_path, const std::optional<Vector>& target, std::ostream& out,
             std::ostream& err);

// Uniform samples in [lo,hi]^dim; one mt19937_64 stream, coordinates drawn in
// row-major order so results are independent of threading.
std::vector<Vector> sample_starts(int num_starts, int dim, double lo, double hi,
                                  std::uint64_t seed);

const char* variant_name(Variant v);

}  // namespace qn::cli
