#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qnewton/stepper.hpp"
#include "qnewton/vec.hpp"

// Trace CSV: one row per iteration plus a terminal row for the final state
// (recognizable by gamma = 0 and delta_index = -1). Columns, in order:
//
//   iter,f,grad_norm,delta_index,gamma,armijo_trials,w_norm,dirderiv,cond_ratio,x_0..x_{m-1}
//
// Floats are printed with 17 significant digits so parsing reproduces the
// exact doubles. Lines starting with '#' are comments; seeds are echoed there.

namespace qn::cli {

struct TraceRow {
  int iter = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  int delta_index = 0;
  double gamma = 0.0;
  int armijo_trials = 0;
  double w_norm = 0.0;
  double dirderiv = 0.0;
  double cond_ratio = 0.0;
  Vector x;

  bool operator==(const TraceRow&) const = default;
};

std::string format_g17(double v);

std::vector<TraceRow> rows_from_result(const RunResult& result);

// comments become "# key=value" lines ahead of the header.
std::string emit_trace_csv(const std::vector<TraceRow>& rows,
                           const std::vector<std::pair<std::string, std::string>>& comments = {});

// Inverse of emit_trace_csv (comments are skipped). Throws std::runtime_error
// on malformed input.
std::vector<TraceRow> parse_trace_csv(const std::string& text);

}  // namespace qn::cli
