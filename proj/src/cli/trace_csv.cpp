#include "qnewton/cli/trace_csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace qn::cli {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<TraceRow> rows_from_result(const RunResult& result) {
  std::vector<TraceRow> rows;
  rows.reserve(result.trace.size() + 1);
  for (const IterationRecord& rec : result.trace) {
    TraceRow row;
    row.iter = rec.iteration;
    row.f = rec.f_value;
    row.grad_norm = rec.grad_norm;
    row.delta_index = rec.outcome.delta_index;
    row.gamma = rec.outcome.gamma;
    row.armijo_trials = rec.outcome.armijo_trials;
    row.w_norm = norm(rec.outcome.w);
    row.dirderiv = rec.outcome.directional_derivative;
    row.cond_ratio = rec.outcome.cond_ratio;
    row.x = rec.x;
    rows.push_back(std::move(row));
  }
  TraceRow last;
  last.iter = static_cast<int>(result.trace.size());
  last.f = result.final_f;
  last.grad_norm = result.final_report.grad_norm;
  last.delta_index = -1;
  last.gamma = 0.0;  // terminal state, no step taken
  last.x = result.final_x;
  rows.push_back(std::move(last));
  return rows;
}

std::string emit_trace_csv(const std::vector<TraceRow>& rows,
                           const std::vector<std::pair<std::string, std::string>>& comments) {
  std::ostringstream out;
  for (const auto& [key, value] : comments) out << "# " << key << "=" << value << "\n";
  const std::size_t dim = rows.empty() ? 0 : rows.front().x.size();
  out << "iter,f,grad_norm,delta_index,gamma,armijo_trials,w_norm,dirderiv,cond_ratio";
  for (std::size_t i = 0; i < dim; ++i) out << ",x_" << i;
  out << "\n";
  for (const TraceRow& r : rows) {
    out << r.iter << ',' << format_g17(r.f) << ',' << format_g17(r.grad_norm) << ','
        << r.delta_index << ',' << format_g17(r.gamma) << ',' << r.armijo_trials << ','
        << format_g17(r.w_norm) << ',' << format_g17(r.dirderiv) << ','
        << format_g17(r.cond_ratio);
    for (double xi : r.x) out << ',' << format_g17(xi);
    out << "\n";
  }
  return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("trace CSV: bad number '" + s + "'");
  return v;
}

int parse_int(const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("trace CSV: bad integer '" + s + "'");
  return static_cast<int>(v);
}

}  // namespace

std::vector<TraceRow> parse_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::size_t dim = 0;
  std::vector<TraceRow> rows;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (!have_header) {
      static const char* kPrefix[] = {"iter",          "f",      "grad_norm",
                                      "delta_index",   "gamma",  "armijo_trials",
                                      "w_norm",        "dirderiv", "cond_ratio"};
      if (fields.size() < 10)
        throw std::runtime_error("trace CSV: header must list the nine step columns plus x_*");
      for (std::size_t i = 0; i < 9; ++i)
        if (fields[i] != kPrefix[i])
          throw std::runtime_error("trace CSV: unexpected header column '" + fields[i] + "'");
      dim = fields.size() - 9;
      have_header = true;
      continue;
    }
    if (fields.size() != 9 + dim)
      throw std::runtime_error("trace CSV: line " + std::to_string(line_no) +
                               " has the wrong number of columns");
    TraceRow row;
    row.iter = parse_int(fields[0]);
    row.f = parse_double(fields[1]);
    row.grad_norm = parse_double(fields[2]);
    row.delta_index = parse_int(fields[3]);
    row.gamma = parse_double(fields[4]);
    row.armijo_trials = parse_int(fields[5]);
    row.w_norm = parse_double(fields[6]);
    row.dirderiv = parse_double(fields[7]);
    row.cond_ratio = parse_double(fields[8]);
    row.x.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) row.x.push_back(parse_double(fields[9 + i]));
    rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error("trace CSV: missing header row");
  return rows;
}

}  // namespace qn::cli
