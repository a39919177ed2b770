#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qnewton/polysys.hpp"

// Text format for polynomial systems: one polynomial per line, terms like
//
//   3*x1^2*x2 - 1.5*x2 + 2
//
// Variables are x1..xm in real mode and z1..zn in complex mode, where the
// bare token `i` is the imaginary unit. Factors are joined with `*`, exponents
// with `^`; no parentheses. `#` starts a comment; blank lines are skipped.
// The variable count is the largest index appearing anywhere in the file.

namespace qn {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" + std::to_string(column) +
                           ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Single polynomial over exactly num_vars variables (indices above num_vars
// are an error; unused variables are fine). line_no only shapes error text.
Polynomial parse_polynomial(std::string_view text, int num_vars, int line_no = 1);
ComplexPolynomial parse_complex_polynomial(std::string_view text, int num_vars, int line_no = 1);

// Whole-file parsers; infer the variable count from the largest index used.
PolySystem parse_system_file(const std::string& path);
std::vector<ComplexPolynomial> parse_complex_system_file(const std::string& path);

// Same, from an in-memory string (used by tests and the file parsers).
PolySystem parse_system_text(const std::string& text);
std::vector<ComplexPolynomial> parse_complex_system_text(const std::string& text);

}  // namespace qn
