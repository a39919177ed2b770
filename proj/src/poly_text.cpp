#include "qnewton/poly_text.hpp"

#include <cctype>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace qn {

namespace {

struct Token {
  enum Kind { Number, Var, Imag, Star, Caret, Plus, Minus, End } kind = End;
  double value = 0.0;
  int var_index = 0;
  int column = 0;
};

std::vector<Token> lex_line(const std::string& line, int line_no, char var_prefix, bool allow_imag) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const char c = line[pos];
    const int column = static_cast<int>(pos) + 1;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++pos;
      continue;
    }
    if (c == '+') {
      tokens.push_back(Token{Token::Plus, 0.0, 0, column});
      ++pos;
      continue;
    }
    if (c == '-') {
      tokens.push_back(Token{Token::Minus, 0.0, 0, column});
      ++pos;
      continue;
    }
    if (c == '*') {
      tokens.push_back(Token{Token::Star, 0.0, 0, column});
      ++pos;
      continue;
    }
    if (c == '^') {
      tokens.push_back(Token{Token::Caret, 0.0, 0, column});
      ++pos;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double value = std::strtod(line.c_str() + pos, &end);
      if (end == line.c_str() + pos) throw ParseError(line_no, column, "malformed number");
      tokens.push_back(Token{Token::Number, value, 0, column});
      pos = static_cast<std::size_t>(end - line.c_str());
      continue;
    }
    if (c == var_prefix && pos + 1 < line.size() &&
        std::isdigit(static_cast<unsigned char>(line[pos + 1]))) {
      std::size_t p = pos + 1;
      long idx = 0;
      while (p < line.size() && std::isdigit(static_cast<unsigned char>(line[p]))) {
        idx = idx * 10 + (line[p] - '0');
        if (idx > 1000000) throw ParseError(line_no, column, "variable index too large");
        ++p;
      }
      if (idx == 0)
        throw ParseError(line_no, column, "variable indices start at 1");
      tokens.push_back(Token{Token::Var, 0.0, static_cast<int>(idx), column});
      pos = p;
      continue;
    }
    if (c == 'i' && (pos + 1 >= line.size() ||
                     !std::isalnum(static_cast<unsigned char>(line[pos + 1])))) {
      if (!allow_imag)
        throw ParseError(line_no, column, "'i' is reserved for complex systems (--complex)");
      tokens.push_back(Token{Token::Imag, 0.0, 0, column});
      ++pos;
      continue;
    }
    std::string msg = "unexpected character '";
    msg += c;
    msg += "'";
    if (std::isalpha(static_cast<unsigned char>(c)))
      msg += std::string("; variables are named ") + var_prefix + "1, " + var_prefix + "2, ...";
    throw ParseError(line_no, column, msg);
  }
  tokens.push_back(Token{Token::End, 0.0, 0, static_cast<int>(line.size()) + 1});
  return tokens;
}

struct RawTerm {
  std::complex<double> coeff;
  std::map<int, int> exps;  // 1-based variable index -> exponent
};

std::vector<RawTerm> parse_line(const std::string& line, int line_no, char var_prefix,
                                bool allow_imag) {
  const std::vector<Token> tokens = lex_line(line, line_no, var_prefix, allow_imag);
  std::size_t i = 0;
  std::vector<RawTerm> terms;

  auto parse_term = [&](double sign) {
    RawTerm term;
    term.coeff = sign;
    while (true) {
      const Token& tok = tokens[i];
      if (tok.kind == Token::Number) {
        term.coeff *= tok.value;
        ++i;
      } else if (tok.kind == Token::Imag) {
        term.coeff *= std::complex<double>(0.0, 1.0);
        ++i;
      } else if (tok.kind == Token::Var) {
        int exponent = 1;
        ++i;
        if (tokens[i].kind == Token::Caret) {
          ++i;
          const Token& e = tokens[i];
          if (e.kind != Token::Number || e.value < 0.0 || e.value != static_cast<double>(static_cast<int>(e.value)))
            throw ParseError(line_no, e.column, "exponent must be a non-negative integer");
          exponent = static_cast<int>(e.value);
          ++i;
        }
        term.exps[tok.var_index] += exponent;
      } else {
        throw ParseError(line_no, tok.column, "expected a number, a variable, or 'i'");
      }
      if (tokens[i].kind == Token::Star) {
        ++i;
        continue;
      }
      break;
    }
    terms.push_back(std::move(term));
  };

  double sign = 1.0;
  if (tokens[i].kind == Token::Plus || tokens[i].kind == Token::Minus) {
    sign = (tokens[i].kind == Token::Minus) ? -1.0 : 1.0;
    ++i;
  }
  parse_term(sign);
  while (tokens[i].kind != Token::End) {
    if (tokens[i].kind == Token::Plus)
      sign = 1.0;
    else if (tokens[i].kind == Token::Minus)
      sign = -1.0;
    else
      throw ParseError(line_no, tokens[i].column, "expected '+' or '-' between terms");
    ++i;
    parse_term(sign);
  }
  return terms;
}

struct ParsedLine {
  std::vector<RawTerm> terms;
  int line_no = 0;
};

// Strips comments/blanks, parses the rest, and reports the largest variable
// index seen anywhere.
std::pair<std::vector<ParsedLine>, int> parse_lines(const std::string& text, char var_prefix,
                                                    bool allow_imag) {
  std::vector<ParsedLine> out;
  int max_var = 0;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ParsedLine parsed{parse_line(line, line_no, var_prefix, allow_imag), line_no};
    for (const RawTerm& t : parsed.terms)
      for (const auto& [idx, exp] : t.exps)
        if (exp > 0) max_var = std::max(max_var, idx);
    out.push_back(std::move(parsed));
  }
  if (out.empty()) throw ParseError(std::max(line_no, 1), 1, "no polynomials found");
  return {std::move(out), max_var};
}

std::vector<Monomial> real_monomials(const std::vector<RawTerm>& terms, int num_vars, int line_no) {
  std::vector<Monomial> out;
  for (const RawTerm& t : terms) {
    Monomial mono;
    mono.coeff = t.coeff.real();  // imaginary parts cannot arise in real mode
    mono.exponents.assign(static_cast<std::size_t>(num_vars), 0);
    for (const auto& [idx, exp] : t.exps) {
      if (idx > num_vars)
        throw ParseError(line_no, 1, "variable index exceeds the system's variable count");
      mono.exponents[static_cast<std::size_t>(idx) - 1] += exp;
    }
    out.push_back(std::move(mono));
  }
  return out;
}

std::vector<ComplexMonomial> complex_monomials(const std::vector<RawTerm>& terms, int num_vars,
                                               int line_no) {
  std::vector<ComplexMonomial> out;
  for (const RawTerm& t : terms) {
    ComplexMonomial mono;
    mono.coeff = t.coeff;
    mono.exponents.assign(static_cast<std::size_t>(num_vars), 0);
    for (const auto& [idx, exp] : t.exps) {
      if (idx > num_vars)
        throw ParseError(line_no, 1, "variable index exceeds the system's variable count");
      mono.exponents[static_cast<std::size_t>(idx) - 1] += exp;
    }
    out.push_back(std::move(mono));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open polynomial file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Polynomial parse_polynomial(std::string_view text, int num_vars, int line_no) {
  const std::vector<RawTerm> terms = parse_line(std::string(text), line_no, 'x', false);
  return Polynomial(num_vars, real_monomials(terms, num_vars, line_no));
}

ComplexPolynomial parse_complex_polynomial(std::string_view text, int num_vars, int line_no) {
  const std::vector<RawTerm> terms = parse_line(std::string(text), line_no, 'z', true);
  return ComplexPolynomial(num_vars, complex_monomials(terms, num_vars, line_no));
}

PolySystem parse_system_text(const std::string& text) {
  const auto [lines, max_var] = parse_lines(text, 'x', false);
  if (max_var == 0) throw ParseError(lines.front().line_no, 1, "system mentions no variables");
  std::vector<Polynomial> polys;
  polys.reserve(lines.size());
  for (const ParsedLine& pl : lines)
    polys.emplace_back(max_var, real_monomials(pl.terms, max_var, pl.line_no));
  return PolySystem(std::move(polys));
}

std::vector<ComplexPolynomial> parse_complex_system_text(const std::string& text) {
  const auto [lines, max_var] = parse_lines(text, 'z', true);
  if (max_var == 0) throw ParseError(lines.front().line_no, 1, "system mentions no variables");
  std::vector<ComplexPolynomial> polys;
  polys.reserve(lines.size());
  for (const ParsedLine& pl : lines)
    polys.emplace_back(max_var, complex_monomials(pl.terms, max_var, pl.line_no));
  return polys;
}

PolySystem parse_system_file(const std::string& path) { return parse_system_text(read_file(path)); }

std::vector<ComplexPolynomial> parse_complex_system_file(const std::string& path) {
  return parse_complex_system_text(read_file(path));
}

}  // namespace qn
