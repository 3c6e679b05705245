#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chr/ast.hpp"

namespace chr {

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Scope };
  ParseError(Kind kind, int line, int col, const std::string& msg,
             std::vector<std::string> expected = {});
  Kind kind;
  int line;
  int col;
  std::string detail;
  std::vector<std::string> expected;
};

LASource parse_la(std::string_view text);
ChrSource parse_chrrp(std::string_view text);

// Single term or comparison-free expression; variables shared within a call.
Term parse_term(std::string_view text);

// Scope checks shared with the translators. Throw ParseError(Scope) at 0:0.
void check_la_rule(const LARule& r);
void check_chr_rule(const ChrRule& r);

}  // namespace chr
