#pragma once

#include <string>

#include "chr/ast.hpp"

namespace chr {

// Variables that share a display name inside one rule are disambiguated with
// a numeric suffix, so the output always re-parses to an alpha-equal rule.
std::string to_string(const LARule& r);
std::string to_string(const ChrRule& r);
std::string to_string(const IntermediateRule& r);
std::string to_string(const BodyItem& b);
std::string to_string(const LAConclusion& c);

std::string pretty_print_la(const LAProgram& p, const LAGoal* goal = nullptr);
std::string pretty_print_chrrp(const ChrProgram& p, const ChrGoal* goal = nullptr);

}  // namespace chr
