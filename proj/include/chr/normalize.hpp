#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "chr/ast.hpp"

namespace chr {

// Splits a rule whose priority depends on more than the first antecedent:
//   r__1 @ 1 : A1..Am => priority_r(p)
//   r__2 @ P : priority_r(P), A1..An, P = p => C
// with A1..Am the shortest prefix binding every priority variable.
std::vector<LARule> normalize_la_priority(const LARule& rule);
LAProgram normalize_la_priority(const LAProgram& program);

bool is_priority_predicate(const std::string& functor);

class IntermediateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Default order is kept heads then removed heads; `join_order` permutes
// ChrRule::heads(). Guard conjuncts are placed after the first head at which
// all their variables are bound.
IntermediateRule to_intermediate(const ChrRule& rule,
                                 const std::optional<std::vector<int>>& join_order = {});

}  // namespace chr
