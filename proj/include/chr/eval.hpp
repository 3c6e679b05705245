#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chr/store.hpp"
#include "chr/term.hpp"

namespace chr {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CmpOp { Lt, Le, Eq, Ne };

struct Comparison {
  CmpOp op;
  Term lhs;
  Term rhs;
};

enum class Tri { Entailed, Disentailed, Unknown };

const char* cmp_symbol(CmpOp op);
std::string to_string(const Comparison& c);
bool comparison_equal(const Comparison& a, const Comparison& b);
Comparison apply(const Substitution& s, const Comparison& c);
void collect_vars(const Comparison& c, std::vector<Term>& out);

// Exact int64 arithmetic over + - * and unary minus; overflow throws.
std::int64_t eval_arith(const Term& expr, const BuiltinStore& store);
std::int64_t eval_arith(const Term& expr);

// Resolves through the store and folds every ground arithmetic subterm.
Term normalize_arith(const Term& t, const BuiltinStore& store);
Term normalize_arith(const Term& t);

Tri eval_comparison(const Comparison& c, const BuiltinStore& store);
Tri eval_comparison(const Comparison& c);

// Static satisfiability used by the translators: ground comparisons are
// evaluated, identical sides decide < and \=, = and \= on Herbrand terms go
// through unification, everything else is assumed satisfiable.
bool maybe_satisfiable(const Comparison& c);

}  // namespace chr
