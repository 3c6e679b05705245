#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace chr {

enum class TermKind : std::uint8_t { Var, Int, Compound };

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

// Immutable term node. Atoms are 0-ary compounds; variables carry a
// process-unique id plus the source name used for printing.
struct TermNode {
  TermKind kind;
  std::int64_t value;  // Int payload or Var id
  std::string name;    // functor or variable name
  std::vector<Term> args;
  std::size_t hash;
  bool ground;
};

class TermError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Term mk_var(const std::string& name);
Term mk_var_with_id(std::int64_t id, const std::string& name);
Term mk_int(std::int64_t v);
Term mk_atom(const std::string& name);
Term mk_compound(const std::string& functor, std::vector<Term> args);
Term mk_list(const std::vector<Term>& items, Term tail = nullptr);

std::int64_t fresh_var_id();

inline bool is_var(const Term& t) { return t->kind == TermKind::Var; }
inline bool is_int(const Term& t) { return t->kind == TermKind::Int; }
inline bool is_compound(const Term& t) { return t->kind == TermKind::Compound; }
inline bool is_atom(const Term& t) {
  return t->kind == TermKind::Compound && t->args.empty();
}
inline std::size_t arity(const Term& t) { return t->args.size(); }

bool is_arith_functor(const std::string& f, std::size_t n);
bool is_arith(const Term& t);

// Structural order: Var < Int < Compound; compounds by arity, name, args.
int compare_terms(const Term& a, const Term& b);
bool term_equal(const Term& a, const Term& b);

struct TermLess {
  bool operator()(const Term& a, const Term& b) const {
    return compare_terms(a, b) < 0;
  }
};
struct TermHash {
  std::size_t operator()(const Term& t) const { return t->hash; }
};
struct TermEq {
  bool operator()(const Term& a, const Term& b) const {
    return term_equal(a, b);
  }
};

void collect_vars(const Term& t, std::vector<Term>& out);
std::vector<Term> vars_of(const Term& t);
bool occurs(std::int64_t var_id, const Term& t);

std::string to_string(const Term& t);

// ---- substitutions ----

class Substitution {
 public:
  void bind(std::int64_t var, Term value) { map_[var] = std::move(value); }
  const Term* lookup(std::int64_t var) const {
    auto it = map_.find(var);
    return it == map_.end() ? nullptr : &it->second;
  }
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::unordered_map<std::int64_t, Term>& bindings() const {
    return map_;
  }
  // Applies bindings exhaustively (chains are followed).
  Term apply(const Term& t) const;
  // this ∘ other: apply other first, then this.
  Substitution compose(const Substitution& other) const;

 private:
  std::unordered_map<std::int64_t, Term> map_;
};

// One-sided matching: pattern variables only, ground target.
std::optional<Substitution> match(const Term& pattern, const Term& target);
bool match_into(const Term& pattern, const Term& target, Substitution& s);

// Syntactic most general unifier of a whole set (occurs-checked).
std::optional<Substitution> mgu_of_set(const std::vector<Term>& terms);
std::optional<Substitution> mgu(const Term& a, const Term& b);

// Consistent renaming of all variables to fresh ones.
Term rename_apart(const Term& t, std::unordered_map<std::int64_t, Term>& map);

}  // namespace chr
