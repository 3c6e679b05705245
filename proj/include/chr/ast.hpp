#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chr/eval.hpp"
#include "chr/term.hpp"

namespace chr {

// ---- Logical Algorithms ----

struct LAAntecedent {
  enum class Kind { Positive, Negative, Compare };
  Kind kind;
  Term atom;       // Positive / Negative: the user atom (without del)
  Comparison cmp;  // Compare only

  static LAAntecedent positive(Term a) { return {Kind::Positive, std::move(a), {}}; }
  static LAAntecedent negative(Term a) { return {Kind::Negative, std::move(a), {}}; }
  static LAAntecedent compare(Comparison c) { return {Kind::Compare, nullptr, std::move(c)}; }
  bool is_user() const { return kind != Kind::Compare; }
};

struct LAConclusion {
  bool del;
  Term atom;
};

struct LARule {
  std::string name;
  Term priority;
  std::vector<LAAntecedent> antecedents;
  std::vector<LAConclusion> conclusions;
};

struct LAProgram {
  std::vector<LARule> rules;
};

// Initial database: ground assertions, `del` ones included.
using LAGoal = std::vector<LAConclusion>;

struct LASource {
  LAProgram program;
  LAGoal goal;
};

// ---- CHR^rp ----

struct BodyItem {
  enum class Kind { Atom, Tell };
  Kind kind;
  Term atom;      // Atom
  Term lhs, rhs;  // Tell

  static BodyItem user(Term a) { return {Kind::Atom, std::move(a), nullptr, nullptr}; }
  static BodyItem tell(Term l, Term r) {
    return {Kind::Tell, nullptr, std::move(l), std::move(r)};
  }
};

enum class RuleKind { Simplification, Propagation, Simpagation };

struct ChrRule {
  Term priority;
  std::string name;
  std::vector<Term> kept;
  std::vector<Term> removed;
  std::vector<Comparison> guard;
  std::vector<BodyItem> body;

  RuleKind kind() const {
    if (kept.empty()) return RuleKind::Simplification;
    if (removed.empty()) return RuleKind::Propagation;
    return RuleKind::Simpagation;
  }
  // Heads in textual order: kept first, then removed.
  std::vector<Term> heads() const;
};

struct ChrProgram {
  std::vector<ChrRule> rules;
};

using ChrGoal = std::vector<BodyItem>;

struct ChrSource {
  ChrProgram program;
  ChrGoal goal;
};

// ---- intermediate form: +H1,?g1,...,±Hn,?gn <=> B ----

struct IntermediateItem {
  bool kept;
  Term head;
  std::vector<Comparison> post_guard;
  int source_index;  // index into ChrRule::heads()
};

struct IntermediateRule {
  Term priority;
  std::string name;
  std::vector<IntermediateItem> items;
  std::vector<BodyItem> body;
};

// ---- helpers ----

// "functor/arity" of a user atom.
std::string pred_key(const Term& atom);
bool priority_is_static(const Term& p);

// Structural equality modulo a consistent renaming of variables.
bool alpha_equal(const std::vector<Term>& a, const std::vector<Term>& b);
bool ast_equal(const LARule& a, const LARule& b);
bool ast_equal(const LAProgram& a, const LAProgram& b);
bool ast_equal(const ChrRule& a, const ChrRule& b);
bool ast_equal(const ChrProgram& a, const ChrProgram& b);

// Every term of a rule in a fixed traversal order (used for alpha_equal).
std::vector<Term> flatten(const LARule& r);
std::vector<Term> flatten(const ChrRule& r);

std::vector<Term> vars_of(const LARule& r);
std::vector<Term> vars_of(const ChrRule& r);

}  // namespace chr
