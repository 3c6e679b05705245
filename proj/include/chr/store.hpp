#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "chr/term.hpp"

namespace chr {

// Herbrand equality store: union-find over variables, each class optionally
// bound to a non-variable term. Unification always performs the occurs check.
class BuiltinStore {
 public:
  bool failed() const { return failed_; }
  void mark_failed() { failed_ = true; }

  std::int64_t find(std::int64_t var) const;
  // Dereferences the top level only; the result is a class root or non-var.
  Term deref(const Term& t) const;
  // Fully substitutes bindings and maps every variable to its class root.
  Term resolve(const Term& t) const;

  // Tell x = y. On failure the store is marked failed and false is returned.
  // `touched` receives the roots that stopped being free roots.
  bool unify(const Term& a, const Term& b,
             std::vector<std::int64_t>* touched = nullptr);

  bool same_class(std::int64_t a, std::int64_t b) const {
    return find(a) == find(b);
  }
  std::size_t binding_count() const { return binding_.size(); }
  std::size_t tell_count() const { return tells_; }

 private:
  Term root_var_term(std::int64_t root, const Term& fallback) const;

  mutable std::unordered_map<std::int64_t, std::int64_t> parent_;
  std::unordered_map<std::int64_t, int> rank_;
  std::unordered_map<std::int64_t, Term> binding_;   // root -> non-var term
  std::unordered_map<std::int64_t, Term> root_term_; // root -> var term
  bool failed_ = false;
  std::size_t tells_ = 0;
};

// Functional form: returns the extended store or nullopt on failure.
std::optional<BuiltinStore> unify(const Term& a, const Term& b,
                                  const BuiltinStore& store);

}  // namespace chr
