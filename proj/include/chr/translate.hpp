#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chr/ast.hpp"
#include "chr/la_interp.hpp"
#include "chr/wp_interp.hpp"

namespace chr {

class TranslationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mode indicator atoms of a_r(X..., M).
enum class Mode { P, N, B };
const char* mode_name(Mode m);

struct HeadPartition {
  std::vector<std::vector<int>> blocks;  // 0-based, blocks ordered by min element
  Substitution theta;                    // partmgu(rho, A^u)
};

struct NameMapEntry {
  std::string generated;
  std::string source;
};
std::string name_map_tsv(const std::vector<NameMapEntry>& m);

constexpr std::size_t kMaxUserAntecedents = 8;

// ---- LA -> CHR^rp ----

std::pair<std::vector<LAAntecedent>, std::vector<LAAntecedent>> split(
    const std::vector<LAAntecedent>& antecedents);

// Partitions of the user antecedents whose blocks unify and leave the
// comparisons satisfiable. Throws TranslationError above `limit` antecedents.
std::vector<HeadPartition> enumerate_partitions(const std::vector<LAAntecedent>& user,
                                                const std::vector<LAAntecedent>& comparisons,
                                                std::size_t limit = kMaxUserAntecedents);

// theta applied, one representative (the minimum index) per block.
std::vector<LAAntecedent> filter_representatives(const std::vector<LAAntecedent>& user,
                                                 const HeadPartition& rho);

// "1_23" style suffix of a partition.
std::string partition_label(const HeadPartition& rho);

// Representation functor for a user predicate name.
std::string rep_functor(const std::string& functor);

// Heads with mode indicators, and the guards N \= p for deleted antecedents.
// Fresh mode variable names avoid `used`, which is extended.
std::pair<std::vector<Term>, std::vector<Comparison>> add_modes(
    const std::vector<LAAntecedent>& heads, std::set<std::string>& used);

struct La2ChrResult {
  ChrProgram program;
  std::vector<NameMapEntry> name_map;
  LAProgram normalized;                         // the source after priority normalization
  std::map<std::string, std::string> rep_to_pred;  // "dist_r/3" -> "dist"
};

// Predicates of `goal` get T_{S/D} rules as well.
La2ChrResult translate_la_program(const LAProgram& p, const LAGoal* goal = nullptr);

// LA initial database as a CHR goal: A and del(A) constraints.
ChrGoal la_goal_to_chr(const LAGoal& goal);

LAState chrtola(const ExecState& s, const std::map<std::string, std::string>& rep_to_pred);

// ---- CHR^rp -> LA ----

// Empty when the rule is inside the positive range-restricted ground
// segment, else the reason.
std::string segment_violation(const ChrRule& r);
// Throws TranslationError naming the rule and condition.
void check_segment(const ChrSource& src);

struct Chr2LaResult {
  LAProgram program;
  std::vector<NameMapEntry> name_map;
};

Chr2LaResult translate_chrrp_program(const ChrProgram& p);

// Goal atoms numbered 1..k, plus next_id(k+1). The goal must be ground and
// tell-free.
LAGoal chr_goal_to_la(const ChrGoal& goal);

// Throws TranslationError on zero or several undeleted next_id atoms.
ExecState latochr(const LAState& s);

}  // namespace chr
