#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chr/translate.hpp"

namespace chr {

struct CorrespondenceReport {
  bool ok = true;
  bool inconclusive = false;  // budget exhausted before a final state
  std::size_t steps = 0;
  std::string message;        // first counterexample
  std::vector<std::string> trace;  // source-side and target-side lines up to the failure
};

// Runs the translation under omega_p with random tie-breaking and checks
// every transition against the LA semantics of the (normalized) source
// under chrtola.
CorrespondenceReport check_la2chr(const LASource& src, const La2ChrResult& tr,
                                  std::size_t budget, std::uint64_t seed);
CorrespondenceReport check_la2chr(const LASource& src, std::size_t budget,
                                  std::uint64_t seed);

// Runs the LA translation with random tie-breaking and checks every
// transition against omega_p of the source under latochr.
CorrespondenceReport check_chr2la(const ChrSource& src, const Chr2LaResult& tr,
                                  std::size_t budget, std::uint64_t seed);
CorrespondenceReport check_chr2la(const ChrSource& src, std::size_t budget,
                                  std::uint64_t seed);

// Faulty translations the checker must reject.
LAProgram mutate_priority(const LAProgram& p, const std::string& rule, std::int64_t delta);
LAProgram drop_alldiff(const LAProgram& p, const std::string& rule);
LAProgram drop_token_rule(const LAProgram& p, const std::string& rule);

}  // namespace chr
