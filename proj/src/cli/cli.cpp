#include "chr/cli.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chr/bench.hpp"
#include "chr/correspond.hpp"
#include "chr/engine.hpp"
#include "chr/la_interp.hpp"
#include "chr/parser.hpp"
#include "chr/printer.hpp"
#include "chr/translate.hpp"
#include "chr/wp_interp.hpp"

namespace chr::cli {

namespace {

struct Failure {
  int code;
  std::string message;
};

enum class Lang { La, Chrrp };

Lang language_of(const std::string& path) {
  auto ends = [&](const std::string& s) {
    return path.size() >= s.size() && path.compare(path.size() - s.size(), s.size(), s) == 0;
  };
  if (ends(".la")) return Lang::La;
  if (ends(".chrrp") || ends(".chr")) return Lang::Chrrp;
  throw Failure{kUsage, path + ": unknown extension (expected .la or .chrrp)"};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{kUsage, "cannot open " + path};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Failure{kUsage, "cannot write " + path};
  out << text;
}

// Random sub-multiset of `goal` in random order, at most `max_items` long.
// Trial 0 keeps the goal unchanged.
template <typename T>
std::vector<T> sub_goal(const std::vector<T>& goal, std::size_t max_items, int trial,
                        std::mt19937_64& rng) {
  if (trial == 0 && goal.size() <= max_items) return goal;
  std::vector<T> items = goal;
  std::shuffle(items.begin(), items.end(), rng);
  if (items.empty()) return items;
  std::size_t cap = std::min(max_items, items.size());
  std::size_t k = std::uniform_int_distribution<std::size_t>(1, cap)(rng);
  items.resize(k);
  return items;
}

ExecState exec_state_of(const EngineResult& r) {
  ExecState s;
  s.store = r.store;
  s.builtins = r.builtins;
  s.failed = r.failed;
  return s;
}

std::string metrics_json(const EngineResult& r, const ChrProgram& p) {
  nlohmann::ordered_json j = r.metrics.flat();
  AtgbReport a = atgb_bound(r.metrics, p);
  j["atgb.derivation_length"] = a.derivation_length;
  j["atgb.c_max"] = a.c_max;
  return j.dump(2) + "\n";
}

struct RunConfig {
  std::string input;
  std::string mode = "engine";
  std::size_t budget = 1000000;
  bool trace = false;
  std::string metrics;
  std::uint64_t seed = 1;
  bool emit = false;
};

int cmd_run(const RunConfig& c, std::ostream& out) {
  if (c.budget == 0) throw Failure{kUsage, "--budget must be positive"};
  Lang lang = language_of(c.input);
  std::string text = read_file(c.input);
  bool want_engine = c.mode != "oracle";
  EngineOptions eo;
  eo.budget = c.budget;
  eo.trace = c.trace;

  if (lang == Lang::Chrrp) {
    ChrSource src = parse_chrrp(text);
    std::vector<Term> vars = goal_variables(src.goal);
    if (c.emit) out << emit_chr(compile(src.program));
    std::string engine_state;
    if (want_engine) {
      EngineResult r = engine_run(src.goal, src.program, eo);
      for (const auto& l : r.trace) out << l << "\n";
      engine_state = canonical(r, vars);
      out << (c.mode == "both" ? "engine: " : "") << engine_state << "\n";
      if (!c.metrics.empty()) write_file(c.metrics, metrics_json(r, src.program));
    }
    if (c.mode == "oracle") {
      std::mt19937_64 rng(c.seed);
      WpRunResult r = wp_run(src.goal, src.program, c.budget, wp_random(rng), c.trace);
      for (const auto& l : r.trace) out << l << "\n";
      out << canonical(r.state, vars) << "\n";
      if (!c.metrics.empty()) {
        nlohmann::ordered_json j{{"steps", r.steps}, {"applies", r.applies}};
        write_file(c.metrics, j.dump(2) + "\n");
      }
    }
    if (c.mode == "both") {
      auto finals = wp_reachable_finals(src.goal, src.program, c.budget);
      out << "oracle: " << finals.size() << " reachable final state(s)\n";
      if (!finals.count(engine_state)) {
        throw Failure{kMismatch, "engine final state is not reachable under omega_p"};
      }
      out << "conformance: ok\n";
    }
    return kOk;
  }

  LASource src = parse_la(text);
  std::string engine_state;
  if (want_engine) {
    La2ChrResult tr = translate_la_program(src.program, &src.goal);
    if (c.emit) out << emit_chr(compile(tr.program));
    EngineResult r = engine_run(la_goal_to_chr(src.goal), tr.program, eo);
    for (const auto& l : r.trace) out << l << "\n";
    engine_state = canonical(chrtola(exec_state_of(r), tr.rep_to_pred));
    out << (c.mode == "both" ? "engine: " : "") << engine_state << "\n";
    if (!c.metrics.empty()) write_file(c.metrics, metrics_json(r, tr.program));
  }
  if (c.mode == "oracle") {
    LARunResult r = la_run(src.goal, src.program, c.budget, la_first(), c.trace);
    for (const auto& l : r.trace) out << l << "\n";
    out << canonical(r.state) << "\n";
    if (!c.metrics.empty()) {
      nlohmann::ordered_json j{{"steps", r.steps}};
      write_file(c.metrics, j.dump(2) + "\n");
    }
  }
  if (c.mode == "both") {
    auto finals = la_reachable_finals(src.goal, src.program, c.budget);
    out << "oracle: " << finals.size() << " reachable final state(s)\n";
    if (!finals.count(engine_state)) {
      throw Failure{kMismatch, "engine final state is not reachable under the LA semantics"};
    }
    out << "conformance: ok\n";
  }
  return kOk;
}

struct TranslateConfig {
  std::string input;
  std::string to;
  std::string output;
  std::string name_map;
  int check = 0;
  std::uint64_t seed = 1;
  std::size_t budget = 20000;
};

void report_correspondence(const CorrespondenceReport& rep, int trial, std::ostream& out) {
  if (rep.ok) return;
  std::ostringstream os;
  os << "trial " << trial << ": correspondence failure after " << rep.steps
     << " step(s): " << rep.message << "\n";
  for (const auto& l : rep.trace) os << "  " << l << "\n";
  out << os.str();
  throw Failure{kMismatch, "translation does not correspond"};
}

int cmd_translate(const TranslateConfig& c, std::ostream& out) {
  Lang lang = language_of(c.input);
  std::string text = read_file(c.input);
  std::string result;
  std::vector<NameMapEntry> names;
  std::mt19937_64 rng(c.seed);
  if (lang == Lang::La) {
    if (c.to != "chrrp") throw Failure{kUsage, "an .la input translates --to chrrp"};
    LASource src = parse_la(text);
    La2ChrResult tr = translate_la_program(src.program, &src.goal);
    ChrGoal goal = la_goal_to_chr(src.goal);
    result = pretty_print_chrrp(tr.program, &goal);
    parse_chrrp(result);
    names = tr.name_map;
    for (int t = 0; t < c.check; ++t) {
      LASource s = src;
      s.goal = sub_goal(src.goal, 15, t, rng);
      report_correspondence(check_la2chr(s, tr, c.budget, rng()), t, out);
    }
  } else {
    if (c.to != "la") throw Failure{kUsage, "a .chrrp input translates --to la"};
    ChrSource src = parse_chrrp(text);
    check_segment(src);
    Chr2LaResult tr = translate_chrrp_program(src.program);
    LAGoal goal = chr_goal_to_la(src.goal);
    result = pretty_print_la(tr.program, &goal);
    parse_la(result);
    names = tr.name_map;
    for (int t = 0; t < c.check; ++t) {
      ChrSource s = src;
      s.goal = sub_goal(src.goal, 15, t, rng);
      report_correspondence(check_chr2la(s, tr, c.budget, rng()), t, out);
    }
  }
  if (c.output.empty()) {
    out << result;
  } else {
    write_file(c.output, result);
  }
  if (!c.name_map.empty()) write_file(c.name_map, name_map_tsv(names));
  if (c.check > 0) out << "% correspondence: " << c.check << " trial(s) passed\n";
  return kOk;
}

struct CheckConfig {
  std::string input;
  std::string direction;  // la2chr | chr2la | oracle; empty: from the extension
  int trials = 20;
  std::uint64_t seed = 1;
  std::size_t budget = 20000;
  std::string mutate;  // priority | alldiff | token
  std::string mutate_rule;
};

// Applies a mutation to `rule`, or else to the first rule it changes. Token
// rules are addressed by their source rule name.
LAProgram mutated(const LAProgram& p, const std::string& kind, const std::string& rule) {
  auto apply = [&](const std::string& name) {
    if (kind == "priority") return mutate_priority(p, name, 1);
    if (kind == "alldiff") return drop_alldiff(p, name);
    return drop_token_rule(p, name);
  };
  std::vector<std::string> candidates;
  if (!rule.empty()) {
    candidates.push_back(rule);
  } else {
    for (const auto& r : p.rules) {
      bool token = r.name.size() > 3 && r.name.compare(r.name.size() - 3, 3, "_p1") == 0;
      candidates.push_back(kind == "token" && token ? r.name.substr(0, r.name.size() - 3)
                                                    : r.name);
    }
  }
  for (const auto& name : candidates) {
    LAProgram q = apply(name);
    if (!ast_equal(q, p)) return q;
  }
  throw Failure{kUsage, "mutation '" + kind + "' does not apply to this program"};
}

int cmd_check(const CheckConfig& c, std::ostream& out) {
  Lang lang = language_of(c.input);
  std::string text = read_file(c.input);
  std::string dir = c.direction;
  if (dir.empty()) dir = lang == Lang::La ? "la2chr" : "chr2la";
  if ((dir == "la2chr") != (lang == Lang::La) && dir != "oracle") {
    throw Failure{kUsage, "direction " + dir + " does not match the input language"};
  }
  if (!c.mutate.empty() && dir != "chr2la") {
    throw Failure{kUsage, "--mutate applies to the chr2la direction"};
  }
  std::mt19937_64 rng(c.seed);
  int passed = 0, inconclusive = 0;
  if (dir == "la2chr") {
    LASource src = parse_la(text);
    La2ChrResult tr = translate_la_program(src.program, &src.goal);
    for (int t = 0; t < c.trials; ++t) {
      LASource s = src;
      s.goal = sub_goal(src.goal, 15, t, rng);
      CorrespondenceReport rep = check_la2chr(s, tr, c.budget, rng());
      report_correspondence(rep, t, out);
      rep.inconclusive ? ++inconclusive : ++passed;
    }
  } else if (dir == "chr2la") {
    ChrSource src = parse_chrrp(text);
    check_segment(src);
    Chr2LaResult tr = translate_chrrp_program(src.program);
    if (!c.mutate.empty()) tr.program = mutated(tr.program, c.mutate, c.mutate_rule);
    for (int t = 0; t < c.trials; ++t) {
      ChrSource s = src;
      s.goal = sub_goal(src.goal, 15, t, rng);
      CorrespondenceReport rep = check_chr2la(s, tr, c.budget, rng());
      report_correspondence(rep, t, out);
      rep.inconclusive ? ++inconclusive : ++passed;
    }
  } else if (dir == "oracle") {
    for (int t = 0; t < c.trials; ++t) {
      EngineOptions eo;
      eo.budget = c.budget;
      std::string got;
      bool ok = false;
      if (lang == Lang::Chrrp) {
        ChrSource src = parse_chrrp(text);
        ChrGoal g = sub_goal(src.goal, 15, t, rng);
        got = canonical(engine_run(g, src.program, eo), goal_variables(g));
        ok = wp_reachable_finals(g, src.program, c.budget).count(got) > 0;
      } else {
        LASource src = parse_la(text);
        La2ChrResult tr = translate_la_program(src.program, &src.goal);
        LAGoal g = sub_goal(src.goal, 15, t, rng);
        EngineResult r = engine_run(la_goal_to_chr(g), tr.program, eo);
        got = canonical(chrtola(exec_state_of(r), tr.rep_to_pred));
        ok = la_reachable_finals(g, src.program, c.budget).count(got) > 0;
      }
      if (!ok) {
        out << "trial " << t << ": engine final state " << got << " is not reachable\n";
        throw Failure{kMismatch, "oracle conformance failure"};
      }
      ++passed;
    }
  } else {
    throw Failure{kUsage, "unknown direction " + dir};
  }
  out << dir << ": " << passed << " passed, " << inconclusive << " inconclusive\n";
  return kOk;
}

struct BenchConfig {
  std::string example;
  std::vector<int> sizes;
  std::uint64_t seed = 1;
  std::string output;
};

int cmd_bench(const BenchConfig& c, std::ostream& out) {
  std::vector<int> sizes = c.sizes;
  if (sizes.empty()) {
    if (c.example == "dijkstra") sizes = {50, 100, 200, 400, 800};
    if (c.example == "mergesort") sizes = {8, 16, 32, 64, 128, 256};
    if (c.example == "leq") sizes = {4, 8, 12, 16, 20};
  }
  std::string json;
  try {
    json = bench::to_json(bench::run(c.example, sizes, c.seed)) + "\n";
  } catch (const bench::BenchError& e) {
    throw Failure{kUsage, e.what()};
  }
  if (c.output.empty()) {
    out << json;
  } else {
    write_file(c.output, json);
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CHR^rp / Logical Algorithms toolkit", "chrrp"};
  app.require_subcommand(1);

  RunConfig rc;
  auto* run_cmd = app.add_subcommand("run", "Run a program on the engine and/or the oracle");
  run_cmd->add_option("input", rc.input, ".la or .chrrp file")->required();
  run_cmd->add_option("--mode", rc.mode)->check(CLI::IsMember({"engine", "oracle", "both"}));
  run_cmd->add_option("--budget", rc.budget, "maximum rule firings");
  run_cmd->add_flag("--trace", rc.trace);
  run_cmd->add_option("--metrics", rc.metrics, "write counters as JSON");
  run_cmd->add_option("--seed", rc.seed);
  run_cmd->add_flag("--emit-chr", rc.emit, "print the compiled rule listing");

  TranslateConfig tc;
  auto* tr_cmd = app.add_subcommand("translate", "Translate between LA and CHR^rp");
  tr_cmd->add_option("input", tc.input)->required();
  tr_cmd->add_option("--to", tc.to)->required()->check(CLI::IsMember({"la", "chrrp"}));
  tr_cmd->add_option("-o,--output", tc.output);
  tr_cmd->add_option("--name-map", tc.name_map, "write generated names as TSV");
  tr_cmd->add_option("--check", tc.check, "correspondence trials on random sub-goals");
  tr_cmd->add_option("--seed", tc.seed);
  tr_cmd->add_option("--budget", tc.budget);

  CheckConfig cc;
  auto* ck_cmd = app.add_subcommand("check", "Check a translation or oracle conformance");
  ck_cmd->add_option("input", cc.input)->required();
  ck_cmd->add_option("--direction", cc.direction)
      ->check(CLI::IsMember({"la2chr", "chr2la", "oracle"}));
  ck_cmd->add_option("--trials", cc.trials);
  ck_cmd->add_option("--seed", cc.seed);
  ck_cmd->add_option("--budget", cc.budget);
  ck_cmd->add_option("--mutate", cc.mutate)
      ->check(CLI::IsMember({"priority", "alldiff", "token"}));
  ck_cmd->add_option("--mutate-rule", cc.mutate_rule, "rule the mutation applies to");

  BenchConfig bc;
  auto* bench_cmd = app.add_subcommand("bench", "Measure counter growth of a built-in example");
  bench_cmd->add_option("example", bc.example)
      ->required()
      ->check(CLI::IsMember({"dijkstra", "mergesort", "leq"}));
  bench_cmd->add_option("--sizes", bc.sizes)->delimiter(',');
  bench_cmd->add_option("--seed", bc.seed);
  bench_cmd->add_option("-o,--output", bc.output);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "chrrp: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(rc, out);
    if (*tr_cmd) return cmd_translate(tc, out);
    if (*ck_cmd) return cmd_check(cc, out);
    return cmd_bench(bc, out);
  } catch (const Failure& f) {
    err << "chrrp: " << f.message << "\n";
    return f.code;
  } catch (const ParseError& e) {
    err << "chrrp: " << e.what() << "\n";
    return kParse;
  } catch (const TranslationError& e) {
    err << "chrrp: rejected: " << e.what() << "\n";
    return kParse;
  } catch (const BudgetExceeded& e) {
    err << "chrrp: budget exhausted: " << e.what() << "\n";
    return kBudget;
  } catch (const std::exception& e) {
    err << "chrrp: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace chr::cli
