#include <algorithm>
#include <set>

#include "chr/engine.hpp"
#include "chr/normalize.hpp"
#include "chr/printer.hpp"

namespace chr {

namespace {

void add_vars(CompiledRule& r, const Term& t) {
  std::vector<Term> vs;
  collect_vars(t, vs);
  for (const auto& v : vs) {
    if (r.slot.emplace(v->value, static_cast<int>(r.vars.size())).second) r.vars.push_back(v);
  }
}

bool contains(const std::vector<Term>& vs, const Term& v) {
  for (const auto& x : vs) {
    if (x->value == v->value) return true;
  }
  return false;
}

}  // namespace

CompiledProgram compile(const ChrProgram& p, const JoinOrders& orders) {
  CompiledProgram cp;
  bool have_static = false;
  for (std::size_t ri = 0; ri < p.rules.size(); ++ri) {
    const ChrRule& src = p.rules[ri];
    std::optional<std::vector<int>> order;
    if (auto it = orders.find(src.name); it != orders.end()) order = it->second;
    IntermediateRule ir = to_intermediate(src, order);
    CompiledRule r;
    r.index = static_cast<int>(ri);
    r.name = src.name;
    r.priority = src.priority;
    r.dynamic = !priority_is_static(src.priority);
    r.body = src.body;
    std::vector<Term> seen;
    for (std::size_t i = 0; i < ir.items.size(); ++i) {
      const auto& it = ir.items[i];
      CompiledItem ci;
      ci.kept = it.kept;
      ci.head = it.head;
      ci.pred = pred_key(it.head);
      ci.guard = it.post_guard;
      ci.source_index = it.source_index;
      std::vector<Term> hv;
      collect_vars(it.head, hv);
      std::vector<Term> key;
      if (i > 0) {
        for (const auto& v : hv) {
          if (contains(seen, v) && !contains(key, v)) key.push_back(v);
        }
      }
      r.key_vars.push_back(std::move(key));
      for (const auto& v : hv) {
        if (!contains(seen, v)) seen.push_back(v);
      }
      add_vars(r, it.head);
      r.items.push_back(std::move(ci));
    }
    for (const auto& g : src.guard) {
      add_vars(r, g.lhs);
      add_vars(r, g.rhs);
    }
    add_vars(r, src.priority);
    for (const auto& b : src.body) {
      if (b.kind == BodyItem::Kind::Tell) {
        add_vars(r, b.lhs);
        add_vars(r, b.rhs);
      } else {
        add_vars(r, b.atom);
      }
    }
    if (!r.dynamic) {
      std::int64_t v = eval_arith(src.priority);
      if (!have_static) {
        cp.static_lo = cp.static_hi = v;
        have_static = true;
      }
      cp.static_lo = std::min(cp.static_lo, v);
      cp.static_hi = std::max(cp.static_hi, v);
    }
    for (std::size_t i = 0; i < r.items.size(); ++i) {
      cp.occurrences[r.items[i].pred].emplace_back(r.index, static_cast<int>(i));
    }
    cp.rules.push_back(std::move(r));
  }
  return cp;
}

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += xs[i];
  }
  return out;
}

std::string functor_of(const std::string& pred) { return pred.substr(0, pred.rfind('/')); }

std::vector<std::string> names(const std::vector<Term>& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(v->name);
  return out;
}

std::string guard_text(const std::vector<Comparison>& g) {
  std::vector<std::string> parts;
  for (const auto& c : g) parts.push_back(to_string(c));
  return parts.empty() ? "true" : join(parts);
}

}  // namespace

std::string emit_chr(const CompiledProgram& cp) {
  std::string out;
  std::map<std::string, int> occ_no;
  for (const auto& r : cp.rules) {
    out += "% " + r.name + " @ " + to_string(r.priority) + ":";
    for (std::size_t i = 0; i < r.items.size(); ++i) {
      out += std::string(i ? ", " : " ") + (r.items[i].kept ? "+" : "-") +
             to_string(r.items[i].head) + ", ?" + guard_text(r.items[i].guard);
    }
    out += "\n";
    std::vector<Term> bound;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < r.items.size(); ++i) {
      const CompiledItem& it = r.items[i];
      int k = ++occ_no[it.pred];
      // Head-match residue: repeated variables and non-variable arguments.
      std::vector<std::string> args;
      std::vector<std::string> residue;
      std::set<std::int64_t> local;
      for (std::size_t j = 0; j < it.head->args.size(); ++j) {
        const Term& a = it.head->args[j];
        if (is_var(a) && local.insert(a->value).second) {
          args.push_back(a->name);
        } else if (is_var(a)) {
          std::string fresh = a->name + "_" + std::to_string(j + 1);
          args.push_back(fresh);
          residue.push_back(a->name + " = " + fresh);
        } else {
          std::string fresh = "A" + std::to_string(j + 1);
          args.push_back(fresh);
          residue.push_back(fresh + " = " + to_string(a));
        }
      }
      std::string id = r.items.size() == 1 ? "Id" : "Id" + std::to_string(i + 1);
      std::vector<Term> hv;
      collect_vars(it.head, hv);
      std::vector<Term> fresh_vars;
      for (const auto& v : hv) {
        if (!contains(bound, v) && !contains(fresh_vars, v)) fresh_vars.push_back(v);
      }
      std::string occ = functor_of(it.pred) + "_occ_" + std::to_string(k) + "(" + join(args) +
                        (args.empty() ? "" : ",") + id + ")";
      std::string lhs = occ + " <=> " + (residue.empty() ? "" : join(residue) + " | ");
      auto with_ids = [&](std::vector<std::string> xs, const std::vector<std::string>& is) {
        xs.insert(xs.end(), is.begin(), is.end());
        return join(xs);
      };
      for (const auto& v : fresh_vars) bound.push_back(v);
      std::vector<std::string> ids_next = ids;
      ids_next.push_back(id);
      std::string len = std::to_string(i + 1);
      if (i == 0) {
        std::string kind = r.items.size() == 1 ? r.name + "_rf" : r.name + "_pf_1";
        out += lhs + kind + "(" + with_ids(names(bound), ids_next) + ")\n";
      } else {
        std::string key = r.name + "_" + std::to_string(i) + "(" + join(names(r.key_vars[i])) + ")";
        out += lhs + r.name + "_pe_" + len + "(" + with_ids(names(hv), {id}) + ",SId), " +
               "schedule_pe(" + key + ",SId)\n";
        std::vector<std::string> distinct;
        for (const auto& prev : ids) distinct.push_back(id + " \\== " + prev);
        std::string next = i + 1 == r.items.size() ? r.name + "_rf" : r.name + "_pf_" + len;
        out += "match(" + r.name + "_pf_" + std::to_string(i) + ", " + r.name + "_pe_" + len +
               ") <=> " + join(distinct) + " | " + next + "(" + with_ids(names(bound), ids_next) +
               ")\n";
      }
      if (!it.guard.empty()) {
        out += "  suspended until " + guard_text(it.guard) + "\n";
      }
      if (i + 1 < r.items.size()) {
        std::string key = r.name + "_" + std::to_string(i + 1) + "(" +
                          join(names(r.key_vars[i + 1])) + ")";
        out += r.name + "_pf_" + len + "(...) ==> schedule_pf(" + key + "," +
               to_string(r.priority) + ",SId)\n";
      }
      ids = std::move(ids_next);
    }
    std::vector<std::string> dead;
    for (std::size_t i = 0; i < r.items.size(); ++i) {
      if (!r.items[i].kept) dead.push_back(ids[i] + " = dead");
    }
    std::vector<std::string> body;
    for (const auto& b : r.body) body.push_back(to_string(b));
    out += r.name + "_rf(...) ==> schedule_rf(" + to_string(r.priority) + ",SId)\n";
    out += "fire(" + r.name + "_rf) <=> " + (dead.empty() ? "" : join(dead) + ", ") +
           (body.empty() ? "true" : join(body)) + "\n\n";
  }
  return out;
}

}  // namespace chr
