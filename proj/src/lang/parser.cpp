#include "chr/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>

namespace chr {

ParseError::ParseError(Kind k, int l, int c, const std::string& msg,
                       std::vector<std::string> exp)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " +
                         (k == Kind::Scope ? "scope error: " : "syntax error: ") +
                         msg),
      kind(k),
      line(l),
      col(c),
      detail(msg),
      expected(std::move(exp)) {}

namespace {

enum class Tok {
  Ident, Var, Int, LParen, RParen, LBrack, RBrack, Comma, Bar, End, At, Colon,
  DColon, Arrow, SimpArrow, PropArrow, Backslash, Ne, Eq, Lt, Le, Plus, Minus,
  Star, Eof
};

const char* tok_text(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Var: return "variable";
    case Tok::Int: return "integer";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Comma: return "','";
    case Tok::Bar: return "'|'";
    case Tok::End: return "'.'";
    case Tok::At: return "'@'";
    case Tok::Colon: return "':'";
    case Tok::DColon: return "'::'";
    case Tok::Arrow: return "'=>'";
    case Tok::SimpArrow: return "'<=>'";
    case Tok::PropArrow: return "'==>'";
    case Tok::Backslash: return "'\\'";
    case Tok::Ne: return "'\\='";
    case Tok::Eq: return "'='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'=<'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Eof: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    int l = line, co = col;
    auto push = [&](Tok k, std::size_t n) {
      out.push_back({k, std::string(s.substr(i, n)), l, co});
      advance(n);
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) {
        ++j;
      }
      bool var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
      push(var ? Tok::Var : Tok::Ident, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      push(Tok::Int, j - i);
      continue;
    }
    if (starts("<=>")) { push(Tok::SimpArrow, 3); continue; }
    if (starts("==>")) { push(Tok::PropArrow, 3); continue; }
    if (starts("=>")) { push(Tok::Arrow, 2); continue; }
    if (starts("=<")) { push(Tok::Le, 2); continue; }
    if (starts("\\=")) { push(Tok::Ne, 2); continue; }
    if (starts("::")) { push(Tok::DColon, 2); continue; }
    switch (c) {
      case '(': push(Tok::LParen, 1); continue;
      case ')': push(Tok::RParen, 1); continue;
      case '[': push(Tok::LBrack, 1); continue;
      case ']': push(Tok::RBrack, 1); continue;
      case ',': push(Tok::Comma, 1); continue;
      case '|': push(Tok::Bar, 1); continue;
      case '.': push(Tok::End, 1); continue;
      case '@': push(Tok::At, 1); continue;
      case ':': push(Tok::Colon, 1); continue;
      case '\\': push(Tok::Backslash, 1); continue;
      case '=': push(Tok::Eq, 1); continue;
      case '<': push(Tok::Lt, 1); continue;
      case '+': push(Tok::Plus, 1); continue;
      case '-': push(Tok::Minus, 1); continue;
      case '*': push(Tok::Star, 1); continue;
      default:
        throw ParseError(ParseError::Kind::Syntax, l, co,
                         std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::Eof, "", line, col});
  return out;
}

// A comma-list element: either a plain term or a comparison.
struct Item {
  Term term;
  std::optional<Comparison> cmp;
  int line;
  int col;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    ++pos_;
    return true;
  }
  const Token& expect(Tok k) {
    if (!at(k)) fail({tok_text(k)});
    return toks_[pos_++];
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string got = t.kind == Tok::Eof ? "end of input" : "'" + t.text + "'";
    std::string msg = "unexpected " + got + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += " or ";
      msg += expected[i];
    }
    throw ParseError(ParseError::Kind::Syntax, t.line, t.col, msg,
                     std::move(expected));
  }

  void reset_scope() { scope_.clear(); }

  Term variable(const std::string& name) {
    if (name == "_") return mk_var("_");
    auto it = scope_.find(name);
    if (it != scope_.end()) return it->second;
    Term v = mk_var(name);
    scope_.emplace(name, v);
    return v;
  }

  // expr := term (('+'|'-') term)*
  Term expr() {
    Term l = product();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      std::string op = toks_[pos_++].text;
      Term r = product();
      l = mk_compound(op, {l, r});
    }
    return l;
  }

  Term product() {
    Term l = factor();
    while (accept(Tok::Star)) l = mk_compound("*", {l, factor()});
    return l;
  }

  Term factor() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Minus: {
        ++pos_;
        if (at(Tok::Int)) return integer(true);
        return mk_compound("-", {factor()});
      }
      case Tok::Int:
        return integer(false);
      case Tok::Var:
        ++pos_;
        return variable(t.text);
      case Tok::Ident: {
        ++pos_;
        std::string name = t.text;
        if (!accept(Tok::LParen)) return mk_atom(name);
        std::vector<Term> args{expr()};
        while (accept(Tok::Comma)) args.push_back(expr());
        expect(Tok::RParen);
        return mk_compound(name, std::move(args));
      }
      case Tok::LBrack: {
        ++pos_;
        if (accept(Tok::RBrack)) return mk_atom("[]");
        std::vector<Term> items{expr()};
        while (accept(Tok::Comma)) items.push_back(expr());
        Term tail;
        if (accept(Tok::Bar)) tail = expr();
        expect(Tok::RBrack);
        return mk_list(items, tail);
      }
      case Tok::LParen: {
        ++pos_;
        Term e = expr();
        expect(Tok::RParen);
        return e;
      }
      default:
        fail({"term"});
    }
  }

  Term integer(bool negative) {
    const Token& t = expect(Tok::Int);
    std::string digits = (negative ? "-" : "") + t.text;
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc()) {
      throw ParseError(ParseError::Kind::Syntax, t.line, t.col,
                       "integer literal out of range");
    }
    return mk_int(v);
  }

  static std::optional<CmpOp> cmp_of(Tok k) {
    switch (k) {
      case Tok::Lt: return CmpOp::Lt;
      case Tok::Le: return CmpOp::Le;
      case Tok::Eq: return CmpOp::Eq;
      case Tok::Ne: return CmpOp::Ne;
      default: return std::nullopt;
    }
  }

  Item item() {
    int l = peek().line, c = peek().col;
    Term lhs = expr();
    if (auto op = cmp_of(peek().kind)) {
      ++pos_;
      Term rhs = expr();
      return {nullptr, Comparison{*op, lhs, rhs}, l, c};
    }
    return {lhs, std::nullopt, l, c};
  }

  std::vector<Item> items() {
    std::vector<Item> out{item()};
    while (accept(Tok::Comma)) out.push_back(item());
    return out;
  }

  // `goal` directive: the keyword followed by a term start or the end dot.
  bool at_goal() const {
    if (!(at(Tok::Ident) && peek().text == "goal")) return false;
    Tok n = peek(1).kind;
    return n == Tok::Ident || n == Tok::Var || n == Tok::End || n == Tok::Int ||
           n == Tok::Minus || n == Tok::LBrack;
  }

  std::size_t pos_ = 0;
  std::vector<Token> toks_;
  std::unordered_map<std::string, Term> scope_;
};

[[noreturn]] void scope_error(int line, int col, const std::string& msg) {
  throw ParseError(ParseError::Kind::Scope, line, col, msg);
}

bool is_user_atom(const Term& t) { return is_compound(t) && !is_arith(t); }

void require_user_atom(const Item& it, const char* what) {
  if (it.cmp || !is_user_atom(it.term)) {
    throw ParseError(ParseError::Kind::Syntax, it.line, it.col,
                     std::string("expected ") + what);
  }
}

bool contains_arith_term(const Term& t) {
  if (!is_compound(t)) return false;
  if (is_arith(t)) return true;
  for (const auto& a : t->args) {
    if (contains_arith_term(a)) return true;
  }
  return false;
}

bool subset(const std::vector<Term>& vs, const std::vector<Term>& bound) {
  for (const auto& v : vs) {
    bool found = false;
    for (const auto& b : bound) found = found || b->value == v->value;
    if (!found) return false;
  }
  return true;
}

void check_la_at(const LARule& r, int line, int col) {
  std::vector<Term> bound;
  for (const auto& a : r.antecedents) {
    if (a.is_user()) {
      if (contains_arith_term(a.atom)) {
        scope_error(line, col, "rule " + r.name +
                                   ": arithmetic inside an antecedent atom");
      }
      collect_vars(a.atom, bound);
      continue;
    }
    std::vector<Term> cv;
    collect_vars(a.cmp, cv);
    for (const auto& v : cv) {
      if (!subset({v}, bound)) {
        scope_error(line, col, "rule " + r.name + ": variable " + v->name +
                                   " in comparison " + to_string(a.cmp) +
                                   " does not appear in an earlier antecedent");
      }
    }
  }
  std::vector<Term> pv = vars_of(r.priority);
  if (!subset(pv, bound)) {
    scope_error(line, col,
                "rule " + r.name + ": priority variables must appear in antecedents");
  }
  for (const auto& c : r.conclusions) {
    std::vector<Term> cv = vars_of(c.atom);
    for (const auto& v : cv) {
      if (!subset({v}, bound)) {
        scope_error(line, col, "rule " + r.name + ": conclusion variable " +
                                   v->name + " does not appear in antecedents");
      }
    }
  }
}

void check_chr_at(const ChrRule& r, int line, int col) {
  std::vector<Term> hv;
  for (const auto& h : r.heads()) {
    if (contains_arith_term(h)) {
      scope_error(line, col, "rule " + r.name + ": arithmetic inside a head");
    }
    collect_vars(h, hv);
  }
  if (r.kept.empty() && r.removed.empty()) {
    scope_error(line, col, "rule " + r.name + ": no heads");
  }
  for (const auto& v : vars_of(r.priority)) {
    if (!subset({v}, hv)) {
      scope_error(line, col, "rule " + r.name + ": priority variable " + v->name +
                                 " does not appear in the heads");
    }
  }
  for (const auto& g : r.guard) {
    std::vector<Term> gv;
    collect_vars(g, gv);
    for (const auto& v : gv) {
      if (!subset({v}, hv)) {
        scope_error(line, col, "rule " + r.name + ": guard variable " + v->name +
                                   " does not appear in the heads");
      }
    }
  }
}

LAConclusion la_conclusion(const Item& it) {
  require_user_atom(it, "an atom or del(atom)");
  if (it.term->name == "del" && it.term->args.size() == 1) {
    if (!is_user_atom(it.term->args[0])) {
      throw ParseError(ParseError::Kind::Syntax, it.line, it.col,
                       "del/1 must wrap a user atom");
    }
    return {true, it.term->args[0]};
  }
  return {false, it.term};
}

bool is_true(const Item& it) {
  return !it.cmp && is_atom(it.term) && it.term->name == "true";
}

}  // namespace

void check_la_rule(const LARule& r) { check_la_at(r, 0, 0); }
void check_chr_rule(const ChrRule& r) { check_chr_at(r, 0, 0); }

LASource parse_la(std::string_view text) {
  Parser p(text);
  LASource out;
  while (!p.at(Tok::Eof)) {
    p.reset_scope();
    if (p.at_goal()) {
      ++p.pos_;
      if (!p.at(Tok::End)) {
        for (const auto& it : p.items()) {
          LAConclusion c = la_conclusion(it);
          if (!c.atom->ground) {
            throw ParseError(ParseError::Kind::Scope, it.line, it.col,
                             "goal assertions must be ground");
          }
          out.goal.push_back({c.del, normalize_arith(c.atom)});
        }
      }
      p.expect(Tok::End);
      continue;
    }
    int line = p.peek().line, col = p.peek().col;
    LARule r;
    r.name = p.expect(Tok::Ident).text;
    p.expect(Tok::At);
    r.priority = p.expr();
    p.expect(Tok::Colon);
    for (const auto& it : p.items()) {
      if (it.cmp) {
        r.antecedents.push_back(LAAntecedent::compare(*it.cmp));
        continue;
      }
      LAConclusion a = la_conclusion(it);
      r.antecedents.push_back(a.del ? LAAntecedent::negative(a.atom)
                                    : LAAntecedent::positive(a.atom));
    }
    p.expect(Tok::Arrow);
    for (const auto& it : p.items()) {
      if (is_true(it)) continue;
      r.conclusions.push_back(la_conclusion(it));
    }
    p.expect(Tok::End);
    check_la_at(r, line, col);
    out.program.rules.push_back(std::move(r));
  }
  return out;
}

ChrSource parse_chrrp(std::string_view text) {
  Parser p(text);
  ChrSource out;
  auto body_items = [&](const std::vector<Item>& items) {
    std::vector<BodyItem> body;
    for (const auto& it : items) {
      if (is_true(it)) continue;
      if (it.cmp) {
        if (it.cmp->op != CmpOp::Eq) {
          throw ParseError(ParseError::Kind::Syntax, it.line, it.col,
                           "only '=' tells are allowed in a body or goal");
        }
        body.push_back(BodyItem::tell(it.cmp->lhs, it.cmp->rhs));
        continue;
      }
      require_user_atom(it, "a constraint");
      body.push_back(BodyItem::user(it.term));
    }
    return body;
  };
  while (!p.at(Tok::Eof)) {
    p.reset_scope();
    if (p.at_goal()) {
      ++p.pos_;
      if (!p.at(Tok::End)) {
        for (auto& g : body_items(p.items())) {
          if (g.kind == BodyItem::Kind::Atom) g.atom = normalize_arith(g.atom);
          out.goal.push_back(std::move(g));
        }
      }
      p.expect(Tok::End);
      continue;
    }
    int line = p.peek().line, col = p.peek().col;
    ChrRule r;
    r.priority = mk_int(1);
    // optional "p ::" and "name @"
    std::size_t save = p.pos_;
    {
      int depth = 0;
      std::size_t k = p.pos_;
      bool has_prio = false;
      for (; k < p.toks_.size(); ++k) {
        Tok t = p.toks_[k].kind;
        if (t == Tok::LParen || t == Tok::LBrack) ++depth;
        if (t == Tok::RParen || t == Tok::RBrack) --depth;
        if (depth == 0 && t == Tok::DColon) has_prio = true;
        if (t == Tok::End || t == Tok::Eof || t == Tok::SimpArrow ||
            t == Tok::PropArrow || t == Tok::At || has_prio) {
          break;
        }
      }
      p.pos_ = save;
      if (has_prio) {
        r.priority = p.expr();
        p.expect(Tok::DColon);
      }
    }
    if (p.at(Tok::Ident) && p.peek(1).kind == Tok::At) {
      r.name = p.peek().text;
      p.pos_ += 2;
    } else {
      r.name = "rule" + std::to_string(out.program.rules.size() + 1);
    }
    std::vector<Item> first = p.items();
    std::vector<Item> second;
    bool simpagation = false;
    if (p.accept(Tok::Backslash)) {
      simpagation = true;
      second = p.items();
    }
    bool prop = false;
    if (p.accept(Tok::PropArrow)) {
      prop = true;
    } else if (!p.accept(Tok::SimpArrow)) {
      p.fail({"'<=>'", "'==>'", "'\\'", "','"});
    }
    if (prop && simpagation) {
      p.fail({"'<=>' after '\\'"});
    }
    for (const auto& it : first) require_user_atom(it, "a head constraint");
    for (const auto& it : second) require_user_atom(it, "a head constraint");
    for (const auto& it : first) {
      (prop || simpagation ? r.kept : r.removed).push_back(it.term);
    }
    for (const auto& it : second) r.removed.push_back(it.term);
    std::vector<Item> rhs = p.items();
    if (p.accept(Tok::Bar)) {
      for (const auto& it : rhs) {
        if (is_true(it)) continue;
        if (!it.cmp) {
          throw ParseError(ParseError::Kind::Syntax, it.line, it.col,
                           "guard must consist of comparisons");
        }
        r.guard.push_back(*it.cmp);
      }
      rhs = p.items();
    }
    r.body = body_items(rhs);
    p.expect(Tok::End);
    check_chr_at(r, line, col);
    out.program.rules.push_back(std::move(r));
  }
  return out;
}

Term parse_term(std::string_view text) {
  Parser p(text);
  Term t = p.expr();
  if (!p.at(Tok::Eof)) p.fail({"end of input"});
  return t;
}

}  // namespace chr
