#include "lharv/textio.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace lharv {

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

std::vector<Token> lex(const std::string& text, const std::string& filename,
                       DiagnosticSink& diags, bool& ok) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  ok = true;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    std::size_t start = i;
    SourceSpan sp{filename, line, col, 1};
    if (ident_start(c)) {
      ++i;
      while (i < text.size() && ident_char(text[i])) ++i;
      while (i + 1 < text.size() && text[i] == '.' && ident_start(text[i + 1])) {
        i += 2;
        while (i < text.size() && ident_char(text[i])) ++i;
      }
      sp.length = i - start;
      out.push_back({Tok::Ident, text.substr(start, i - start), sp});
      col += i - start;
      continue;
    }
    if (digit(c)) {
      ++i;
      while (i < text.size() && digit(text[i])) ++i;
      if (i + 1 < text.size() && (text[i] == '.' || text[i] == '/') &&
          digit(text[i + 1])) {
        i += 2;
        while (i < text.size() && digit(text[i])) ++i;
      }
      sp.length = i - start;
      out.push_back({Tok::Number, text.substr(start, i - start), sp});
      col += i - start;
      continue;
    }
    if (i + 1 < text.size()) {
      char d = text[i + 1];
      if ((c == '<' && d == '=') || (c == '>' && d == '=') ||
          (c == '-' && d == '>')) {
        sp.length = 2;
        out.push_back({Tok::Punct, text.substr(i, 2), sp});
        i += 2;
        col += 2;
        continue;
      }
    }
    if (std::strchr("{}[](),;:=<>-+*@|", c) != nullptr) {
      out.push_back({Tok::Punct, std::string(1, c), sp});
      ++i;
      ++col;
      continue;
    }
    diags.error(sp, std::string("unexpected character '") + c + "'");
    ok = false;
    break;
  }
  out.push_back({Tok::End, "", SourceSpan{filename, line, col, 1}});
  return out;
}

class Cursor {
 public:
  Cursor(std::vector<Token> toks, DiagnosticSink& diags)
      : toks_(std::move(toks)), diags_(diags) {}

  const Token& peek(std::size_t k = 0) const {
    std::size_t j = i_ + k;
    return j < toks_.size() ? toks_[j] : toks_.back();
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool at(const char* text) const {
    return peek().kind != Tok::End && peek().text == text;
  }
  bool at_kw(const char* kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }
  Token take() {
    Token t = peek();
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  bool accept(const char* text) {
    if (at(text)) {
      take();
      return true;
    }
    return false;
  }
  bool accept_kw(const char* kw) {
    if (at_kw(kw)) {
      take();
      return true;
    }
    return false;
  }
  bool expect(const char* text) {
    if (accept(text)) return true;
    fail(std::string("expected '") + text + "'");
    return false;
  }
  std::optional<Token> expect_ident(const char* what) {
    if (peek().kind == Tok::Ident) return take();
    fail(std::string("expected ") + what);
    return std::nullopt;
  }
  void fail(const std::string& msg) { fail_at(peek().span, msg + found()); }
  void fail_at(const SourceSpan& where, const std::string& msg) {
    if (!failed_) {
      diags_.error(where, msg);
      failed_ = true;
    }
  }
  bool failed() const { return failed_; }

 private:
  std::string found() const {
    if (peek().kind == Tok::End) return ", found end of input";
    return ", found '" + peek().text + "'";
  }

  std::vector<Token> toks_;
  DiagnosticSink& diags_;
  std::size_t i_ = 0;
  bool failed_ = false;
};

std::optional<Rat> parse_number(Cursor& cur) {
  bool neg = cur.accept("-");
  if (cur.peek().kind != Tok::Number) {
    cur.fail("expected number");
    return std::nullopt;
  }
  Token t = cur.take();
  std::optional<Rat> r = parse_rat(t.text);
  if (!r) {
    cur.fail_at(t.span, "malformed number '" + t.text + "'");
    return std::nullopt;
  }
  return neg ? Rat(-*r) : *r;
}

bool adjacent(const Token& a, const Token& b) {
  return a.span.line == b.span.line &&
         a.span.column + a.span.length == b.span.column;
}

std::optional<LinearExpression> parse_expr(Cursor& cur) {
  LinearExpression e;
  Rat sign = 1;
  if (cur.accept("-"))
    sign = -1;
  else
    cur.accept("+");
  while (true) {
    if (cur.peek().kind == Tok::Number) {
      Token num = cur.take();
      std::optional<Rat> c = parse_rat(num.text);
      if (!c) {
        cur.fail_at(num.span, "malformed number '" + num.text + "'");
        return std::nullopt;
      }
      if (cur.accept("*")) {
        std::optional<Token> v = cur.expect_ident("variable after '*'");
        if (!v) return std::nullopt;
        e.add_term(v->text, sign * *c);
      } else if (cur.peek().kind == Tok::Ident && adjacent(num, cur.peek())) {
        e.add_term(cur.take().text, sign * *c);
      } else {
        e.constant += sign * *c;
      }
    } else if (cur.peek().kind == Tok::Ident) {
      e.add_term(cur.take().text, sign);
    } else {
      cur.fail("expected term");
      return std::nullopt;
    }
    if (cur.accept("+"))
      sign = 1;
    else if (cur.accept("-"))
      sign = -1;
    else
      break;
  }
  return e;
}

std::optional<Constraint> parse_constraint(Cursor& cur) {
  std::optional<LinearExpression> l = parse_expr(cur);
  if (!l) return std::nullopt;
  Relation rel;
  if (cur.accept("<="))
    rel = Relation::LE;
  else if (cur.accept(">="))
    rel = Relation::GE;
  else if (cur.accept("<"))
    rel = Relation::LT;
  else if (cur.accept(">"))
    rel = Relation::GT;
  else if (cur.accept("="))
    rel = Relation::EQ;
  else {
    cur.fail("expected comparison");
    return std::nullopt;
  }
  std::optional<LinearExpression> r = parse_expr(cur);
  if (!r) return std::nullopt;

  Constraint c;
  c.rel = rel;
  c.lhs = *l;
  for (const auto& [v, k] : r->terms) c.lhs.add_term(v, -k);
  c.rhs = r->constant - l->constant;
  c.lhs.constant = 0;
  return c;
}

bool parse_ident_list(Cursor& cur, std::vector<std::string>& out,
                      const char* what) {
  do {
    std::optional<Token> t = cur.expect_ident(what);
    if (!t) return false;
    out.push_back(t->text);
  } while (cur.accept(","));
  return cur.expect(";");
}

bool parse_loc_block(Cursor& cur, Automaton& a) {
  std::optional<Token> name = cur.expect_ident("location name");
  if (!name) return false;
  if (a.find_location(name->text)) {
    cur.fail_at(name->span, "duplicate location '" + name->text + "'");
    return false;
  }
  Location L;
  L.name = name->text;
  if (!cur.expect("{")) return false;
  while (!cur.accept("}")) {
    if (cur.at_end() || cur.failed()) {
      cur.fail("expected '}'");
      return false;
    }
    if (cur.accept_kw("flow")) {
      std::optional<Token> v = cur.expect_ident("variable");
      if (!v) return false;
      if (!cur.accept_kw("in")) {
        cur.fail("expected 'in'");
        return false;
      }
      if (!cur.expect("[")) return false;
      std::optional<Rat> lo = parse_number(cur);
      if (!lo) return false;
      if (!cur.expect(",")) return false;
      std::optional<Rat> hi = parse_number(cur);
      if (!hi) return false;
      if (!cur.expect("]") || !cur.expect(";")) return false;
      if (L.flow.count(v->text)) {
        cur.fail_at(v->span, "duplicate flow for '" + v->text + "'");
        return false;
      }
      L.flow[v->text] = {*lo, *hi};
    } else if (cur.accept_kw("inv")) {
      std::optional<Constraint> c = parse_constraint(cur);
      if (!c || !cur.expect(";")) return false;
      L.invariant.push_back(std::move(*c));
    } else {
      cur.fail("expected 'flow' or 'inv'");
      return false;
    }
  }
  a.locations.push_back(std::move(L));
  return true;
}

bool parse_init_block(Cursor& cur, Automaton& a) {
  std::optional<Token> name = cur.expect_ident("location name");
  if (!name) return false;
  Location* L = nullptr;
  for (Location& cand : a.locations)
    if (cand.name == name->text) L = &cand;
  if (L == nullptr) {
    cur.fail_at(name->span, "init names unknown location '" + name->text + "'");
    return false;
  }
  for (const std::string& other : a.initial_locations)
    if (other == name->text) {
      cur.fail_at(name->span, "duplicate init block for '" + name->text + "'");
      return false;
    }
  a.initial_locations.push_back(name->text);
  if (!cur.expect("{")) return false;
  while (!cur.accept("}")) {
    if (cur.at_end() || cur.failed()) {
      cur.fail("expected '}'");
      return false;
    }
    std::optional<Token> v = cur.expect_ident("variable");
    if (!v || !cur.expect("=")) return false;
    std::optional<Rat> val = parse_number(cur);
    if (!val || !cur.expect(";")) return false;
    if (L->initial_conditions.count(v->text)) {
      cur.fail_at(v->span, "duplicate initial value for '" + v->text + "'");
      return false;
    }
    L->initial_conditions[v->text] = *val;
  }
  return true;
}

bool parse_trans_block(Cursor& cur, Automaton& a) {
  std::optional<Token> from = cur.expect_ident("source location");
  if (!from || !cur.expect("-")) return false;
  std::optional<Token> label = cur.expect_ident("label");
  if (!label || !cur.expect("->")) return false;
  std::optional<Token> to = cur.expect_ident("target location");
  if (!to) return false;

  Transition tr;
  tr.label = label->text;
  tr.from = from->text;
  tr.to = to->text;
  if (!cur.accept(";")) {
    if (!cur.expect("{")) return false;
    while (!cur.accept("}")) {
      if (cur.at_end() || cur.failed()) {
        cur.fail("expected '}'");
        return false;
      }
      if (cur.accept_kw("guard")) {
        std::optional<Constraint> c = parse_constraint(cur);
        if (!c || !cur.expect(";")) return false;
        tr.guard.push_back(std::move(*c));
      } else if (cur.accept_kw("reset")) {
        std::optional<Token> v = cur.expect_ident("variable");
        if (!v || !cur.expect("=")) return false;
        std::optional<LinearExpression> e = parse_expr(cur);
        if (!e || !cur.expect(";")) return false;
        if (tr.reset.count(v->text)) {
          cur.fail_at(v->span, "duplicate reset for '" + v->text + "'");
          return false;
        }
        tr.reset[v->text] = std::move(*e);
      } else {
        cur.fail("expected 'guard' or 'reset'");
        return false;
      }
    }
  }
  a.transitions.push_back(std::move(tr));
  return true;
}

void append_signed(std::ostringstream& os, const Rat& coeff, bool& first,
                   const std::string& body) {
  Rat mag = coeff < 0 ? Rat(-coeff) : coeff;
  if (first) {
    if (coeff < 0) os << "-";
    first = false;
  } else {
    os << (coeff < 0 ? " - " : " + ");
  }
  if (body.empty()) {
    os << rat_str(mag);
  } else {
    if (mag != 1) os << rat_str(mag) << "*";
    os << body;
  }
}

std::string expr_str(const LinearExpression& e) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, k] : e.terms) append_signed(os, k, first, v);
  if (e.constant != 0 || first) append_signed(os, e.constant, first, "");
  return os.str();
}

std::string terms_str(const std::map<std::string, Rat>& terms) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, k] : terms) append_signed(os, k, first, v);
  return os.str();
}

std::string join(const std::vector<std::string>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ", ";
    os << xs[i];
  }
  return os.str();
}

}  // namespace

std::optional<Network> parse_network(const std::string& text,
                                     const std::string& filename,
                                     DiagnosticSink& diags) {
  bool ok = false;
  std::vector<Token> toks = lex(text, filename, diags, ok);
  if (!ok) return std::nullopt;
  Cursor cur(std::move(toks), diags);

  Network net;
  while (!cur.at_end()) {
    if (!cur.accept_kw("automaton")) {
      cur.fail("expected 'automaton'");
      return std::nullopt;
    }
    std::optional<Token> name = cur.expect_ident("automaton name");
    if (!name) return std::nullopt;
    Automaton a;
    a.name = name->text;
    if (!cur.expect("{")) return std::nullopt;
    while (!cur.accept("}")) {
      if (cur.at_end() || cur.failed()) {
        cur.fail("expected '}'");
        return std::nullopt;
      }
      bool fine = true;
      if (cur.accept_kw("var")) {
        fine = parse_ident_list(cur, a.locals, "variable name");
      } else if (cur.accept_kw("read")) {
        fine = parse_ident_list(cur, a.reads, "variable name");
      } else if (cur.accept_kw("local")) {
        if (!cur.accept_kw("label")) {
          cur.fail("expected 'label'");
          return std::nullopt;
        }
        fine = parse_ident_list(cur, a.local_labels, "label name");
      } else if (cur.accept_kw("shared")) {
        if (!cur.accept_kw("label")) {
          cur.fail("expected 'label'");
          return std::nullopt;
        }
        fine = parse_ident_list(cur, a.shared_labels, "label name");
      } else if (cur.accept_kw("loc")) {
        fine = parse_loc_block(cur, a);
      } else if (cur.accept_kw("init")) {
        fine = parse_init_block(cur, a);
      } else if (cur.accept_kw("trans")) {
        fine = parse_trans_block(cur, a);
      } else {
        cur.fail("expected a declaration");
        return std::nullopt;
      }
      if (!fine) return std::nullopt;
    }
    net.automata.push_back(std::move(a));
  }
  if (!validate_network(net, diags)) return std::nullopt;
  return net;
}

std::optional<PathSet> parse_pathset(const std::string& text,
                                     const std::string& filename,
                                     const Network& net,
                                     DiagnosticSink& diags) {
  bool ok = false;
  std::vector<Token> toks = lex(text, filename, diags, ok);
  if (!ok) return std::nullopt;
  Cursor cur(std::move(toks), diags);

  std::vector<Path> parsed;
  while (!cur.at_end()) {
    std::optional<Token> name = cur.expect_ident("component name");
    if (!name || !cur.expect(":")) return std::nullopt;
    const Automaton* a = net.find_automaton(name->text);
    if (a == nullptr) {
      cur.fail_at(name->span, "unknown component '" + name->text + "'");
      return std::nullopt;
    }
    std::optional<Token> loc = cur.expect_ident("location");
    if (!loc) return std::nullopt;
    if (!a->find_location(loc->text)) {
      cur.fail_at(loc->span, "unknown location '" + loc->text + "' in '" +
                                 a->name + "'");
      return std::nullopt;
    }
    Path p;
    p.automaton = a->name;
    p.locations.push_back(loc->text);
    while (cur.at("-")) {
      cur.take();
      std::optional<Token> label = cur.expect_ident("label");
      if (!label || !cur.expect("->")) return std::nullopt;
      std::optional<Token> next = cur.expect_ident("location");
      if (!next) return std::nullopt;
      std::size_t idx = Network::npos;
      for (std::size_t k = 0; k < a->transitions.size(); ++k) {
        const Transition& tr = a->transitions[k];
        if (tr.from == p.locations.back() && tr.label == label->text &&
            tr.to == next->text) {
          idx = k;
          break;
        }
      }
      if (idx == Network::npos) {
        cur.fail_at(label->span, "no transition '" + label->text + "' from '" +
                                     p.locations.back() + "' to '" +
                                     next->text + "' in '" + a->name + "'");
        return std::nullopt;
      }
      p.transitions.push_back(idx);
      p.locations.push_back(next->text);
    }
    cur.accept(";");
    parsed.push_back(std::move(p));
  }

  PathSet ps;
  bool complete = true;
  for (const Automaton& a : net.automata) {
    const Path* found = nullptr;
    std::size_t copies = 0;
    for (const Path& p : parsed)
      if (p.automaton == a.name) {
        found = &p;
        ++copies;
      }
    if (copies == 0) {
      diags.error({filename, 1, 1},
                  "missing path for component '" + a.name + "'");
      complete = false;
    } else if (copies > 1) {
      diags.error({filename, 1, 1},
                  "multiple paths for component '" + a.name + "'");
      complete = false;
    } else {
      ps.paths.push_back(*found);
    }
  }
  if (!complete) return std::nullopt;
  if (!validate_pathset(net, ps, diags)) return std::nullopt;
  return ps;
}

std::optional<ReachSpec> parse_spec(const std::string& text,
                                    const std::string& filename,
                                    const Network& net, DiagnosticSink& diags) {
  bool ok = false;
  std::vector<Token> toks = lex(text, filename, diags, ok);
  if (!ok) return std::nullopt;
  Cursor cur(std::move(toks), diags);

  ReachSpec spec;
  bool sound = true;

  auto add_target = [&](const Token& t) {
    std::string comp, loc;
    bool resolved = false;
    for (std::size_t pos = t.text.find('.'); pos != std::string::npos;
         pos = t.text.find('.', pos + 1)) {
      const Automaton* a = net.find_automaton(t.text.substr(0, pos));
      if (a && a->find_location(t.text.substr(pos + 1))) {
        comp = a->name;
        loc = t.text.substr(pos + 1);
        resolved = true;
        break;
      }
    }
    if (!resolved && t.text.find('.') == std::string::npos) {
      for (const Automaton& a : net.automata)
        if (a.find_location(t.text)) {
          if (resolved) {
            diags.error(t.span, "ambiguous target location '" + t.text +
                                    "'; qualify with the component name");
            sound = false;
            return;
          }
          comp = a.name;
          loc = t.text;
          resolved = true;
        }
    }
    if (!resolved) {
      diags.error(t.span, "unknown target location '" + t.text + "'");
      sound = false;
      return;
    }
    auto it = spec.targets.find(comp);
    if (it != spec.targets.end() && it->second != loc) {
      diags.error(t.span, "conflicting targets for component '" + comp + "'");
      sound = false;
      return;
    }
    spec.targets[comp] = loc;
  };

  auto parse_targets = [&]() {
    bool paren = cur.accept("(");
    do {
      std::optional<Token> t = cur.expect_ident("target location");
      if (!t) return false;
      add_target(*t);
    } while (cur.accept(","));
    if (paren && !cur.expect(")")) return false;
    return true;
  };
  auto parse_rows = [&]() {
    do {
      std::optional<Constraint> c = parse_constraint(cur);
      if (!c) return false;
      for (const auto& [v, k] : c->lhs.terms)
        if (owner_of(net, v) == Network::npos) {
          diags.error({filename, 1, 1},
                      "condition names unknown variable '" + v + "'");
          sound = false;
        }
      spec.rows.push_back(std::move(*c));
    } while (cur.accept(","));
    return true;
  };

  while (!cur.at_end()) {
    if (cur.accept_kw("at")) {
      if (!parse_targets()) return std::nullopt;
      if (cur.accept_kw("assert") && !parse_rows()) return std::nullopt;
    } else if (cur.accept_kw("assert")) {
      if (!parse_rows()) return std::nullopt;
      if (cur.accept_kw("at") && !parse_targets()) return std::nullopt;
    } else {
      cur.fail("expected 'at' or 'assert'");
      return std::nullopt;
    }
    if (cur.failed()) return std::nullopt;
  }
  if (!sound) return std::nullopt;
  return spec;
}

std::optional<Witness> parse_witness(const std::string& text,
                                     const std::string& filename,
                                     DiagnosticSink& diags) {
  bool ok = false;
  std::vector<Token> toks = lex(text, filename, diags, ok);
  if (!ok) return std::nullopt;
  Cursor cur(std::move(toks), diags);

  if (!cur.accept_kw("witness")) {
    cur.fail("expected 'witness'");
    return std::nullopt;
  }
  if (!cur.expect("{")) return std::nullopt;

  Witness w;
  while (!cur.accept("}")) {
    if (cur.at_end() || cur.failed()) {
      cur.fail("expected '}'");
      return std::nullopt;
    }
    if (cur.accept_kw("component")) {
      std::optional<Token> name = cur.expect_ident("component name");
      if (!name || !cur.expect("{")) return std::nullopt;
      WitnessComponent comp;
      comp.automaton = name->text;
      while (!cur.accept("}")) {
        if (cur.at_end() || cur.failed()) {
          cur.fail("expected '}'");
          return std::nullopt;
        }
        if (!cur.accept_kw("at")) {
          cur.fail("expected 'at'");
          return std::nullopt;
        }
        std::optional<Token> loc = cur.expect_ident("location");
        if (!loc) return std::nullopt;
        if (!cur.accept_kw("dwell")) {
          cur.fail("expected 'dwell'");
          return std::nullopt;
        }
        std::optional<Rat> d = parse_number(cur);
        if (!d || !cur.expect("{")) return std::nullopt;
        WitnessStep step;
        step.location = loc->text;
        step.dwell = *d;
        while (!cur.accept("}")) {
          if (cur.at_end() || cur.failed()) {
            cur.fail("expected '}'");
            return std::nullopt;
          }
          std::optional<Token> v = cur.expect_ident("variable");
          if (!v || !cur.expect(":")) return std::nullopt;
          std::optional<Rat> in = parse_number(cur);
          if (!in || !cur.expect("->")) return std::nullopt;
          std::optional<Rat> out = parse_number(cur);
          if (!out) return std::nullopt;
          step.entry[v->text] = *in;
          step.exit[v->text] = *out;
        }
        comp.steps.push_back(std::move(step));
      }
      w.components.push_back(std::move(comp));
    } else if (cur.accept_kw("sync")) {
      std::optional<Token> label = cur.expect_ident("label");
      if (!label) return std::nullopt;
      if (cur.peek().kind != Tok::Number) {
        cur.fail("expected occurrence index");
        return std::nullopt;
      }
      cur.take();
      if (!cur.expect("@")) return std::nullopt;
      std::optional<Rat> at = parse_number(cur);
      if (!at) return std::nullopt;
      w.sync_times.push_back(*at);
    } else {
      cur.fail("expected 'component' or 'sync'");
      return std::nullopt;
    }
  }
  return w;
}

std::string serialize_network(const Network& net) {
  std::ostringstream os;
  for (const Automaton& a : net.automata) {
    os << "automaton " << a.name << " {\n";
    if (!a.locals.empty()) os << "  var " << join(a.locals) << ";\n";
    if (!a.reads.empty()) os << "  read " << join(a.reads) << ";\n";
    if (!a.local_labels.empty())
      os << "  local label " << join(a.local_labels) << ";\n";
    if (!a.shared_labels.empty())
      os << "  shared label " << join(a.shared_labels) << ";\n";
    for (const Location& L : a.locations) {
      os << "  loc " << L.name << " {\n";
      for (const auto& [v, fr] : L.flow)
        os << "    flow " << v << " in [" << rat_str(fr.lo) << ", "
           << rat_str(fr.hi) << "];\n";
      for (const Constraint& c : L.invariant)
        os << "    inv " << constraint_str(c) << ";\n";
      os << "  }\n";
    }
    for (const std::string& init : a.initial_locations) {
      const Location* L = a.find_location(init);
      os << "  init " << init << " {\n";
      if (L != nullptr)
        for (const auto& [v, val] : L->initial_conditions)
          os << "    " << v << " = " << rat_str(val) << ";\n";
      os << "  }\n";
    }
    for (const Transition& tr : a.transitions) {
      os << "  trans " << tr.from << " -" << tr.label << "-> " << tr.to;
      if (tr.guard.empty() && tr.reset.empty()) {
        os << ";\n";
      } else {
        os << " {\n";
        for (const Constraint& c : tr.guard)
          os << "    guard " << constraint_str(c) << ";\n";
        for (const auto& [v, e] : tr.reset)
          os << "    reset " << v << " = " << expr_str(e) << ";\n";
        os << "  }\n";
      }
    }
    os << "}\n";
  }
  return os.str();
}

std::string serialize_pathset(const Network& net, const PathSet& ps) {
  std::ostringstream os;
  for (const Path& p : ps.paths) {
    const Automaton* a = net.find_automaton(p.automaton);
    if (a == nullptr) throw InternalError("path names unknown component");
    os << p.automaton << ": " << p.locations[0];
    for (std::size_t i = 0; i < p.transitions.size(); ++i)
      os << " -" << a->transitions[p.transitions[i]].label << "-> "
         << p.locations[i + 1];
    os << ";\n";
  }
  return os.str();
}

std::string serialize_spec(const ReachSpec& spec) {
  std::ostringstream os;
  if (spec.targets.empty() && spec.rows.empty()) return "";
  if (!spec.targets.empty()) {
    os << "at (";
    bool first = true;
    for (const auto& [comp, loc] : spec.targets) {
      if (!first) os << ", ";
      first = false;
      os << comp << "." << loc;
    }
    os << ")";
    if (!spec.rows.empty()) os << " assert ";
  } else {
    os << "assert ";
  }
  for (std::size_t i = 0; i < spec.rows.size(); ++i) {
    if (i) os << ", ";
    os << constraint_str(spec.rows[i]);
  }
  os << "\n";
  return os.str();
}

std::string emit_witness(const Witness& w, const SyncSkeleton& skel) {
  if (w.sync_times.size() != skel.events.size())
    throw InternalError("witness does not match the skeleton");
  std::ostringstream os;
  os << "witness {\n";
  for (const WitnessComponent& comp : w.components) {
    os << "  component " << comp.automaton << " {\n";
    for (const WitnessStep& step : comp.steps) {
      os << "    at " << step.location << " dwell " << rat_str(step.dwell)
         << " {\n";
      for (const auto& [v, in] : step.entry) {
        auto out = step.exit.find(v);
        os << "      " << v << ": " << rat_str(in) << " -> "
           << (out == step.exit.end() ? std::string("0") : rat_str(out->second))
           << "\n";
      }
      os << "    }\n";
    }
    os << "  }\n";
  }
  for (std::size_t e = 0; e < skel.events.size(); ++e)
    os << "  sync " << skel.events[e].label << " " << skel.events[e].occurrence
       << " @ " << rat_str(w.sync_times[e]) << "\n";
  os << "}\n";
  return os.str();
}

std::string constraint_str(const Constraint& c) {
  return terms_str(c.lhs.terms) + " " + relation_str(c.rel) + " " +
         rat_str(c.rhs);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> fields_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string f;
  while (is >> f) out.push_back(f);
  return out;
}

}  // namespace

std::optional<CycleRecord> parse_cycle_record(const std::string& line,
                                              std::size_t lineno,
                                              const std::string& filename,
                                              DiagnosticSink& diags) {
  SourceSpan here{filename, lineno, 1, 1};
  auto bad = [&](const std::string& msg) {
    diags.error(here, msg);
    return std::nullopt;
  };

  std::string clean = line;
  while (!clean.empty() && (clean.back() == '\r' || clean.back() == '\n'))
    clean.pop_back();
  std::vector<std::string> segs = split(clean, '|');
  if (segs.empty()) return bad("empty record");

  auto keyvals = [&](const std::string& seg,
                     std::map<std::string, std::string>& kv) {
    for (const std::string& f : fields_of(seg)) {
      std::size_t eq = f.find('=');
      if (eq == std::string::npos || eq == 0)
        return "malformed field '" + f + "'";
      std::string key = f.substr(0, eq);
      if (kv.count(key)) return "duplicate field '" + key + "'";
      kv[key] = f.substr(eq + 1);
    }
    return std::string();
  };

  CycleRecord rec;
  {
    std::map<std::string, std::string> kv;
    std::string err = keyvals(segs[0], kv);
    if (!err.empty()) return bad(err);
    if (kv.size() != 2 || !kv.count("cycle") || !kv.count("ts"))
      return bad("record head needs exactly 'cycle' and 'ts'");
    const std::string& cyc = kv["cycle"];
    auto [ptr, ec] = std::from_chars(cyc.data(), cyc.data() + cyc.size(),
                                     rec.cycle);
    if (ec != std::errc() || ptr != cyc.data() + cyc.size())
      return bad("malformed cycle index '" + cyc + "'");
    std::optional<Rat> ts = parse_rat(kv["ts"]);
    if (!ts) return bad("malformed timestamp '" + kv["ts"] + "'");
    rec.ts = *ts;
  }

  for (std::size_t s = 1; s < segs.size(); ++s) {
    std::map<std::string, std::string> kv;
    std::string err = keyvals(segs[s], kv);
    if (!err.empty()) return bad(err);
    static const char* keys[] = {"id", "x0", "cur", "new", "ma", "sbd", "rsd"};
    for (const char* k : keys)
      if (!kv.count(k)) return bad(std::string("missing field '") + k + "'");
    if (kv.size() != 7)
      for (const auto& [k, v] : kv) {
        bool known = false;
        for (const char* good : keys) known = known || k == good;
        if (!known) return bad("unknown field '" + k + "'");
      }

    TrainParams p;
    {
      const std::string& id = kv["id"];
      auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), p.id);
      if (ec != std::errc() || ptr != id.data() + id.size())
        return bad("malformed train id '" + id + "'");
    }
    auto rat_field = [&](const char* k, Rat& out) {
      std::optional<Rat> r = parse_rat(kv[k]);
      if (!r) return false;
      out = *r;
      return true;
    };
    auto band_field = [&](const char* k, Rat& lo, Rat& hi) {
      std::vector<std::string> parts = split(kv[k], ':');
      if (parts.size() != 2) return false;
      std::optional<Rat> a = parse_rat(parts[0]);
      std::optional<Rat> b = parse_rat(parts[1]);
      if (!a || !b) return false;
      lo = *a;
      hi = *b;
      return true;
    };
    if (!rat_field("x0", p.x0)) return bad("malformed field 'x0'");
    if (!band_field("cur", p.cur_lo, p.cur_hi))
      return bad("malformed field 'cur'");
    if (!band_field("new", p.new_lo, p.new_hi))
      return bad("malformed field 'new'");
    if (!rat_field("ma", p.ma)) return bad("malformed field 'ma'");
    if (!rat_field("sbd", p.sbd)) return bad("malformed field 'sbd'");
    if (!rat_field("rsd", p.rsd)) return bad("malformed field 'rsd'");
    rec.trains.push_back(std::move(p));
  }
  if (rec.trains.empty()) return bad("record lists no trains");
  return rec;
}

std::string emit_cycle_record(const CycleRecord& rec) {
  std::ostringstream os;
  os << "cycle=" << rec.cycle << " ts=" << rat_str(rec.ts);
  for (const TrainParams& p : rec.trains)
    os << " | id=" << p.id << " x0=" << rat_str(p.x0) << " cur="
       << rat_str(p.cur_lo) << ":" << rat_str(p.cur_hi) << " new="
       << rat_str(p.new_lo) << ":" << rat_str(p.new_hi) << " ma="
       << rat_str(p.ma) << " sbd=" << rat_str(p.sbd) << " rsd="
       << rat_str(p.rsd);
  return os.str();
}

std::string format_monitor_verdict(const MonitorVerdict& v) {
  char ms[64];
  std::snprintf(ms, sizeof ms, "%.3f", v.latency_ms);
  std::ostringstream os;
  os << "cycle=" << v.cycle << " result=" << verdict_str(v.result) << " pair=";
  if (v.pair_leader >= 0)
    os << v.pair_leader << ":" << v.pair_follower;
  else
    os << "-";
  os << " latency_ms=" << ms;
  return os.str();
}

std::string format_bench_row(const BenchRow& row) {
  char ms[64];
  std::snprintf(ms, sizeof ms, "%.3f", row.median_ms);
  std::ostringstream os;
  os << "n=" << row.trains << " constraints=" << row.constraints
     << " variables=" << row.variables << " median_ms=" << ms << " result="
     << (row.all_unreachable ? "Unreachable" : "Mixed");
  return os.str();
}

}  // namespace lharv
