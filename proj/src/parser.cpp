#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "dtlf/checker.hpp"
#include "dtlf/logic.hpp"
#include "dtlf/subtype.hpp"
#include "dtlf/syntax.hpp"

namespace dtlf {

namespace {

enum class Tok {
  End, Ident,
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Dot, Semi, Colon, Bar, Turnstile, Star, Eq,
  TArrow,   // ->
  Lolly,    // -o
  AndTok,   // the /\ connective
  OrTok,    // the \/ connective
  ConsTok,  // ::
  Lambda,   // \x
  AtomTok,  // <name>
  DiamTok,  // <>
  BoxTok,   // []
  ModalTok  // [pi1] [pi2] [fold] [hd] [lbl] [lft] [rght]
};

struct Token {
  Tok kind;
  std::string text;
  int pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

bool is_modal_name(const std::string& s) {
  return s == "pi1" || s == "pi2" || s == "fold" || s == "hd" || s == "lbl" ||
         s == "lft" || s == "rght";
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0, n = s.size();
  auto ident_at = [&](size_t j) {
    size_t k = j;
    while (k < n && ident_char(s[k])) ++k;
    return s.substr(j, k - j);
  };
  while (i < n) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    int pos = static_cast<int>(i);
    if (c == '-') {
      if (i + 1 < n && s[i + 1] == '-') {
        while (i < n && s[i] != '\n') ++i;
        continue;
      }
      if (i + 1 < n && s[i + 1] == '>') { out.push_back({Tok::TArrow, "->", pos}); i += 2; continue; }
      if (i + 1 < n && s[i + 1] == 'o' && (i + 2 >= n || !ident_char(s[i + 2]))) {
        out.push_back({Tok::Lolly, "-o", pos});
        i += 2;
        continue;
      }
      throw Error("stray '-'", pos);
    }
    if (c == '/') {
      if (i + 1 < n && s[i + 1] == '\\') { out.push_back({Tok::AndTok, "/\\", pos}); i += 2; continue; }
      throw Error("stray '/'", pos);
    }
    if (c == '\\') {
      if (i + 1 < n && s[i + 1] == '/') { out.push_back({Tok::OrTok, "\\/", pos}); i += 2; continue; }
      out.push_back({Tok::Lambda, "\\", pos});
      ++i;
      continue;
    }
    if (c == ':') {
      if (i + 1 < n && s[i + 1] == ':') { out.push_back({Tok::ConsTok, "::", pos}); i += 2; continue; }
      out.push_back({Tok::Colon, ":", pos});
      ++i;
      continue;
    }
    if (c == '|') {
      if (i + 1 < n && s[i + 1] == '-') { out.push_back({Tok::Turnstile, "|-", pos}); i += 2; continue; }
      out.push_back({Tok::Bar, "|", pos});
      ++i;
      continue;
    }
    if (c == '<') {
      if (i + 1 < n && s[i + 1] == '>') { out.push_back({Tok::DiamTok, "<>", pos}); i += 2; continue; }
      if (i + 1 < n && ident_start(s[i + 1])) {
        std::string name = ident_at(i + 1);
        size_t after = i + 1 + name.size();
        if (after < n && s[after] == '>') {
          out.push_back({Tok::AtomTok, name, pos});
          i = after + 1;
          continue;
        }
      }
      throw Error("stray '<'", pos);
    }
    if (c == '[') {
      if (i + 1 < n && s[i + 1] == ']') { out.push_back({Tok::BoxTok, "[]", pos}); i += 2; continue; }
      if (i + 1 < n && ident_start(s[i + 1])) {
        std::string name = ident_at(i + 1);
        size_t after = i + 1 + name.size();
        if (after < n && s[after] == ']' && is_modal_name(name)) {
          out.push_back({Tok::ModalTok, name, pos});
          i = after + 1;
          continue;
        }
      }
      out.push_back({Tok::LBracket, "[", pos});
      ++i;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", pos}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", pos}); ++i; continue;
      case '{': out.push_back({Tok::LBrace, "{", pos}); ++i; continue;
      case '}': out.push_back({Tok::RBrace, "}", pos}); ++i; continue;
      case ']': out.push_back({Tok::RBracket, "]", pos}); ++i; continue;
      case ',': out.push_back({Tok::Comma, ",", pos}); ++i; continue;
      case '.': out.push_back({Tok::Dot, ".", pos}); ++i; continue;
      case ';': out.push_back({Tok::Semi, ";", pos}); ++i; continue;
      case '*': out.push_back({Tok::Star, "*", pos}); ++i; continue;
      case '=': out.push_back({Tok::Eq, "=", pos}); ++i; continue;
      default: break;
    }
    if (ident_start(c)) {
      std::string name = ident_at(i);
      out.push_back({Tok::Ident, name, pos});
      i += name.size();
      continue;
    }
    throw Error(std::string("unexpected character '") + c + "'", pos);
  }
  out.push_back({Tok::End, "", static_cast<int>(n)});
  return out;
}

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Bar: return "'|'";
    case Tok::Turnstile: return "'|-'";
    case Tok::Star: return "'*'";
    case Tok::Eq: return "'='";
    case Tok::TArrow: return "'->'";
    case Tok::Lolly: return "'-o'";
    case Tok::AndTok: return "'/\\'";
    case Tok::OrTok: return "'\\/'";
    case Tok::ConsTok: return "'::'";
    case Tok::Lambda: return "'\\'";
    case Tok::AtomTok: return "atom";
    case Tok::DiamTok: return "'<>'";
    case Tok::BoxTok: return "'[]'";
    case Tok::ModalTok: return "modality";
  }
  return "token";
}

bool formula_keyword(const std::string& s) {
  return s == "mu" || s == "nu" || s == "true" || s == "false" || s == "AG" ||
         s == "EG" || s == "AF" || s == "EF" || s == "X";
}

bool term_keyword(const std::string& s) {
  return s == "fix" || s == "fold" || s == "unfold" || s == "pi1" || s == "pi2" ||
         s == "case" || s == "of" || s == "if" || s == "then" || s == "else" ||
         s == "hd" || s == "tl" || s == "lbl" || s == "lft" || s == "rght";
}

struct Parser {
  std::vector<Token> toks;
  size_t idx = 0;
  const syntax::BaseRegistry& reg;

  Parser(const std::string& text, const syntax::BaseRegistry& r) : toks(lex(text)), reg(r) {}

  const Token& peek() const { return toks[idx]; }
  const Token& peek2() const { return idx + 1 < toks.size() ? toks[idx + 1] : toks.back(); }
  Token next() { return toks[idx++]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(const char* w) const { return at(Tok::Ident) && peek().text == w; }
  Token expect(Tok k, const char* where) {
    if (!at(k))
      throw Error(std::string("expected ") + tok_name(k) + " in " + where + ", found " +
                      tok_name(peek().kind) +
                      (peek().kind == Tok::Ident ? " '" + peek().text + "'" : ""),
                  peek().pos);
    return next();
  }
  std::string expect_ident(const char* where) { return expect(Tok::Ident, where).text; }
  void expect_end(const char* what) {
    if (!at(Tok::End))
      throw Error(std::string("trailing input after ") + what, peek().pos);
  }

  // ---- types ----

  syntax::TypePtr type_expr() {
    auto l = type_prod();
    if (at(Tok::TArrow)) {
      next();
      return syntax::mk_arrow(l, type_expr());
    }
    return l;
  }

  syntax::TypePtr type_prod() {
    auto l = type_atom();
    while (at(Tok::Star)) {
      next();
      l = syntax::mk_prod(l, type_atom());
    }
    return l;
  }

  syntax::TypePtr type_atom() {
    if (at(Tok::LParen)) {
      next();
      auto t = type_expr();
      expect(Tok::RParen, "type");
      return t;
    }
    if (at_ident("rec")) {
      next();
      std::string x = expect_ident("rec type");
      expect(Tok::Dot, "rec type");
      return syntax::mk_rec(x, type_expr());
    }
    if (at_ident("Stream")) { next(); return syntax::mk_stream(type_atom()); }
    if (at_ident("Tree")) { next(); return syntax::mk_tree(type_atom()); }
    if (at_ident("Rou")) { next(); return syntax::mk_rou(type_atom()); }
    if (at(Tok::Ident)) {
      Token t = next();
      if (reg.has(t.text)) return syntax::mk_base(t.text);
      return syntax::mk_tvar(t.text);
    }
    throw Error(std::string("expected a type, found ") + tok_name(peek().kind), peek().pos);
  }

  // ---- formulas ----

  logic::FormulaPtr formula() {
    if (at_ident("mu") || at_ident("nu")) {
      bool is_mu = peek().text == "mu";
      next();
      std::string x = expect_ident("fixpoint binder");
      if (formula_keyword(x)) throw Error("'" + x + "' cannot name a fixpoint variable");
      expect(Tok::Dot, "fixpoint binder");
      auto body = formula();
      return is_mu ? logic::mk_mu(x, body) : logic::mk_nu(x, body);
    }
    auto l = f_or();
    if (at(Tok::Lolly)) {
      next();
      return logic::mk_arrowf(l, formula());
    }
    return l;
  }

  logic::FormulaPtr f_or() {
    auto l = f_and();
    if (!at(Tok::OrTok)) return l;
    std::vector<logic::FormulaPtr> items{l};
    while (at(Tok::OrTok)) {
      next();
      items.push_back(f_and());
    }
    return logic::mk_orf(std::move(items));
  }

  logic::FormulaPtr f_and() {
    auto l = f_prefix();
    if (!at(Tok::AndTok)) return l;
    std::vector<logic::FormulaPtr> items{l};
    while (at(Tok::AndTok)) {
      next();
      items.push_back(f_prefix());
    }
    return logic::mk_andf(std::move(items));
  }

  logic::FormulaPtr f_prefix() {
    if (at(Tok::ModalTok)) {
      std::string m = next().text;
      auto body = f_prefix();
      if (m == "pi1") return logic::mk_pi1f(body);
      if (m == "pi2") return logic::mk_pi2f(body);
      if (m == "fold") return logic::mk_foldf(body);
      if (m == "hd" || m == "lbl") return logic::mk_foldf(logic::mk_pi1f(body));
      if (m == "lft") return logic::mk_foldf(logic::mk_pi2f(logic::mk_pi1f(body)));
      return logic::mk_foldf(logic::mk_pi2f(logic::mk_pi2f(body)));  // rght
    }
    if (at(Tok::BoxTok)) { next(); return logic::mk_schema(logic::Formula::Kind::Box, f_prefix()); }
    if (at(Tok::DiamTok)) { next(); return logic::mk_schema(logic::Formula::Kind::Diam, f_prefix()); }
    if (at_ident("AG")) { next(); return logic::mk_schema(logic::Formula::Kind::AllBox, f_prefix()); }
    if (at_ident("EG")) { next(); return logic::mk_schema(logic::Formula::Kind::ExBox, f_prefix()); }
    if (at_ident("AF")) { next(); return logic::mk_schema(logic::Formula::Kind::AllDiam, f_prefix()); }
    if (at_ident("EF")) { next(); return logic::mk_schema(logic::Formula::Kind::ExDiam, f_prefix()); }
    if (at_ident("X")) { next(); return logic::mk_foldf(logic::mk_pi2f(f_prefix())); }
    return f_atom();
  }

  logic::FormulaPtr f_atom() {
    if (at(Tok::AtomTok)) {
      Token t = next();
      auto hit = reg.find_const(t.text);
      if (!hit) throw Error("unknown constant <" + t.text + ">", t.pos);
      return logic::mk_atomf(hit->first, t.text);
    }
    if (at(Tok::LParen)) {
      next();
      auto f = formula();
      expect(Tok::RParen, "formula");
      return f;
    }
    if (at_ident("true")) { next(); return logic::f_true(); }
    if (at_ident("false")) { next(); return logic::f_false(); }
    if (at(Tok::Ident) && !formula_keyword(peek().text)) {
      Token t = next();
      return logic::mk_svar(t.text);
    }
    throw Error(std::string("expected a formula, found ") + tok_name(peek().kind), peek().pos);
  }

  // ---- refinement types ----

  subtype::RefPtr reftype() {
    auto l = rt_prod();
    if (at(Tok::TArrow)) {
      next();
      return subtype::mk_arrowt(l, reftype());
    }
    return l;
  }

  subtype::RefPtr rt_prod() {
    auto l = rt_atom();
    while (at(Tok::Star)) {
      next();
      l = subtype::mk_prodt(l, rt_atom());
    }
    return l;
  }

  subtype::RefPtr rt_atom() {
    if (at(Tok::LBrace)) {
      next();
      auto tau = type_expr();
      expect(Tok::Bar, "refinement type");
      auto phi = formula();
      expect(Tok::RBrace, "refinement type");
      logic::validate_formula(tau, phi, reg);
      return subtype::mk_refine(tau, phi);
    }
    if (at(Tok::LParen)) {
      next();
      auto t = reftype();
      expect(Tok::RParen, "refinement type");
      return t;
    }
    return subtype::mk_puret(type_atom());
  }

  // ---- terms ----

  bool starts_app_item() const {
    switch (peek().kind) {
      case Tok::LParen:
        return true;
      case Tok::Ident: {
        const std::string& w = peek().text;
        if (w == "then" || w == "else" || w == "of" || w == "if" || w == "fix") return false;
        return true;
      }
      default:
        return false;
    }
  }

  syntax::TermPtr term() {
    if (at(Tok::Lambda)) {
      next();
      std::string x = expect_ident("lambda");
      expect(Tok::Dot, "lambda");
      return syntax::mk_lam(x, term());
    }
    if (at_ident("fix")) {
      next();
      std::string x = expect_ident("fix");
      std::vector<logic::FormulaPtr> invs;
      if (at(Tok::LBracket)) {
        next();
        invs.push_back(formula());
        while (at(Tok::Semi)) {
          next();
          invs.push_back(formula());
        }
        expect(Tok::RBracket, "fix invariants");
      }
      expect(Tok::Dot, "fix");
      return syntax::mk_fix(x, term(), std::move(invs));
    }
    if (at_ident("if")) {
      next();
      auto c = term();
      if (!at_ident("then")) throw Error("expected 'then'", peek().pos);
      next();
      auto a = term();
      if (!at_ident("else")) throw Error("expected 'else'", peek().pos);
      next();
      auto b = term();
      return syntax::mk_case(c, {{"tt", a}, {"ff", b}});
    }
    return cons_term();
  }

  syntax::TermPtr cons_term() {
    auto l = app_term();
    if (at(Tok::ConsTok)) {
      next();
      auto r = term();  // right-associative, binders allowed on the right
      return syntax::mk_fold(syntax::mk_pair(l, r));
    }
    return l;
  }

  syntax::TermPtr app_term() {
    auto l = app_item();
    while (starts_app_item()) l = syntax::mk_app(l, app_item());
    return l;
  }

  syntax::TermPtr app_item() {
    if (at(Tok::Ident)) {
      const std::string& w = peek().text;
      if (w == "fold") { next(); return syntax::mk_fold(app_item()); }
      if (w == "unfold") { next(); return syntax::mk_unfold(app_item()); }
      if (w == "pi1") { next(); return syntax::mk_proj(1, app_item()); }
      if (w == "pi2") { next(); return syntax::mk_proj(2, app_item()); }
      if (w == "hd") { next(); return syntax::mk_proj(1, syntax::mk_unfold(app_item())); }
      if (w == "tl") { next(); return syntax::mk_proj(2, syntax::mk_unfold(app_item())); }
      if (w == "lbl") { next(); return syntax::mk_proj(1, syntax::mk_unfold(app_item())); }
      if (w == "lft") {
        next();
        return syntax::mk_proj(1, syntax::mk_proj(2, syntax::mk_unfold(app_item())));
      }
      if (w == "rght") {
        next();
        return syntax::mk_proj(2, syntax::mk_proj(2, syntax::mk_unfold(app_item())));
      }
    }
    return atom_term();
  }

  syntax::TermPtr atom_term() {
    if (at(Tok::LParen)) {
      next();
      auto m = term();
      if (at(Tok::Comma)) {
        next();
        auto r = term();
        expect(Tok::RParen, "pair");
        return syntax::mk_pair(m, r);
      }
      if (at(Tok::Colon)) {
        next();
        auto rt = reftype();
        expect(Tok::RParen, "ascription");
        if (has_refine(rt)) return syntax::mk_ascribe(m, subtype::underlying(rt), rt);
        return syntax::mk_ascribe(m, subtype::underlying(rt), nullptr);
      }
      expect(Tok::RParen, "term");
      return m;
    }
    if (at_ident("case")) {
      next();
      auto scrut = cons_term();
      if (!at_ident("of")) throw Error("expected 'of'", peek().pos);
      next();
      expect(Tok::LBrace, "case");
      std::vector<std::pair<std::string, syntax::TermPtr>> branches;
      while (true) {
        std::string c = expect_ident("case branch");
        expect(Tok::TArrow, "case branch");
        branches.emplace_back(c, term());
        if (at(Tok::Bar)) { next(); continue; }
        break;
      }
      expect(Tok::RBrace, "case");
      return syntax::mk_case(scrut, std::move(branches));
    }
    if (at(Tok::Ident)) {
      Token t = next();
      if (term_keyword(t.text))
        throw Error("'" + t.text + "' cannot appear here", t.pos);
      if (auto hit = reg.find_const(t.text)) return syntax::mk_const(hit->first, t.text);
      return syntax::mk_var(t.text);
    }
    throw Error(std::string("expected a term, found ") + tok_name(peek().kind), peek().pos);
  }

  static bool has_refine(const subtype::RefPtr& t) {
    switch (t->kind) {
      case subtype::RefType::Kind::Refine:
        return true;
      case subtype::RefType::Kind::PureT:
        return false;
      default:
        return has_refine(t->left) || has_refine(t->right);
    }
  }

  // ---- judgments ----

  checker::Judgment judgment() {
    checker::Judgment j;
    if (!at(Tok::Turnstile)) {
      while (true) {
        std::string x = expect_ident("context");
        expect(Tok::Colon, "context entry");
        j.ctx.emplace_back(x, reftype());
        if (at(Tok::Comma)) { next(); continue; }
        break;
      }
    }
    expect(Tok::Turnstile, "judgment");
    j.term = term();
    expect(Tok::Colon, "judgment");
    j.goal = reftype();
    return j;
  }
};

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

namespace syntax {

TypePtr parse_type(const std::string& text, const BaseRegistry& reg) {
  Parser p(text, reg);
  auto t = p.type_expr();
  p.expect_end("type");
  if (!type_closed(t)) throw Error("type has unbound variables: " + print_type(t));
  return t;
}

TermPtr parse_term(const std::string& text, const BaseRegistry& reg) {
  Parser p(text, reg);
  auto t = p.term();
  p.expect_end("term");
  return t;
}

}  // namespace syntax

namespace logic {

FormulaPtr parse_formula(const std::string& text, const syntax::BaseRegistry& reg) {
  Parser p(text, reg);
  auto f = p.formula();
  p.expect_end("formula");
  return f;
}

}  // namespace logic

namespace subtype {

RefPtr parse_reftype(const std::string& text, const syntax::BaseRegistry& reg) {
  Parser p(text, reg);
  auto t = p.reftype();
  p.expect_end("refinement type");
  return t;
}

}  // namespace subtype

namespace checker {

CorpusFile parse_judgment_file(const std::string& text) {
  CorpusFile file;

  // Base declarations apply file-wide, wherever they appear.
  {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      auto words = split_ws(line);
      if (words.size() >= 4 && words[0] == "base" && words[2] == "=") {
        std::vector<std::string> consts(words.begin() + 3, words.end());
        file.reg.declare(words[1], consts);
      }
    }
  }

  std::string pending_name, pending_expect;
  CheckOptions pending_opts;
  bool pending_has_opts = false;
  std::string stanza;
  int counter = 0;

  auto flush = [&]() {
    std::string body = trim(stanza);
    stanza.clear();
    if (body.empty()) return;
    JudgmentCase jc;
    jc.name = pending_name.empty() ? "case" + std::to_string(++counter) : pending_name;
    jc.opts = pending_opts;
    jc.has_opts = pending_has_opts;
    jc.expect = pending_expect;
    Parser p(body, file.reg);
    jc.j = p.judgment();
    p.expect_end("judgment");
    file.cases.push_back(std::move(jc));
    pending_name.clear();
    pending_expect.clear();
    pending_opts = CheckOptions{};
    pending_has_opts = false;
  };

  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::string t = trim(line);
    if (t.empty()) { flush(); continue; }
    auto words = split_ws(t);
    if (words.size() >= 3 && words[0] == "base" && words[2] == "=") continue;
    if (t.rfind("--", 0) == 0) {
      std::string rest = trim(t.substr(2));
      if (rest.rfind("name:", 0) == 0) {
        pending_name = trim(rest.substr(5));
      } else if (rest.rfind("expect:", 0) == 0) {
        pending_expect = trim(rest.substr(7));
      } else if (rest.rfind("options:", 0) == 0) {
        for (const auto& w : split_ws(rest.substr(8))) {
          auto eq = w.find('=');
          if (eq == std::string::npos)
            throw Error("malformed option '" + w + "' (want key=value)");
          std::string key = w.substr(0, eq);
          int val = 0;
          try {
            val = std::stoi(w.substr(eq + 1));
          } catch (...) {
            throw Error("malformed option value in '" + w + "'");
          }
          if (key == "k") pending_opts.k = val;
          else if (key == "nfix") pending_opts.n_fix = val;
          else if (key == "fuel") pending_opts.fuel = val;
          else if (key == "rank") pending_opts.rank = val;
          else throw Error("unknown option '" + key + "'");
          pending_has_opts = true;
        }
      }
      continue;
    }
    stanza += t;
    stanza += '\n';
  }
  flush();
  return file;
}

}  // namespace checker

}  // namespace dtlf
