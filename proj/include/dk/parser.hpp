#pragma once

// Lexer and parser for the `.dk` theory format.
//
//   item ::= ident param* ":" term "."
//          | "def" ident param* ":" term "."                 (definable symbol)
//          | "def" ident param* [":" term] ":=" term "."     (definition)
//          | "[" [ident [":" term] ("," ident [":" term])*] "]" term "-->" term "."
//          | "#EVAL" term "."
//          | "#ASSERT" term "==" term "."
//   param ::= "(" ident ":" term ")"
//   term  ::= ident "=>" term | ident ":" app "=>" term | ident ":" app "->" term
//           | app "->" term | app
//   app   ::= atom+
//   atom  ::= "Type" | ident | qident | "(" term ")"
//
// Comments are `(; ... ;)` and nest. Unqualified identifiers resolve to the
// innermost local binder, then to a name declared earlier in the same file.

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dk/syntax.hpp"
#include "dk/term.hpp"

namespace dk {

namespace lex {

enum class Tok {
  Ident, QIdent, Colon, ColonEq, Dot, Comma, LParen, RParen, LBrack, RBrack,
  Arrow, LongArrow, FatArrow, EqEq, KwDef, KwType, CmdEval, CmdAssert, End
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::QIdent: return "qualified identifier";
    case Tok::Colon: return "':'";
    case Tok::ColonEq: return "':='";
    case Tok::Dot: return "'.'";
    case Tok::Comma: return "','";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::Arrow: return "'->'";
    case Tok::LongArrow: return "'-->'";
    case Tok::FatArrow: return "'=>'";
    case Tok::EqEq: return "'=='";
    case Tok::KwDef: return "'def'";
    case Tok::KwType: return "'Type'";
    case Tok::CmdEval: return "'#EVAL'";
    case Tok::CmdAssert: return "'#ASSERT'";
    case Tok::End: return "end of input";
  }
  return "token";
}

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto starts = [&](std::string_view s) { return src.substr(i, s.size()) == s; };

  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    const SourcePos pos{line, col};
    if (starts("(;")) {
      int depth = 0;
      do {
        if (starts("(;")) {
          ++depth;
          advance(2);
        } else if (starts(";)")) {
          --depth;
          advance(2);
        } else if (i >= src.size()) {
          throw SyntaxError(SyntaxErrorKind::Lex, pos, "unterminated comment");
        } else {
          advance(1);
        }
      } while (depth > 0);
      continue;
    }
    auto emit = [&](Tok k, std::size_t len) {
      out.push_back({k, std::string(src.substr(i, len)), pos});
      advance(len);
    };
    if (starts("-->")) { emit(Tok::LongArrow, 3); continue; }
    if (starts("->")) { emit(Tok::Arrow, 2); continue; }
    if (starts("=>")) { emit(Tok::FatArrow, 2); continue; }
    if (starts("==")) { emit(Tok::EqEq, 2); continue; }
    if (starts(":=")) { emit(Tok::ColonEq, 2); continue; }
    if (starts("#EVAL")) { emit(Tok::CmdEval, 5); continue; }
    if (starts("#ASSERT")) { emit(Tok::CmdAssert, 7); continue; }
    switch (c) {
      case ':': emit(Tok::Colon, 1); continue;
      case '.': emit(Tok::Dot, 1); continue;
      case ',': emit(Tok::Comma, 1); continue;
      case '(': emit(Tok::LParen, 1); continue;
      case ')': emit(Tok::RParen, 1); continue;
      case '[': emit(Tok::LBrack, 1); continue;
      case ']': emit(Tok::RBrack, 1); continue;
      default: break;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      Tok kind = Tok::Ident;
      // `m.x` with no space is a qualified name; `x.` followed by anything
      // else ends an item.
      if (j + 1 < src.size() && src[j] == '.' && ident_start(src[j + 1])) {
        kind = Tok::QIdent;
        j += 1;
        while (j < src.size() && ident_char(src[j])) ++j;
      }
      std::string text(src.substr(i, j - i));
      if (kind == Tok::Ident && text == "def") kind = Tok::KwDef;
      if (kind == Tok::Ident && text == "Type") kind = Tok::KwType;
      out.push_back({kind, std::move(text), pos});
      advance(j - i);
      continue;
    }
    std::size_t j = i + 1;
    while (j < src.size() && (static_cast<unsigned char>(src[j]) & 0xC0) == 0x80) ++j;
    throw SyntaxError(SyntaxErrorKind::Lex, pos, "unexpected input '" + std::string(src.substr(i, j - i)) + "'");
  }
  out.push_back({Tok::End, "", SourcePos{line, col}});
  return out;
}

}  // namespace lex

class Parser {
 public:
  Parser(std::string_view text, std::string module) : toks_(lex::tokenize(text)), module_(std::move(module)) {}

  std::vector<SourceItem> items() {
    std::vector<SourceItem> out;
    while (peek().kind != lex::Tok::End) out.push_back(item());
    return out;
  }

  /// A single closed term spanning the whole input.
  Term whole_term() {
    Term t = term();
    expect(lex::Tok::End);
    return t;
  }

  /// Names visible as unqualified globals (in addition to those declared by
  /// parsed items).
  void declare(std::string name) { declared_.insert(std::move(name)); }

 private:
  using Tok = lex::Tok;

  std::vector<lex::Token> toks_;
  std::size_t at_ = 0;
  std::string module_;
  std::unordered_set<std::string> declared_;
  std::vector<std::string> locals_;  // outermost first

  const lex::Token& peek(std::size_t k = 0) const {
    const std::size_t j = std::min(at_ + k, toks_.size() - 1);
    return toks_[j];
  }
  const lex::Token& next() {
    const auto& t = toks_[at_];
    if (at_ + 1 < toks_.size()) ++at_;
    return t;
  }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& expected) const {
    const auto& t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(SyntaxErrorKind::Parse, t.pos, "expected " + expected + ", found " + found);
  }
  const lex::Token& expect(Tok k) {
    if (peek().kind != k) fail(lex::describe(k));
    return next();
  }
  std::string ident() {
    if (peek().kind == Tok::Ident && peek().text == "Kind")
      throw SyntaxError(SyntaxErrorKind::Parse, peek().pos, "'Kind' cannot be written in source terms");
    return expect(Tok::Ident).text;
  }

  struct Param {
    std::string name;
    Term type;
  };

  std::vector<Param> params() {
    std::vector<Param> ps;
    while (peek().kind == Tok::LParen && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon) {
      next();
      std::string name = ident();
      expect(Tok::Colon);
      Term ty = term();
      expect(Tok::RParen);
      locals_.push_back(name);
      ps.push_back({std::move(name), std::move(ty)});
    }
    return ps;
  }

  void drop_params(const std::vector<Param>& ps) { locals_.resize(locals_.size() - ps.size()); }

  static Term close_pi(const std::vector<Param>& ps, Term body) {
    for (auto it = ps.rbegin(); it != ps.rend(); ++it) body = Term::pi(it->name, it->type, std::move(body));
    return body;
  }
  static Term close_lam(const std::vector<Param>& ps, Term body) {
    for (auto it = ps.rbegin(); it != ps.rend(); ++it) body = Term::lam(it->name, it->type, std::move(body));
    return body;
  }

  SourceItem item() {
    const SourcePos pos = peek().pos;
    switch (peek().kind) {
      case Tok::KwDef: {
        next();
        std::string name = ident();
        auto ps = params();
        Term ty, body;
        if (accept(Tok::Colon)) ty = term();
        if (accept(Tok::ColonEq)) body = term();
        drop_params(ps);
        expect(Tok::Dot);
        QName q{module_, name};
        declared_.insert(name);
        if (!body) {
          if (!ty) throw SyntaxError(SyntaxErrorKind::Parse, pos, "definition needs a type or a body");
          return {pos, DefinableDecl{std::move(q), close_pi(ps, ty)}};
        }
        return {pos, Definition{std::move(q), ty ? close_pi(ps, ty) : Term{}, close_lam(ps, body)}};
      }
      case Tok::LBrack: {
        next();
        std::vector<std::string> vars;
        if (peek().kind != Tok::RBrack) {
          do {
            std::string v = ident();
            if (accept(Tok::Colon)) (void)term();  // rule variable types are not used
            locals_.push_back(v);
            vars.push_back(std::move(v));
          } while (accept(Tok::Comma));
        }
        expect(Tok::RBrack);
        Term lhs = term();
        expect(Tok::LongArrow);
        Term rhs = term();
        expect(Tok::Dot);
        locals_.resize(locals_.size() - vars.size());
        return {pos, RuleItem{std::move(vars), std::move(lhs), std::move(rhs)}};
      }
      case Tok::CmdEval: {
        next();
        Term t = term();
        expect(Tok::Dot);
        return {pos, EvalCommand{std::move(t)}};
      }
      case Tok::CmdAssert: {
        next();
        Term a = term();
        expect(Tok::EqEq);
        Term b = term();
        expect(Tok::Dot);
        return {pos, AssertConv{std::move(a), std::move(b)}};
      }
      case Tok::Ident: {
        std::string name = ident();
        auto ps = params();
        expect(Tok::Colon);
        Term ty = term();
        drop_params(ps);
        expect(Tok::Dot);
        declared_.insert(name);
        return {pos, StaticDecl{QName{module_, std::move(name)}, close_pi(ps, ty)}};
      }
      default:
        fail("a declaration, definition, rule or command");
    }
  }

  Term term() {
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::FatArrow) {
      std::string x = ident();
      next();
      return bind_lam(std::move(x), Term{});
    }
    if (peek().kind == Tok::Ident && peek(1).kind == Tok::Colon) {
      std::string x = ident();
      next();
      Term dom = app(true);
      if (accept(Tok::FatArrow)) return bind_lam(std::move(x), std::move(dom));
      if (accept(Tok::Arrow)) return bind_pi(std::move(x), std::move(dom));
      fail("'->' or '=>'");
    }
    Term a = app();
    if (accept(Tok::Arrow)) return bind_pi("_", std::move(a));
    return a;
  }

  Term bind_lam(std::string x, Term dom) {
    locals_.push_back(x);
    Term body = term();
    locals_.pop_back();
    return Term::lam(std::move(x), std::move(dom), std::move(body));
  }

  Term bind_pi(std::string x, Term dom) {
    locals_.push_back(x);
    Term body = term();
    locals_.pop_back();
    return Term::pi(std::move(x), std::move(dom), std::move(body));
  }

  // In a binder domain `x : A => t`, an identifier before `=>` belongs to A.
  bool atom_start(bool domain = false) const {
    const auto k = peek().kind;
    if (k == Tok::Ident) return peek(1).kind != Tok::Colon && (domain || peek(1).kind != Tok::FatArrow);
    return k == Tok::QIdent || k == Tok::KwType || k == Tok::LParen;
  }

  Term app(bool domain = false) {
    if (!atom_start(domain)) fail("a term");
    Term t = atom();
    while (atom_start(domain)) t = Term::app(std::move(t), atom());
    return t;
  }

  Term atom() {
    const auto& tok = peek();
    switch (tok.kind) {
      case Tok::KwType:
        next();
        return Term::type();
      case Tok::LParen: {
        next();
        Term t = term();
        expect(Tok::RParen);
        return t;
      }
      case Tok::QIdent: {
        const auto dot = tok.text.find('.');
        QName q{tok.text.substr(0, dot), tok.text.substr(dot + 1)};
        if (q.module == module_ && !declared_.count(q.name))
          throw SyntaxError(SyntaxErrorKind::Scope, tok.pos, "unknown identifier '" + tok.text + "'");
        next();
        return Term::constant(std::move(q));
      }
      case Tok::Ident: {
        const SourcePos pos = tok.pos;
        std::string name = ident();
        for (std::size_t k = locals_.size(); k-- > 0;)
          if (locals_[k] == name) return Term::var(locals_.size() - 1 - k);
        if (declared_.count(name)) return Term::constant(QName{module_, std::move(name)});
        throw SyntaxError(SyntaxErrorKind::Scope, pos, "unknown identifier '" + name + "'");
      }
      default:
        fail("a term");
    }
  }
};

/// Parses a whole theory file. `module_name` qualifies every declared name.
inline std::vector<SourceItem> parse_file(std::string_view text, const std::string& module_name) {
  return Parser(text, module_name).items();
}

/// Parses a standalone closed term; globals must be qualified.
inline Term parse_term(std::string_view text, const std::string& module_name = "top") {
  return Parser(text, module_name).whole_term();
}

}  // namespace dk
