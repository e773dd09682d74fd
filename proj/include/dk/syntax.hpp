#pragma once

// Items of a `.dk` theory file after parsing and scope resolution.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dk/term.hpp"

namespace dk {

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;

  std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class SyntaxErrorKind { Lex, Parse, Scope };

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(SyntaxErrorKind kind, SourcePos pos, std::string detail)
      : std::runtime_error(pos.str() + ": " + label(kind) + ": " + detail),
        kind_(kind), pos_(pos), detail_(std::move(detail)) {}

  SyntaxErrorKind kind() const { return kind_; }
  SourcePos pos() const { return pos_; }
  const std::string& detail() const { return detail_; }

  static const char* label(SyntaxErrorKind k) {
    switch (k) {
      case SyntaxErrorKind::Lex: return "lex error";
      case SyntaxErrorKind::Parse: return "parse error";
      case SyntaxErrorKind::Scope: return "scope error";
    }
    return "error";
  }

 private:
  SyntaxErrorKind kind_;
  SourcePos pos_;
  std::string detail_;
};

struct StaticDecl {
  QName name;
  Term type;
};

struct DefinableDecl {
  QName name;
  Term type;
};

struct Definition {
  QName name;
  Term type;  // null when omitted
  Term body;
};

/// A rewrite rule as written. Rule variable i (in context order) is the free
/// index `vars.size() - 1 - i` in both sides.
struct RuleItem {
  std::vector<std::string> vars;
  Term lhs;
  Term rhs;
};

struct EvalCommand {
  Term term;
};

struct AssertConv {
  Term lhs;
  Term rhs;
};

struct SourceItem {
  SourcePos pos;
  std::variant<StaticDecl, DefinableDecl, Definition, RuleItem, EvalCommand, AssertConv> value;

  template <typename T>
  const T* get() const { return std::get_if<T>(&value); }
};

/// Name introduced by a declaration or definition, if any.
inline const QName* declared_name(const SourceItem& item) {
  if (auto* d = item.get<StaticDecl>()) return &d->name;
  if (auto* d = item.get<DefinableDecl>()) return &d->name;
  if (auto* d = item.get<Definition>()) return &d->name;
  return nullptr;
}

}  // namespace dk
