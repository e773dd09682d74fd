#pragma once

// Global environment: declarations, definable symbols with their rewrite
// rules, and definitions, in admission order.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dk/syntax.hpp"
#include "dk/term.hpp"

namespace dk {

class FuelExhausted : public std::runtime_error {
 public:
  explicit FuelExhausted(std::uint64_t limit)
      : std::runtime_error("reduction budget of " + std::to_string(limit) + " steps exhausted"), limit_(limit) {}
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
};

enum class TypeErrorKind { Mismatch, NotAFunction, Unbound, SortError, RuleError, FuelExhausted, NotInferable, Redefinition };

inline const char* to_string(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::Mismatch: return "mismatch";
    case TypeErrorKind::NotAFunction: return "not-a-function";
    case TypeErrorKind::Unbound: return "unbound";
    case TypeErrorKind::SortError: return "sort-error";
    case TypeErrorKind::RuleError: return "rule-error";
    case TypeErrorKind::FuelExhausted: return "fuel-exhausted";
    case TypeErrorKind::NotInferable: return "not-inferable";
    case TypeErrorKind::Redefinition: return "redefinition";
  }
  return "error";
}

/// Rejection of a term, declaration or rule. `message` already contains the
/// rendered terms.
class TypeError : public std::runtime_error {
 public:
  TypeError(TypeErrorKind kind, std::string message, Term expected = {}, Term actual = {}, SourcePos location = {})
      : std::runtime_error(message), kind_(kind), message_(std::move(message)),
        expected_(std::move(expected)), actual_(std::move(actual)), location_(location) {}

  TypeErrorKind kind() const { return kind_; }
  const std::string& message() const { return message_; }
  const Term& expected() const { return expected_; }
  const Term& actual() const { return actual_; }
  SourcePos location() const { return location_; }

  TypeError located(SourcePos pos) const {
    return TypeError(kind_, message_, expected_, actual_, pos);
  }

 private:
  TypeErrorKind kind_;
  std::string message_;
  Term expected_;
  Term actual_;
  SourcePos location_;
};

/// First-order pattern. A variable is identified by its position in the
/// rule context.
struct Pattern {
  enum class Kind { Var, Const } kind;
  std::size_t var = 0;
  QName head;
  std::vector<Pattern> args;

  static Pattern variable(std::size_t v) { return Pattern{Kind::Var, v, {}, {}}; }
  static Pattern constant(QName h, std::vector<Pattern> a = {}) { return Pattern{Kind::Const, 0, std::move(h), std::move(a)}; }
};

struct RewriteRule {
  std::size_t context_arity = 0;
  QName head;
  std::vector<Pattern> pattern_args;
  Term rhs;  // free index i is rule variable context_arity - 1 - i
  std::vector<std::string> var_names;
  SourcePos pos;
};

enum class EntryKind { Static, Definable, Defined };

struct SignatureEntry {
  EntryKind kind;
  Term type;
  Term body;  // Defined only
  std::vector<RewriteRule> rules;
};

class Signature {
 public:
  const SignatureEntry* find(const QName& q) const {
    auto it = entries_.find(q);
    return it == entries_.end() ? nullptr : &it->second;
  }
  bool contains(const QName& q) const { return entries_.count(q) != 0; }

  /// Names in admission order.
  const std::vector<QName>& order() const { return order_; }
  std::size_t size() const { return order_.size(); }

  void add(const QName& q, SignatureEntry e) {
    if (contains(q)) throw TypeError(TypeErrorKind::Redefinition, "redefinition of " + q.str());
    entries_.emplace(q, std::move(e));
    order_.push_back(q);
  }

  void add_rule(RewriteRule r) {
    auto it = entries_.find(r.head);
    if (it == entries_.end()) throw TypeError(TypeErrorKind::Unbound, "rule for unknown symbol " + r.head.str());
    if (it->second.kind != EntryKind::Definable)
      throw TypeError(TypeErrorKind::RuleError, "rules can only be attached to definable symbols, not " + r.head.str());
    it->second.rules.push_back(std::move(r));
  }

 private:
  std::unordered_map<QName, SignatureEntry, QNameHash> entries_;
  std::vector<QName> order_;
};

/// Pattern as a term over the rule context of the given arity.
inline Term pattern_to_term(const Pattern& p, std::size_t arity) {
  if (p.kind == Pattern::Kind::Var) return Term::var(arity - 1 - p.var);
  Term t = Term::constant(p.head);
  for (const auto& a : p.args) t = Term::app(std::move(t), pattern_to_term(a, arity));
  return t;
}

inline Term rule_lhs(const RewriteRule& r) {
  Term t = Term::constant(r.head);
  for (const auto& a : r.pattern_args) t = Term::app(std::move(t), pattern_to_term(a, r.context_arity));
  return t;
}

namespace detail {

inline Pattern to_pattern(const Term& t, std::size_t arity) {
  if (t.is(TermKind::Var)) {
    if (t.index() >= arity) throw TypeError(TypeErrorKind::RuleError, "pattern refers to a bound variable");
    return Pattern::variable(arity - 1 - t.index());
  }
  Spine s = unfold_apps(t);
  if (s.head.is(TermKind::Var))
    throw TypeError(TypeErrorKind::RuleError, "rule variables cannot be applied in patterns");
  if (!s.head.is(TermKind::Const))
    throw TypeError(TypeErrorKind::RuleError, "patterns must be constant-headed applications or variables");
  std::vector<Pattern> args;
  for (const auto& a : s.args) args.push_back(to_pattern(a, arity));
  return Pattern::constant(s.head.name(), std::move(args));
}

inline void collect_vars(const Pattern& p, std::vector<bool>& seen) {
  if (p.kind == Pattern::Kind::Var) seen[p.var] = true;
  for (const auto& a : p.args) collect_vars(a, seen);
}

}  // namespace detail

/// Builds a rule from its written form. Checks the structural conditions:
/// constant-headed first-order left-hand side and every right-hand side
/// variable bound by the pattern.
inline RewriteRule make_rule(const RuleItem& item, SourcePos pos = {}) {
  const std::size_t n = item.vars.size();
  Spine s = unfold_apps(item.lhs);
  if (!s.head.is(TermKind::Const))
    throw TypeError(TypeErrorKind::RuleError, "rule left-hand side must be headed by a constant", {}, {}, pos);
  RewriteRule r;
  r.context_arity = n;
  r.head = s.head.name();
  r.var_names = item.vars;
  r.pos = pos;
  try {
    for (const auto& a : s.args) r.pattern_args.push_back(detail::to_pattern(a, n));
  } catch (const TypeError& e) {
    throw e.located(pos);
  }
  std::vector<bool> seen(n, false);
  for (const auto& p : r.pattern_args) detail::collect_vars(p, seen);
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i] && occurs(item.rhs, n - 1 - i))
      throw TypeError(TypeErrorKind::RuleError,
                      "rule variable '" + item.vars[i] + "' occurs on the right but not in the pattern", {}, {}, pos);
  r.rhs = item.rhs;
  return r;
}

}  // namespace dk
