#pragma once

// Bidirectional type checker for the lambda-Pi calculus modulo rewriting,
// and admission of declarations, definitions and rules into a signature.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dk/printer.hpp"
#include "dk/rewrite.hpp"
#include "dk/signature.hpp"
#include "dk/syntax.hpp"
#include "dk/term.hpp"

namespace dk {

struct CheckOptions {
  std::uint64_t fuel = kDefaultFuel;
  /// Print terms in error messages as written instead of in whnf.
  bool raw_errors = false;
};

class TypeChecker {
 public:
  explicit TypeChecker(const Signature& sig, CheckOptions opts = {})
      : sig_(sig), engine_(sig, opts.fuel), opts_(opts) {}

  Engine& engine() { return engine_; }

  Term infer(LocalContext& ctx, const Term& t) {
    switch (t.tag()) {
      case TermKind::Kind:
        throw TypeError(TypeErrorKind::SortError, "Kind has no type");
      case TermKind::Type:
        return Term::kind();
      case TermKind::Var:
        return ctx.lookup(t.index());
      case TermKind::Const: {
        const SignatureEntry* e = sig_.find(t.name());
        if (!e) throw TypeError(TypeErrorKind::Unbound, "unknown constant " + t.name().str());
        return e->type;
      }
      case TermKind::App: {
        const Term fty = infer(ctx, t.fun());
        const Term w = engine_.whnf(fty);
        if (!w.is(TermKind::Pi))
          throw TypeError(TypeErrorKind::NotAFunction,
                          "'" + print_term(t.fun(), ctx.names()) + "' is applied but has type " + show(ctx, fty),
                          {}, fty);
        check(ctx, t.arg(), w.domain());
        return subst(w.body(), t.arg(), 0);
      }
      case TermKind::Lam: {
        if (!t.domain())
          throw TypeError(TypeErrorKind::NotInferable,
                          "cannot infer the type of unannotated abstraction " + print_term(t, ctx.names()));
        require_sort(ctx, t.domain(), false);
        Bind bind(ctx, t.binder(), t.domain());
        const Term body_ty = infer(ctx, t.body());
        if (body_ty.is(TermKind::Kind))
          throw TypeError(TypeErrorKind::SortError, "abstraction body cannot be Type");
        return Term::pi(t.binder(), t.domain(), body_ty);
      }
      case TermKind::Pi: {
        require_sort(ctx, t.domain(), false);
        Bind bind(ctx, t.binder(), t.domain());
        const Term s = engine_.whnf(infer(ctx, t.body()));
        if (!s.is(TermKind::Type) && !s.is(TermKind::Kind))
          throw TypeError(TypeErrorKind::SortError,
                          "codomain " + print_term(t.body(), ctx.names()) + " is not a type or a kind", {}, s);
        return s;
      }
    }
    throw InvariantViolation("unknown term tag");
  }

  void check(LocalContext& ctx, const Term& t, const Term& expected) {
    if (t.is(TermKind::Lam)) {
      const Term w = engine_.whnf(expected);
      if (!w.is(TermKind::Pi))
        throw TypeError(TypeErrorKind::Mismatch,
                        "abstraction " + print_term(t, ctx.names()) + " checked against non-product " + show(ctx, expected),
                        expected, {});
      Term dom = w.domain();
      if (t.domain()) {
        require_sort(ctx, t.domain(), false);
        if (!engine_.convertible(t.domain(), w.domain()))
          throw TypeError(TypeErrorKind::Mismatch,
                          "abstraction domain " + show(ctx, t.domain()) + " does not match expected " + show(ctx, w.domain()),
                          w.domain(), t.domain());
        dom = t.domain();
      }
      Bind bind(ctx, t.binder(), dom);
      check(ctx, t.body(), w.body());
      return;
    }
    const Term actual = infer(ctx, t);
    if (!engine_.convertible(actual, expected))
      throw TypeError(TypeErrorKind::Mismatch,
                      "'" + print_term(t, ctx.names()) + "' has type " + show(ctx, actual) + " but " +
                          show(ctx, expected) + " was expected",
                      expected, actual);
  }

  /// `ty` must be a type (or, if allowed, a kind).
  void require_sort(LocalContext& ctx, const Term& ty, bool allow_kind) {
    const Term s = engine_.whnf(infer(ctx, ty));
    if (s.is(TermKind::Type)) return;
    if (allow_kind && s.is(TermKind::Kind)) return;
    throw TypeError(TypeErrorKind::SortError,
                    "'" + print_term(ty, ctx.names()) + "' is not a " + (allow_kind ? "type or kind" : "type"), {}, s);
  }

  /// Type-preservation check of a rule: the right-hand side must have the
  /// type of the left-hand side in the context of the pattern variables,
  /// whose types are read off the declared types along the pattern spine.
  void check_rule(const RewriteRule& rule) {
    const std::size_t n = rule.context_arity;
    std::vector<Term> types(n);
    const Term lhs_type = spine_type(rule.head, rule.pattern_args, types, n, rule.var_names);
    std::vector<LocalContext::Entry> block;
    for (std::size_t i = 0; i < n; ++i) {
      if (!types[i])
        throw TypeError(TypeErrorKind::RuleError, "cannot infer the type of rule variable '" + rule.var_names[i] + "'");
      block.push_back({rule.var_names[i], types[i]});
    }
    LocalContext ctx = LocalContext::flat(std::move(block));
    for (std::size_t i = 0; i < n; ++i) require_sort(ctx, ctx.lookup(n - 1 - i), true);
    try {
      check(ctx, rule.rhs, lhs_type);
    } catch (const TypeError& e) {
      throw TypeError(TypeErrorKind::RuleError, "right-hand side of rule for " + rule.head.str() + ": " + e.message(),
                      e.expected(), e.actual());
    }
  }

 private:
  const Signature& sig_;
  Engine engine_;
  CheckOptions opts_;

  struct Bind {
    LocalContext& ctx;
    Bind(LocalContext& c, const std::string& name, const Term& ty) : ctx(c) { ctx.push(name, ty); }
    ~Bind() { ctx.pop(); }
    Bind(const Bind&) = delete;
    Bind& operator=(const Bind&) = delete;
  };

  std::string show(const LocalContext& ctx, const Term& t) {
    Term shown = t;
    if (!opts_.raw_errors) {
      try {
        Engine scratch(sig_, 100000);
        shown = scratch.whnf(t);
      } catch (const FuelExhausted&) {
      }
    }
    return print_term(shown, ctx.names());
  }

  Term spine_type(const QName& head, const std::vector<Pattern>& args, std::vector<Term>& types, std::size_t n,
                  const std::vector<std::string>& names) {
    const SignatureEntry* e = sig_.find(head);
    if (!e) throw TypeError(TypeErrorKind::Unbound, "unknown constant " + head.str() + " in pattern");
    Term ty = e->type;
    for (const auto& p : args) {
      const Term w = engine_.whnf(ty);
      if (!w.is(TermKind::Pi))
        throw TypeError(TypeErrorKind::RuleError, "pattern applies " + head.str() + " to too many arguments");
      if (p.kind == Pattern::Kind::Var) {
        if (!types[p.var]) {
          types[p.var] = w.domain();
        } else if (!engine_.convertible(types[p.var], w.domain())) {
          throw TypeError(TypeErrorKind::RuleError,
                          "rule variable '" + names[p.var] + "' is used at incompatible types");
        }
      } else {
        const Term arg_ty = spine_type(p.head, p.args, types, n, names);
        if (!engine_.convertible(arg_ty, w.domain()))
          throw TypeError(TypeErrorKind::RuleError,
                          "pattern argument " + p.head.str() + " has type " + print_term(arg_ty, names) +
                              " but " + print_term(w.domain(), names) + " was expected",
                          w.domain(), arg_ty);
      }
      ty = subst(w.body(), pattern_to_term(p, n), 0);
    }
    return ty;
  }
};

namespace detail {

template <typename F>
auto with_fuel_errors(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const FuelExhausted& e) {
    throw TypeError(TypeErrorKind::FuelExhausted, e.what());
  }
}

}  // namespace detail

inline Term infer(const Signature& sig, LocalContext& ctx, const Term& t, CheckOptions opts = {}) {
  return detail::with_fuel_errors([&] { return TypeChecker(sig, opts).infer(ctx, t); });
}

inline void check(const Signature& sig, LocalContext& ctx, const Term& t, const Term& expected, CheckOptions opts = {}) {
  detail::with_fuel_errors([&] { TypeChecker(sig, opts).check(ctx, t, expected); });
}

inline void check_rule(const Signature& sig, const RewriteRule& rule, CheckOptions opts = {}) {
  detail::with_fuel_errors([&] { TypeChecker(sig, opts).check_rule(rule); });
}

/// Admits `item` into `sig` in place. Commands (#EVAL, #ASSERT) are only
/// type-checked here; they never extend the signature.
inline void admit(Signature& sig, const SourceItem& item, CheckOptions opts = {}) {
  try {
    detail::with_fuel_errors([&] {
      TypeChecker tc(sig, opts);
      LocalContext ctx;
      auto fresh = [&](const QName& q) {
        if (sig.contains(q)) throw TypeError(TypeErrorKind::Redefinition, "redefinition of " + q.str());
      };
      if (auto* d = item.get<StaticDecl>()) {
        fresh(d->name);
        tc.require_sort(ctx, d->type, true);
        sig.add(d->name, {EntryKind::Static, d->type, {}, {}});
      } else if (auto* d = item.get<DefinableDecl>()) {
        fresh(d->name);
        tc.require_sort(ctx, d->type, true);
        sig.add(d->name, {EntryKind::Definable, d->type, {}, {}});
      } else if (auto* d = item.get<Definition>()) {
        fresh(d->name);
        Term ty = d->type;
        if (ty) {
          tc.require_sort(ctx, ty, true);
          tc.check(ctx, d->body, ty);
        } else {
          ty = tc.infer(ctx, d->body);
          if (ty.is(TermKind::Kind)) throw TypeError(TypeErrorKind::SortError, "cannot define " + d->name.str() + " as Type");
        }
        sig.add(d->name, {EntryKind::Defined, ty, d->body, {}});
      } else if (auto* r = item.get<RuleItem>()) {
        RewriteRule rule = make_rule(*r, item.pos);
        const SignatureEntry* e = sig.find(rule.head);
        if (!e) throw TypeError(TypeErrorKind::Unbound, "rule for unknown symbol " + rule.head.str());
        if (e->kind != EntryKind::Definable)
          throw TypeError(TypeErrorKind::RuleError,
                          "rules can only be attached to definable symbols, not " + rule.head.str());
        tc.check_rule(rule);
        sig.add_rule(std::move(rule));
      } else if (auto* ev = item.get<EvalCommand>()) {
        (void)tc.infer(ctx, ev->term);
      } else if (auto* as = item.get<AssertConv>()) {
        (void)tc.infer(ctx, as->lhs);
        (void)tc.infer(ctx, as->rhs);
      }
    });
  } catch (const TypeError& e) {
    throw e.located(item.pos);
  }
}

/// Functional form: returns the extended signature.
inline Signature admit_item(const Signature& sig, const SourceItem& item, CheckOptions opts = {}) {
  Signature out = sig;
  admit(out, item, opts);
  return out;
}

}  // namespace dk
