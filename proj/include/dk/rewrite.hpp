#pragma once

// Reduction engine: beta, delta (definitions) and signature rewrite rules.
//
// Conversion is beta plus rules, without eta. Rules of a symbol are tried in
// declaration order and the first match wins. Matching brings arguments to
// weak-head normal form only where a pattern needs to see a constant head.
// Every reduction step consumes one unit of fuel; running out raises
// FuelExhausted instead of looping forever.

#include <cstdint>
#include <optional>
#include <vector>

#include "dk/signature.hpp"
#include "dk/term.hpp"

namespace dk {

inline constexpr std::uint64_t kDefaultFuel = 10'000'000;

/// Rule-variable assignment indexed by context position; null = unassigned.
using Substitution = std::vector<Term>;

class Engine {
 public:
  explicit Engine(const Signature& sig, std::uint64_t fuel = kDefaultFuel) : sig_(sig), limit_(fuel) {}

  const Signature& signature() const { return sig_; }
  std::uint64_t steps() const { return used_; }
  std::uint64_t fuel_limit() const { return limit_; }

  Term whnf(const Term& t) {
    Term cur = t;
    for (;;) {
      auto next = step_head(cur);
      if (!next) return cur;
      cur = std::move(*next);
    }
  }

  Term snf(const Term& t) {
    Term w = whnf(t);
    switch (w.tag()) {
      case TermKind::Lam:
        return Term::lam(w.binder(), w.domain() ? snf(w.domain()) : Term{}, snf(w.body()));
      case TermKind::Pi:
        return Term::pi(w.binder(), snf(w.domain()), snf(w.body()));
      case TermKind::App: {
        Spine s = unfold_apps(w);
        Term out = s.head;
        for (const auto& a : s.args) out = Term::app(std::move(out), snf(a));
        return out;
      }
      default:
        return w;
    }
  }

  bool convertible(const Term& a, const Term& b) {
    if (alpha_eq(a, b)) return true;
    const Term x = whnf(a);
    const Term y = whnf(b);
    if (alpha_eq(x, y)) return true;
    if (x.tag() != y.tag()) return false;
    switch (x.tag()) {
      case TermKind::Kind:
      case TermKind::Type:
        return true;
      case TermKind::Lam:
        return convertible(x.body(), y.body());
      case TermKind::Pi:
        return convertible(x.domain(), y.domain()) && convertible(x.body(), y.body());
      case TermKind::Const:
        return x.name() == y.name();
      case TermKind::Var:
        return x.index() == y.index();
      case TermKind::App: {
        Spine sx = unfold_apps(x);
        Spine sy = unfold_apps(y);
        if (sx.args.size() != sy.args.size()) return false;
        if (sx.head.tag() != sy.head.tag()) return false;
        if (sx.head.is(TermKind::Const) && sx.head.name() != sy.head.name()) return false;
        if (sx.head.is(TermKind::Var) && sx.head.index() != sy.head.index()) return false;
        if (!sx.head.is(TermKind::Const) && !sx.head.is(TermKind::Var)) return false;
        for (std::size_t i = 0; i < sx.args.size(); ++i)
          if (!convertible(sx.args[i], sy.args[i])) return false;
        return true;
      }
    }
    return false;
  }

  /// Matches `p` against `t`, extending `sigma` (sized to the rule arity).
  bool match(const Pattern& p, const Term& t, Substitution& sigma) {
    if (p.kind == Pattern::Kind::Var) {
      Term& slot = sigma.at(p.var);
      if (!slot) {
        slot = t;
        return true;
      }
      return convertible(slot, t);
    }
    Spine s = unfold_apps(whnf(t));
    if (!s.head.is(TermKind::Const) || s.head.name() != p.head || s.args.size() != p.args.size()) return false;
    for (std::size_t i = 0; i < p.args.size(); ++i)
      if (!match(p.args[i], s.args[i], sigma)) return false;
    return true;
  }

  /// Tries the rules of a constant-headed spine; returns the contractum.
  std::optional<Term> apply_rules(const SignatureEntry& entry, const Spine& s) {
    for (const auto& rule : entry.rules) {
      const std::size_t k = rule.pattern_args.size();
      if (k > s.args.size()) continue;
      Substitution sigma(rule.context_arity);
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) ok = match(rule.pattern_args[i], s.args[i], sigma);
      if (!ok) continue;
      tick();
      std::vector<Term> values(rule.context_arity);
      for (std::size_t i = 0; i < rule.context_arity; ++i) values[rule.context_arity - 1 - i] = sigma[i];
      Term out = instantiate(rule.rhs, values);
      for (std::size_t i = k; i < s.args.size(); ++i) out = Term::app(std::move(out), s.args[i]);
      return out;
    }
    return std::nullopt;
  }

  /// One head step (beta, delta or rule), or nullopt if `t` is in whnf.
  std::optional<Term> step_head(const Term& t) {
    if (!t.is(TermKind::App) && !t.is(TermKind::Const)) return std::nullopt;
    Spine s = unfold_apps(t);
    if (s.head.is(TermKind::Lam) && !s.args.empty()) {
      tick();
      Term out = subst(s.head.body(), s.args[0], 0);
      for (std::size_t i = 1; i < s.args.size(); ++i) out = Term::app(std::move(out), s.args[i]);
      return check_scope(t, std::move(out));
    }
    if (!s.head.is(TermKind::Const)) return std::nullopt;
    const SignatureEntry* e = sig_.find(s.head.name());
    if (!e) return std::nullopt;
    if (e->kind == EntryKind::Defined) {
      tick();
      return apps(e->body, s.args);
    }
    if (e->kind == EntryKind::Definable) {
      if (auto r = apply_rules(*e, s)) return check_scope(t, std::move(*r));
    }
    return std::nullopt;
  }

 private:
  const Signature& sig_;
  std::uint64_t limit_;
  std::uint64_t used_ = 0;

  void tick() {
    if (++used_ > limit_) throw FuelExhausted(limit_);
  }

  static Term check_scope(const Term& before, Term after) {
    if (after.loose_bound() > before.loose_bound())
      throw InvariantViolation("reduction introduced an escaping free variable");
    return after;
  }
};

inline Term whnf(const Signature& sig, const Term& t, std::uint64_t fuel = kDefaultFuel) {
  return Engine(sig, fuel).whnf(t);
}

inline Term snf(const Signature& sig, const Term& t, std::uint64_t fuel = kDefaultFuel) {
  return Engine(sig, fuel).snf(t);
}

inline bool are_convertible(const Signature& sig, const Term& a, const Term& b, std::uint64_t fuel = kDefaultFuel) {
  return Engine(sig, fuel).convertible(a, b);
}

inline std::optional<Substitution> match_pattern(const Pattern& p, const Term& t, const Signature& sig,
                                                 std::size_t arity, std::uint64_t fuel = kDefaultFuel) {
  Engine eng(sig, fuel);
  Substitution sigma(arity);
  if (!eng.match(p, t, sigma)) return std::nullopt;
  return sigma;
}

}  // namespace dk
