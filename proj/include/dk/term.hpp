#pragma once

// Terms of the lambda-Pi calculus modulo rewriting.
//
// Bound variables are de Bruijn indices; globals are qualified constants.
// Terms are immutable and share structure through reference counting, so
// copying a Term is cheap and terms may be shared freely across threads.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dk {

/// Raised when a de Bruijn manipulation would produce an ill-scoped term.
/// This always indicates a bug in the caller, never bad user input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct QName {
  std::string module;
  std::string name;

  std::string str() const { return module + "." + name; }

  friend bool operator==(const QName&, const QName&) = default;
  friend auto operator<=>(const QName&, const QName&) = default;
};

struct QNameHash {
  std::size_t operator()(const QName& q) const noexcept {
    std::size_t h = std::hash<std::string>{}(q.module);
    return h ^ (std::hash<std::string>{}(q.name) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
};

enum class TermKind : std::uint8_t { Kind, Type, Const, Var, App, Lam, Pi };

class Term {
 public:
  /// The null term. Only used for an absent lambda domain or an absent
  /// optional type; never a valid subterm otherwise.
  Term() = default;

  static Term kind();
  static Term type();
  static Term constant(QName name);
  static Term var(std::size_t index);
  static Term app(Term fun, Term arg);
  static Term lam(std::string binder, Term domain, Term body);
  static Term pi(std::string binder, Term domain, Term codomain);

  explicit operator bool() const noexcept { return node_ != nullptr; }
  TermKind tag() const;

  const QName& name() const;          // Const
  std::size_t index() const;          // Var
  const Term& fun() const;            // App
  const Term& arg() const;            // App
  const std::string& binder() const;  // Lam, Pi
  const Term& domain() const;         // Lam (may be null), Pi
  const Term& body() const;           // Lam body, Pi codomain

  /// Every free index of this term is strictly below this bound.
  std::size_t loose_bound() const;

  bool is(TermKind k) const { return node_ && tag() == k; }
  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  TermKind tag = TermKind::Type;
  std::size_t index = 0;
  std::size_t loose = 0;
  QName qname{};
  std::string binder{};
  Term left{};   // App fun, Lam/Pi domain
  Term right{};  // App arg, Lam body, Pi codomain
};

inline Term Term::kind() {
  static const Term k{std::make_shared<const Node>(Node{TermKind::Kind})};
  return k;
}

inline Term Term::type() {
  static const Term t{std::make_shared<const Node>(Node{TermKind::Type})};
  return t;
}

inline Term Term::constant(QName name) {
  Node n{TermKind::Const};
  n.qname = std::move(name);
  return Term{std::make_shared<const Node>(std::move(n))};
}

inline Term Term::var(std::size_t index) {
  Node n{TermKind::Var};
  n.index = index;
  n.loose = index + 1;
  return Term{std::make_shared<const Node>(std::move(n))};
}

inline Term Term::app(Term fun, Term arg) {
  if (!fun || !arg) throw InvariantViolation("application with a null component");
  Node n{TermKind::App};
  n.loose = std::max(fun.loose_bound(), arg.loose_bound());
  n.left = std::move(fun);
  n.right = std::move(arg);
  return Term{std::make_shared<const Node>(std::move(n))};
}

namespace detail {
inline std::size_t under_binder(std::size_t loose) { return loose == 0 ? 0 : loose - 1; }
}  // namespace detail

inline Term Term::lam(std::string binder, Term domain, Term body) {
  if (!body) throw InvariantViolation("abstraction without a body");
  Node n{TermKind::Lam};
  n.loose = std::max(domain ? domain.loose_bound() : 0, detail::under_binder(body.loose_bound()));
  n.binder = std::move(binder);
  n.left = std::move(domain);
  n.right = std::move(body);
  return Term{std::make_shared<const Node>(std::move(n))};
}

inline Term Term::pi(std::string binder, Term domain, Term codomain) {
  if (!domain || !codomain) throw InvariantViolation("product with a null component");
  Node n{TermKind::Pi};
  n.loose = std::max(domain.loose_bound(), detail::under_binder(codomain.loose_bound()));
  n.binder = std::move(binder);
  n.left = std::move(domain);
  n.right = std::move(codomain);
  return Term{std::make_shared<const Node>(std::move(n))};
}

inline TermKind Term::tag() const { return node_->tag; }
inline const QName& Term::name() const { return node_->qname; }
inline std::size_t Term::index() const { return node_->index; }
inline const Term& Term::fun() const { return node_->left; }
inline const Term& Term::arg() const { return node_->right; }
inline const std::string& Term::binder() const { return node_->binder; }
inline const Term& Term::domain() const { return node_->left; }
inline const Term& Term::body() const { return node_->right; }
inline std::size_t Term::loose_bound() const { return node_ ? node_->loose : 0; }

inline Term constant(std::string module, std::string name) {
  return Term::constant(QName{std::move(module), std::move(name)});
}

inline Term apps(Term head, std::span<const Term> args) {
  for (const auto& a : args) head = Term::app(std::move(head), a);
  return head;
}

inline Term apps(Term head, std::initializer_list<Term> args) {
  return apps(std::move(head), std::span<const Term>(args.begin(), args.size()));
}

/// Head and arguments of an application spine, outermost argument last.
struct Spine {
  Term head;
  std::vector<Term> args;
};

inline Spine unfold_apps(const Term& t) {
  Spine s;
  Term cur = t;
  while (cur.is(TermKind::App)) {
    s.args.push_back(cur.arg());
    cur = cur.fun();
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = std::move(cur);
  return s;
}

// ---------------------------------------------------------------------------
// de Bruijn arithmetic

namespace detail {

inline Term shift_rec(const Term& t, std::size_t cutoff, std::ptrdiff_t amount) {
  if (!t || t.loose_bound() <= cutoff) return t;
  switch (t.tag()) {
    case TermKind::Var: {
      const auto k = static_cast<std::ptrdiff_t>(t.index());
      if (k + amount < static_cast<std::ptrdiff_t>(cutoff))
        throw InvariantViolation("negative shift captures free index " + std::to_string(k));
      return Term::var(static_cast<std::size_t>(k + amount));
    }
    case TermKind::App:
      return Term::app(shift_rec(t.fun(), cutoff, amount), shift_rec(t.arg(), cutoff, amount));
    case TermKind::Lam:
      return Term::lam(t.binder(), shift_rec(t.domain(), cutoff, amount),
                       shift_rec(t.body(), cutoff + 1, amount));
    case TermKind::Pi:
      return Term::pi(t.binder(), shift_rec(t.domain(), cutoff, amount),
                      shift_rec(t.body(), cutoff + 1, amount));
    default:
      return t;
  }
}

}  // namespace detail

/// Adds `amount` to every free index >= `cutoff`.
inline Term shift(const Term& t, std::size_t cutoff, std::ptrdiff_t amount) {
  if (amount == 0) return t;
  return detail::shift_rec(t, cutoff, amount);
}

/// Replaces the free index `target` by `replacement` and closes the gap by
/// decrementing the free indices above it. `replacement` lives in the context
/// with entry `target` removed.
inline Term subst(const Term& t, const Term& replacement, std::size_t target) {
  struct Walk {
    const Term& repl;
    Term go(const Term& u, std::size_t depth, std::size_t tgt) const {
      if (!u || u.loose_bound() <= tgt) return u;
      switch (u.tag()) {
        case TermKind::Var: {
          const std::size_t k = u.index();
          if (k == tgt) return shift(repl, 0, static_cast<std::ptrdiff_t>(depth));
          return k > tgt ? Term::var(k - 1) : u;
        }
        case TermKind::App:
          return Term::app(go(u.fun(), depth, tgt), go(u.arg(), depth, tgt));
        case TermKind::Lam:
          return Term::lam(u.binder(), go(u.domain(), depth, tgt), go(u.body(), depth + 1, tgt + 1));
        case TermKind::Pi:
          return Term::pi(u.binder(), go(u.domain(), depth, tgt), go(u.body(), depth + 1, tgt + 1));
        default:
          return u;
      }
    }
  };
  return Walk{replacement}.go(t, 0, target);
}

/// Simultaneous substitution of the free indices 0..values.size()-1:
/// index i becomes values[i]. Used to instantiate rule right-hand sides.
/// Indices at or above values.size() are an invariant violation.
inline Term instantiate(const Term& t, std::span<const Term> values) {
  struct Walk {
    std::span<const Term> vals;
    Term go(const Term& u, std::size_t depth) const {
      if (!u || u.loose_bound() <= depth) return u;
      switch (u.tag()) {
        case TermKind::Var: {
          const std::size_t j = u.index() - depth;
          if (j >= vals.size()) throw InvariantViolation("rule right-hand side escapes its context");
          return shift(vals[j], 0, static_cast<std::ptrdiff_t>(depth));
        }
        case TermKind::App:
          return Term::app(go(u.fun(), depth), go(u.arg(), depth));
        case TermKind::Lam:
          return Term::lam(u.binder(), go(u.domain(), depth), go(u.body(), depth + 1));
        case TermKind::Pi:
          return Term::pi(u.binder(), go(u.domain(), depth), go(u.body(), depth + 1));
        default:
          return u;
      }
    }
  };
  return Walk{values}.go(t, 0);
}

/// Whether free index `index` occurs in `t`.
inline bool occurs(const Term& t, std::size_t index) {
  if (!t || t.loose_bound() <= index) return false;
  switch (t.tag()) {
    case TermKind::Var:
      return t.index() == index;
    case TermKind::App:
      return occurs(t.fun(), index) || occurs(t.arg(), index);
    case TermKind::Lam:
    case TermKind::Pi:
      return occurs(t.domain(), index) || occurs(t.body(), index + 1);
    default:
      return false;
  }
}

/// Structural equality up to binder names. Lambda domains must be both
/// absent or both present and alpha-equal.
inline bool alpha_eq(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  if (!a || !b) return false;
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case TermKind::Kind:
    case TermKind::Type:
      return true;
    case TermKind::Const:
      return a.name() == b.name();
    case TermKind::Var:
      return a.index() == b.index();
    case TermKind::App:
      return alpha_eq(a.fun(), b.fun()) && alpha_eq(a.arg(), b.arg());
    case TermKind::Lam:
    case TermKind::Pi:
      return alpha_eq(a.domain(), b.domain()) && alpha_eq(a.body(), b.body());
  }
  return false;
}

/// Calls `f` on every constant occurring in `t`.
template <typename F>
void for_each_constant(const Term& t, F&& f) {
  if (!t) return;
  switch (t.tag()) {
    case TermKind::Const:
      f(t.name());
      break;
    case TermKind::App:
      for_each_constant(t.fun(), f);
      for_each_constant(t.arg(), f);
      break;
    case TermKind::Lam:
    case TermKind::Pi:
      for_each_constant(t.domain(), f);
      for_each_constant(t.body(), f);
      break;
    default:
      break;
  }
}

/// Typing context: a telescope of bound variables, innermost last.
///
/// The first `flat_prefix` entries form a block whose types may mention any
/// variable of the block (all of them scoped as if the block were bound at
/// once). Rule contexts use this: pattern variable types are discovered in
/// pattern order, not in declaration order.
class LocalContext {
 public:
  struct Entry {
    std::string name;
    Term type;
  };

  LocalContext() = default;

  static LocalContext flat(std::vector<Entry> block) {
    LocalContext ctx;
    ctx.flat_ = block.size();
    ctx.entries_ = std::move(block);
    return ctx;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  void push(std::string name, Term type) { entries_.push_back({std::move(name), std::move(type)}); }
  void pop() {
    if (entries_.size() <= flat_) throw InvariantViolation("popping into a flat context block");
    entries_.pop_back();
  }

  /// Type of `Var(index)`, expressed in the full current context.
  Term lookup(std::size_t index) const {
    if (index >= entries_.size()) throw InvariantViolation("unbound de Bruijn index " + std::to_string(index));
    const std::size_t pos = entries_.size() - 1 - index;
    const auto& e = entries_[pos];
    if (pos >= flat_) return shift(e.type, 0, static_cast<std::ptrdiff_t>(index + 1));
    return shift(e.type, 0, static_cast<std::ptrdiff_t>(entries_.size() - flat_));
  }

  const std::string& name(std::size_t index) const { return entries_[entries_.size() - 1 - index].name; }

  /// Binder names, outermost first; suitable for the pretty-printer.
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.name);
    return out;
  }

 private:
  std::vector<Entry> entries_;
  std::size_t flat_ = 0;
};

}  // namespace dk
