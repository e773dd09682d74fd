#pragma once

// Random de Bruijn terms and an independent named-variable implementation
// of capture-avoiding substitution to compare against.

#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dk/term.hpp"

namespace dktest {

using dk::Term;
using dk::TermKind;

// Binder names come from a small pool so that shadowing and capture
// situations actually arise once the terms are named.
inline const std::vector<std::string> kPool = {"x0", "x1", "x2", "x3"};

class TermGen {
 public:
  explicit TermGen(unsigned seed) : rng_(seed) {}

  Term operator()(std::size_t scope, int depth) {
    int choice = pick(depth <= 0 ? 3 : 7);
    switch (choice) {
      case 0:
        if (scope > 0) return Term::var(pick(static_cast<int>(scope)));
        [[fallthrough]];
      case 1: return dk::constant("c", "k" + std::to_string(pick(3)));
      case 2: return pick(4) == 0 ? Term::type() : (*this)(scope, 0);
      case 3:
      case 4: return Term::app((*this)(scope, depth - 1), (*this)(scope, depth - 1));
      case 5: {
        Term dom = pick(2) ? (*this)(scope, depth - 1) : Term{};
        return Term::lam(kPool[pick(4)], dom, (*this)(scope + 1, depth - 1));
      }
      default:
        return Term::pi(kPool[pick(4)], (*this)(scope, depth - 1), (*this)(scope + 1, depth - 1));
    }
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  std::mt19937 rng_;
};

struct Named;
using NamedPtr = std::shared_ptr<const Named>;

struct Named {
  enum Kind { Type, Const, Var, App, Lam, Pi } kind;
  std::string name;  // constant, variable or binder name
  NamedPtr a, b;     // fun/arg, or domain/body (domain may be null for Lam)
};

inline NamedPtr mk(Named::Kind k, std::string n = {}, NamedPtr a = {}, NamedPtr b = {}) {
  return std::make_shared<const Named>(Named{k, std::move(n), std::move(a), std::move(b)});
}

inline void free_indices(const Term& t, std::size_t depth, std::set<std::size_t>& out) {
  switch (t.tag()) {
    case TermKind::Var:
      if (t.index() >= depth) out.insert(t.index() - depth);
      return;
    case TermKind::App:
      free_indices(t.fun(), depth, out);
      free_indices(t.arg(), depth, out);
      return;
    case TermKind::Lam:
    case TermKind::Pi:
      if (t.domain()) free_indices(t.domain(), depth, out);
      free_indices(t.body(), depth + 1, out);
      return;
    default: return;
  }
}

/// `env` lists names outermost first. Binder names are kept when that does
/// not capture a reference to an outer variable, otherwise primed.
inline NamedPtr to_named(const Term& t, std::vector<std::string>& env) {
  switch (t.tag()) {
    case TermKind::Type: return mk(Named::Type);
    case TermKind::Kind: return mk(Named::Type, "Kind");
    case TermKind::Const: return mk(Named::Const, t.name().str());
    case TermKind::Var: return mk(Named::Var, env[env.size() - 1 - t.index()]);
    case TermKind::App: return mk(Named::App, {}, to_named(t.fun(), env), to_named(t.arg(), env));
    case TermKind::Lam:
    case TermKind::Pi: {
      NamedPtr dom = t.domain() ? to_named(t.domain(), env) : nullptr;
      std::set<std::size_t> fi;
      free_indices(t.body(), 1, fi);
      std::string x = t.binder();
      auto clashes = [&](const std::string& c) {
        for (auto k : fi)
          if (env[env.size() - 1 - k] == c) return true;
        return false;
      };
      while (clashes(x)) x += "'";
      env.push_back(x);
      NamedPtr body = to_named(t.body(), env);
      env.pop_back();
      return mk(t.is(TermKind::Lam) ? Named::Lam : Named::Pi, x, dom, body);
    }
  }
  return nullptr;
}

inline Term from_named(const NamedPtr& n, std::vector<std::string>& env) {
  switch (n->kind) {
    case Named::Type: return n->name == "Kind" ? Term::kind() : Term::type();
    case Named::Const: {
      auto dot = n->name.find('.');
      return dk::constant(n->name.substr(0, dot), n->name.substr(dot + 1));
    }
    case Named::Var:
      for (std::size_t k = env.size(); k-- > 0;)
        if (env[k] == n->name) return Term::var(env.size() - 1 - k);
      throw std::logic_error("free name " + n->name);
    case Named::App: return Term::app(from_named(n->a, env), from_named(n->b, env));
    case Named::Lam:
    case Named::Pi: {
      Term dom = n->a ? from_named(n->a, env) : Term{};
      env.push_back(n->name);
      Term body = from_named(n->b, env);
      env.pop_back();
      return n->kind == Named::Lam ? Term::lam(n->name, dom, body) : Term::pi(n->name, dom, body);
    }
  }
  return {};
}

inline void free_names(const NamedPtr& n, std::set<std::string>& out, std::set<std::string>& bound) {
  if (!n) return;
  switch (n->kind) {
    case Named::Var:
      if (!bound.count(n->name)) out.insert(n->name);
      return;
    case Named::App:
      free_names(n->a, out, bound);
      free_names(n->b, out, bound);
      return;
    case Named::Lam:
    case Named::Pi: {
      free_names(n->a, out, bound);
      bool had = bound.count(n->name);
      bound.insert(n->name);
      free_names(n->b, out, bound);
      if (!had) bound.erase(n->name);
      return;
    }
    default: return;
  }
}

inline std::set<std::string> free_names(const NamedPtr& n) {
  std::set<std::string> out, bound;
  free_names(n, out, bound);
  return out;
}

/// Textbook capture-avoiding substitution t[x := r].
inline NamedPtr named_subst(const NamedPtr& t, const std::string& x, const NamedPtr& r) {
  if (!t) return t;
  switch (t->kind) {
    case Named::Var: return t->name == x ? r : t;
    case Named::App: return mk(Named::App, {}, named_subst(t->a, x, r), named_subst(t->b, x, r));
    case Named::Lam:
    case Named::Pi: {
      NamedPtr dom = named_subst(t->a, x, r);
      if (t->name == x) return mk(t->kind, t->name, dom, t->b);
      auto fr = free_names(r);
      std::string y = t->name;
      NamedPtr body = t->b;
      if (fr.count(y)) {
        auto fb = free_names(body);
        std::string z = y;
        while (fr.count(z) || fb.count(z) || z == x) z += "_";
        body = named_subst(body, y, mk(Named::Var, z));
        y = z;
      }
      return mk(t->kind, y, dom, named_subst(body, x, r));
    }
    default: return t;
  }
}

}  // namespace dktest
