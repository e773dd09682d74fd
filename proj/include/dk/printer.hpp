#pragma once

// Pretty-printer producing `.dk` surface syntax that reparses to an
// alpha-equal term.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "dk/syntax.hpp"
#include "dk/term.hpp"

namespace dk {

namespace detail {

class TermPrinter {
 public:
  explicit TermPrinter(std::vector<std::string> names) : names_(std::move(names)) {}

  std::string operator()(const Term& t) {
    std::string out;
    print(t, Prec::Top, out);
    return out;
  }

 private:
  enum class Prec { Top, App, Atom };
  std::vector<std::string> names_;  // outermost first

  bool in_scope(const std::string& n) const { return std::find(names_.begin(), names_.end(), n) != names_.end(); }

  std::string fresh(std::string base) const {
    if (base.empty() || base == "Kind" || base == "Type" || base == "def") base = "x";
    if (!in_scope(base)) return base;
    for (std::size_t i = 0;; ++i) {
      std::string cand = base + std::to_string(i);
      if (!in_scope(cand)) return cand;
    }
  }

  std::string binder_name(const Term& t) const {
    const bool used = occurs(t.body(), 0);
    if (t.binder() == "_" && !used) return "_";
    return fresh(t.binder() == "_" ? "x" : t.binder());
  }

  void print(const Term& t, Prec p, std::string& out) {
    switch (t.tag()) {
      case TermKind::Kind: out += "Kind"; return;
      case TermKind::Type: out += "Type"; return;
      case TermKind::Const: out += t.name().str(); return;
      case TermKind::Var: {
        const std::size_t k = t.index();
        if (k < names_.size()) out += names_[names_.size() - 1 - k];
        else out += "#" + std::to_string(k - names_.size());
        return;
      }
      case TermKind::App: {
        if (p == Prec::Atom) out += "(";
        print(t.fun(), Prec::App, out);
        out += " ";
        print(t.arg(), Prec::Atom, out);
        if (p == Prec::Atom) out += ")";
        return;
      }
      case TermKind::Lam:
      case TermKind::Pi: {
        if (p != Prec::Top) out += "(";
        const std::string x = binder_name(t);
        const bool is_pi = t.tag() == TermKind::Pi;
        if (is_pi && x == "_") {
          print(t.domain(), Prec::App, out);
        } else {
          out += x;
          if (t.domain()) {
            out += " : ";
            print(t.domain(), Prec::App, out);
          }
        }
        out += is_pi ? " -> " : " => ";
        names_.push_back(x);
        print(t.body(), Prec::Top, out);
        names_.pop_back();
        if (p != Prec::Top) out += ")";
        return;
      }
    }
  }
};

}  // namespace detail

/// Renders `t`; `context` names the free variables, outermost first.
inline std::string print_term(const Term& t, std::vector<std::string> context = {}) {
  return detail::TermPrinter(std::move(context))(t);
}

inline std::string print_item(const SourceItem& item) {
  struct Visitor {
    std::string operator()(const StaticDecl& d) const { return d.name.name + " : " + print_term(d.type) + "."; }
    std::string operator()(const DefinableDecl& d) const {
      return "def " + d.name.name + " : " + print_term(d.type) + ".";
    }
    std::string operator()(const Definition& d) const {
      std::string s = "def " + d.name.name;
      if (d.type) s += " : " + print_term(d.type);
      return s + " := " + print_term(d.body) + ".";
    }
    std::string operator()(const RuleItem& r) const {
      std::vector<std::string> names;
      for (const auto& v : r.vars) {
        std::string n = v;
        for (std::size_t i = 0; std::find(names.begin(), names.end(), n) != names.end(); ++i)
          n = v + std::to_string(i);
        names.push_back(n);
      }
      std::string s = "[";
      for (std::size_t i = 0; i < names.size(); ++i) s += (i ? ", " : "") + names[i];
      return s + "] " + print_term(r.lhs, names) + " --> " + print_term(r.rhs, names) + ".";
    }
    std::string operator()(const EvalCommand& e) const { return "#EVAL " + print_term(e.term) + "."; }
    std::string operator()(const AssertConv& a) const {
      return "#ASSERT " + print_term(a.lhs) + " == " + print_term(a.rhs) + ".";
    }
  };
  return std::visit(Visitor{}, item.value);
}

/// One item per line.
inline std::string print_items(const std::vector<SourceItem>& items) {
  std::string out;
  for (const auto& it : items) {
    out += print_item(it);
    out += '\n';
  }
  return out;
}

}  // namespace dk
