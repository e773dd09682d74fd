#pragma once

// Batch checking and evaluation on top of the kernel; the dkcheck tool is a
// thin shell around this.

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dk/parser.hpp"
#include "dk/printer.hpp"
#include "dk/rewrite.hpp"
#include "dk/theories.hpp"
#include "dk/typing.hpp"

namespace dk {

enum ExitStatus : int { kExitOk = 0, kExitRejected = 1, kExitError = 2 };

struct RunConfig {
  std::vector<std::string> files;
  std::string manifest;  // empty when not used
  std::uint64_t fuel = kDefaultFuel;
  bool raw_errors = false;
  bool standalone_hol = false;

  void validate() const {
    if (fuel == 0) throw ConfigError("fuel budget must be positive");
    if (files.empty() && manifest.empty()) throw ConfigError("no input files");
  }
};

struct RunResult {
  int status = kExitOk;
  std::string report;  // standard output
  std::string errors;  // standard error
};

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// One growing signature, fed file by file.
class Session {
 public:
  Session(const RunConfig& cfg, std::ostream& out, std::ostream& err)
      : cfg_(cfg), out_(out), err_(err) {}

  Signature& signature() { return sig_; }
  CheckOptions options() const { return {cfg_.fuel, cfg_.raw_errors}; }

  int load_path(const std::string& path) {
    std::string text;
    try {
      text = read_text_file(path);
    } catch (const ConfigError& e) {
      err_ << "error: " << e.what() << "\n";
      return kExitError;
    }
    return load_source(path, module_of_path(path), text);
  }

  int load_source(const std::string& label, const std::string& module, std::string_view text) {
    std::vector<SourceItem> items;
    try {
      items = parse_file(text, module);
    } catch (const SyntaxError& e) {
      err_ << "error: " << label << ":" << e.what() << "\n";
      // an unbound name is a rejection of the theory, not a malformed file
      return e.kind() == SyntaxErrorKind::Scope ? kExitRejected : kExitError;
    }
    if (cfg_.standalone_hol && module == "hol") items = standalone_variant(std::move(items));
    for (const auto& item : items) {
      if (int st = admit_one(label, item); st != kExitOk) return st;
    }
    out_ << "file: " << label << " (" << module << ") ok, " << items.size() << " items\n";
    return kExitOk;
  }

  int check_expect(const ExpectedType& ex) {
    std::string where = "expect " + ex.name.str();
    try {
      Term expected = parse_term(ex.type_text);
      const SignatureEntry* e = sig_.find(ex.name);
      if (!e) throw TypeError(TypeErrorKind::Unbound, "unknown constant " + ex.name.str());
      LocalContext ctx;
      TypeChecker tc(sig_, options());
      tc.require_sort(ctx, expected, true);
      Engine eng(sig_, cfg_.fuel);
      if (!eng.convertible(e->type, expected))
        throw TypeError(TypeErrorKind::Mismatch, "type of " + ex.name.str() + " is not convertible to " +
                                                     print_term(expected));
    } catch (const SyntaxError& e) {
      err_ << "error: " << where << ": " << e.what() << "\n";
      return kExitError;
    } catch (const TypeError& e) {
      err_ << "error: " << where << ": " << to_string(e.kind()) << ": " << e.message() << "\n";
      return kExitRejected;
    } catch (const FuelExhausted& e) {
      err_ << "error: " << where << ": fuel-exhausted: " << e.what() << "\n";
      return kExitRejected;
    }
    out_ << "theorem: " << ex.name.str() << " ok\n";
    return kExitOk;
  }

 private:
  int admit_one(const std::string& label, const SourceItem& item) {
    std::string where = label + ":" + item.pos.str();
    try {
      admit(sig_, item, options());
      if (auto* as = item.get<AssertConv>()) {
        if (!are_convertible(sig_, as->lhs, as->rhs, cfg_.fuel)) {
          err_ << "error: " << where << ": assertion failed: " << print_term(as->lhs) << " == " << print_term(as->rhs)
               << "\n";
          return kExitRejected;
        }
        out_ << "assert: " << where << " ok\n";
      } else if (auto* ev = item.get<EvalCommand>()) {
        out_ << "eval: " << where << " " << print_term(snf(sig_, ev->term, cfg_.fuel)) << "\n";
      }
    } catch (const TypeError& e) {
      err_ << "error: " << where << ": " << to_string(e.kind()) << ": " << e.message() << "\n";
      return kExitRejected;
    } catch (const FuelExhausted& e) {
      err_ << "error: " << where << ": fuel-exhausted: " << e.what() << "\n";
      return kExitRejected;
    } catch (const SyntaxError& e) {
      err_ << "error: " << where << ": " << e.what() << "\n";
      return kExitError;
    }
    return kExitOk;
  }

  RunConfig cfg_;
  std::ostream& out_;
  std::ostream& err_;
  Signature sig_;
};

namespace detail {

// Loads the manifest (if any) then the extra files. Expectations from the
// manifest are checked after every file has been admitted.
inline int load_all(Session& s, const RunConfig& cfg, std::ostream& err) {
  std::vector<std::string> paths;
  Manifest m;
  if (!cfg.manifest.empty()) {
    try {
      m = parse_manifest(read_text_file(cfg.manifest));
    } catch (const ConfigError& e) {
      err << "error: " << cfg.manifest << ": " << e.what() << "\n";
      return kExitError;
    }
    std::filesystem::path base = std::filesystem::path(cfg.manifest).parent_path();
    for (const auto& f : m.files) paths.push_back((base / f).string());
  }
  paths.insert(paths.end(), cfg.files.begin(), cfg.files.end());
  for (const auto& p : paths)
    if (int st = s.load_path(p); st != kExitOk) return st;
  for (const auto& ex : m.expects)
    if (int st = s.check_expect(ex); st != kExitOk) return st;
  return kExitOk;
}

inline int validated(const RunConfig& cfg, std::ostream& err) {
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}

}  // namespace detail

inline RunResult run_check(const RunConfig& cfg) {
  std::ostringstream out, err;
  RunResult r;
  r.status = detail::validated(cfg, err);
  if (r.status == kExitOk) {
    Session s(cfg, out, err);
    r.status = detail::load_all(s, cfg, err);
  }
  out << "status: " << (r.status == kExitOk ? "ok" : r.status == kExitRejected ? "failed" : "error") << "\n";
  r.report = out.str();
  r.errors = err.str();
  return r;
}

/// Definable head of a normal form: a symbol whose rules could not fire.
inline std::optional<QName> stuck_head(const Signature& sig, const Term& nf) {
  Spine sp = unfold_apps(nf);
  if (!sp.head.is(TermKind::Const)) return std::nullopt;
  const SignatureEntry* e = sig.find(sp.head.name());
  if (e && e->kind == EntryKind::Definable) return sp.head.name();
  return std::nullopt;
}

/// Follows a stuck Definable application into the arguments its rules
/// inspect, and returns the innermost head that has no rules to offer.
inline std::optional<QName> blocked_on(const Signature& sig, const Term& nf) {
  Spine sp = unfold_apps(nf);
  if (!sp.head.is(TermKind::Const)) return std::nullopt;
  const SignatureEntry* e = sig.find(sp.head.name());
  if (!e) return std::nullopt;
  if (e->kind != EntryKind::Definable) return sp.head.name();
  for (const auto& rule : e->rules) {
    for (std::size_t i = 0; i < rule.pattern_args.size() && i < sp.args.size(); ++i) {
      const Pattern& p = rule.pattern_args[i];
      if (p.kind != Pattern::Kind::Const) continue;
      Spine inner = unfold_apps(sp.args[i]);
      if (inner.head.is(TermKind::Const) && inner.head.name() == p.head) continue;
      if (auto q = blocked_on(sig, sp.args[i])) return q;
    }
  }
  return sp.head.name();
}

inline RunResult run_eval(const RunConfig& cfg, const std::string& term_text) {
  std::ostringstream out, err;
  RunResult r;
  r.status = detail::validated(cfg, err);
  if (r.status == kExitOk) {
    std::ostringstream quiet;
    Session s(cfg, quiet, err);
    r.status = detail::load_all(s, cfg, err);
    if (r.status == kExitOk) {
      try {
        Term t = parse_term(term_text);
        LocalContext ctx;
        (void)infer(s.signature(), ctx, t, s.options());
        Term nf = snf(s.signature(), t, cfg.fuel);
        out << "normal-form: " << print_term(nf) << "\n";
        if (auto h = stuck_head(s.signature(), nf)) out << "STUCK-HEAD: " << h->str() << "\n";
      } catch (const SyntaxError& e) {
        err << "error: <term>:" << e.what() << "\n";
        r.status = e.kind() == SyntaxErrorKind::Scope ? kExitRejected : kExitError;
      } catch (const TypeError& e) {
        err << "error: <term>: " << to_string(e.kind()) << ": " << e.message() << "\n";
        r.status = kExitRejected;
      } catch (const FuelExhausted& e) {
        err << "error: <term>: fuel-exhausted: budget " << e.limit() << " steps\n";
        r.status = kExitRejected;
      }
    }
  }
  r.report = out.str();
  r.errors = err.str();
  return r;
}

// Numerals and lists of HOL naturals as seen from the Coq side.

inline Term hol_numeral(unsigned n) {
  Term t = constant("nat", "zero");
  for (unsigned i = 0; i < n; ++i) t = Term::app(constant("nat", "suc"), t);
  return t;
}

inline Term nat_list(const std::vector<unsigned>& xs) {
  Term elt = constant("interop", "N");
  Term l = Term::app(constant("sort", "nil"), elt);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it)
    l = apps(constant("sort", "cons"), {elt, hol_numeral(*it), l});
  return l;
}

inline std::optional<unsigned> decode_numeral(const Term& t) {
  unsigned n = 0;
  Term cur = t;
  for (;;) {
    Spine sp = unfold_apps(cur);
    if (!sp.head.is(TermKind::Const)) return std::nullopt;
    if (sp.head.name() == QName{"nat", "zero"} && sp.args.empty()) return n;
    if (sp.head.name() != QName{"nat", "suc"} || sp.args.size() != 1) return std::nullopt;
    ++n;
    cur = sp.args[0];
  }
}

/// Reads back a normal-form list of numerals; nullopt if it is not one.
inline std::optional<std::vector<unsigned>> decode_nat_list(const Term& t) {
  std::vector<unsigned> out;
  Term cur = t;
  for (;;) {
    Spine sp = unfold_apps(cur);
    if (!sp.head.is(TermKind::Const)) return std::nullopt;
    if (sp.head.name() == QName{"Datatypes", "nil"} && sp.args.size() == 2) return out;
    if (sp.head.name() != QName{"Datatypes", "cons"} || sp.args.size() != 4) return std::nullopt;
    auto n = decode_numeral(sp.args[2]);
    if (!n) return std::nullopt;
    out.push_back(*n);
    cur = sp.args[3];
  }
}

struct StuckReport {
  std::string input;
  std::string normal_form;
  std::string head;
  bool cons_headed = false;
  std::optional<QName> stuck;
  std::optional<QName> blocked;
  std::optional<std::vector<unsigned>> values;

  std::string render() const {
    std::ostringstream o;
    o << "input: " << input << "\n";
    o << "normal-form: " << normal_form << "\n";
    o << "head: " << head << "\n";
    o << "cons-headed: " << (cons_headed ? "yes" : "no") << "\n";
    o << "stuck-head: " << (stuck ? stuck->str() : "none") << "\n";
    o << "blocked-on: " << (blocked ? blocked->str() : "none") << "\n";
    return o.str();
  }
};

/// Sorts `xs` with interop.insertion_sort and the given comparator and
/// reports the shape of the normal form.
inline StuckReport demo_stuckness(const Signature& sig, const std::vector<unsigned>& xs,
                                  const QName& comparator = {"nat", "compare"},
                                  std::uint64_t fuel = kDefaultFuel) {
  Term input = nat_list(xs);
  Term t = apps(constant("interop", "insertion_sort"), {Term::constant(comparator), input});
  Term nf = snf(sig, t, fuel);
  StuckReport r;
  std::ostringstream in;
  in << "interop.insertion_sort " << comparator.str() << " [";
  for (std::size_t i = 0; i < xs.size(); ++i) in << (i ? ", " : "") << xs[i];
  in << "]";
  r.input = in.str();
  r.normal_form = print_term(nf);
  Spine sp = unfold_apps(nf);
  r.head = sp.head.is(TermKind::Const) ? sp.head.name().str() : print_term(sp.head);
  r.cons_headed = sp.head.is(TermKind::Const) && sp.head.name() == QName{"Datatypes", "cons"};
  r.stuck = stuck_head(sig, nf);
  if (r.stuck) r.blocked = blocked_on(sig, nf);
  r.values = decode_nat_list(nf);
  return r;
}

}  // namespace dk
