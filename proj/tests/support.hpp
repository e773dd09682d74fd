#pragma once

// Shared fixtures: corpus signatures and small term helpers.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dk/driver.hpp"
#include "dk/parser.hpp"
#include "dk/printer.hpp"
#include "dk/rewrite.hpp"
#include "dk/theories.hpp"
#include "dk/typing.hpp"

namespace dktest {

using namespace dk;

inline void admit_source(Signature& sig, const std::string& module, std::string_view text, bool standalone = false) {
  auto items = parse_file(text, module);
  if (standalone) items = standalone_variant(std::move(items));
  for (const auto& it : items) admit(sig, it);
}

/// Corpus admitted in manifest order up to and including `last`.
inline const Signature& corpus_upto(const std::string& last) {
  static std::map<std::string, Signature> cache;
  if (auto it = cache.find(last); it != cache.end()) return it->second;
  Signature sig;
  for (const auto& f : corpus_manifest().files) {
    TheoryFile tf = corpus_file(module_of_path(f));
    admit_source(sig, tf.module, tf.source);
    if (tf.module == last) break;
  }
  return cache.emplace(last, std::move(sig)).first->second;
}

inline const Signature& full_corpus() { return corpus_upto("interop"); }

/// HOL signature with the bridge hooks turned into plain declarations.
inline const Signature& standalone_hol() {
  static Signature sig = [] {
    Signature s;
    admit_source(s, "hol", corpus_hol().source, true);
    return s;
  }();
  return sig;
}

inline std::string read_test_file(const std::string& name) {
  return read_text_file(std::string(DK_TEST_DATA_DIR) + "/" + name);
}

/// Full corpus plus the test-only computational comparator.
inline const Signature& corpus_with_ccompare() {
  static Signature sig = [] {
    Signature s = full_corpus();
    admit_source(s, "ccompare", read_test_file("ccompare.dk"));
    return s;
  }();
  return sig;
}

inline Term T(const std::string& text) { return parse_term(text); }

}  // namespace dktest

namespace dktest {

/// Closed subterms of corpus types and definition bodies, in signature order.
inline std::vector<Term> corpus_subterms(std::size_t limit) {
  std::vector<Term> out;
  const Signature& sig = full_corpus();
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (out.size() >= limit || !t) return;
    if (t.loose_bound() == 0 && !t.is(TermKind::Type) && !t.is(TermKind::Kind)) out.push_back(t);
    switch (t.tag()) {
      case TermKind::App:
        walk(t.fun());
        walk(t.arg());
        break;
      case TermKind::Lam:
      case TermKind::Pi:
        walk(t.domain());
        walk(t.body());
        break;
      default: break;
    }
  };
  for (const auto& q : sig.order()) {
    const SignatureEntry* e = sig.find(q);
    walk(e->type);
    walk(e->body);
  }
  return out;
}

}  // namespace dktest
