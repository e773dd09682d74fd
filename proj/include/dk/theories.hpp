#pragma once

// The shipped `.dk` corpus, the manifest format, and the standalone variant
// of the HOL signature.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dk/parser.hpp"
#include "dk/syntax.hpp"

#if __has_include("dk/corpus_data.hpp")
#include "dk/corpus_data.hpp"
#define DK_HAVE_EMBEDDED_CORPUS 1
#endif

namespace dk {

struct TheoryFile {
  std::string module;
  std::string source;
  std::vector<QName> exports;
};

/// Bad manifest or command-line configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<QName> exported_names(const std::vector<SourceItem>& items) {
  std::vector<QName> out;
  for (const auto& it : items)
    if (const QName* q = declared_name(it)) out.push_back(*q);
  return out;
}

inline TheoryFile make_theory(std::string module, std::string source) {
  TheoryFile f{std::move(module), std::move(source), {}};
  f.exports = exported_names(parse_file(f.source, f.module));
  return f;
}

// Symbols of hol.dk that become plain declarations without the bridge.
// `term` keeps its function-space rule and so stays definable.
inline bool standalone_static(const QName& q) {
  return q.module == "hol" && (q.name == "type" || q.name == "bool" || q.name == "arrow" || q.name == "proof");
}

inline std::vector<SourceItem> standalone_variant(std::vector<SourceItem> items) {
  for (auto& it : items) {
    if (auto* d = it.get<DefinableDecl>(); d && standalone_static(d->name))
      it.value = StaticDecl{d->name, d->type};
  }
  return items;
}

struct ExpectedType {
  QName name;
  std::string type_text;
  std::size_t line = 0;
};

struct Manifest {
  std::vector<std::string> files;  // as written, relative to the manifest
  std::vector<ExpectedType> expects;
};

/// One entry per line; `#` starts a comment. `expect <name> : <type>` adds a
/// theorem-type assertion, any other line names a file.
inline Manifest parse_manifest(std::string_view text) {
  Manifest m;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    if (line.rfind("expect", 0) == 0 && line.size() > 6 && (line[6] == ' ' || line[6] == '\t')) {
      std::string rest = line.substr(7);
      auto colon = rest.find(" : ");
      if (colon == std::string::npos)
        throw ConfigError("manifest line " + std::to_string(lineno) + ": expected `expect <name> : <type>`");
      std::string name = rest.substr(0, colon);
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t") + 1);
      auto dot = name.find('.');
      if (dot == std::string::npos || dot == 0 || dot + 1 == name.size())
        throw ConfigError("manifest line " + std::to_string(lineno) + ": `" + name + "` is not a qualified name");
      m.expects.push_back({{name.substr(0, dot), name.substr(dot + 1)}, rest.substr(colon + 3), lineno});
      continue;
    }
    if (line.find_first_of(" \t") != std::string::npos)
      throw ConfigError("manifest line " + std::to_string(lineno) + ": unexpected `" + line + "`");
    m.files.push_back(line);
  }
  return m;
}

inline std::string module_of_path(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

#ifdef DK_HAVE_EMBEDDED_CORPUS

inline TheoryFile corpus_file(std::string_view module) {
  for (const auto& f : corpus_data::files)
    if (module == f.module) return make_theory(f.module, f.text);
  throw std::out_of_range("no corpus file for module " + std::string(module));
}

inline std::vector<TheoryFile> corpus_files() {
  std::vector<TheoryFile> out;
  for (const auto& f : corpus_data::files) out.push_back(make_theory(f.module, f.text));
  return out;
}

inline Manifest corpus_manifest() { return parse_manifest(corpus_data::manifest); }

inline TheoryFile corpus_coq() { return corpus_file("coq"); }
inline TheoryFile corpus_logic() { return corpus_file("Logic"); }
inline TheoryFile corpus_datatypes() { return corpus_file("Datatypes"); }
inline TheoryFile corpus_holtypes() { return corpus_file("holtypes"); }
inline TheoryFile corpus_sort() { return corpus_file("sort"); }
inline TheoryFile corpus_hol() { return corpus_file("hol"); }
inline TheoryFile corpus_bridge() { return corpus_file("bridge"); }
inline TheoryFile corpus_bool() { return corpus_file("bool"); }
inline TheoryFile corpus_holnat() { return corpus_file("nat"); }
inline TheoryFile corpus_interop() { return corpus_file("interop"); }

#endif

}  // namespace dk
