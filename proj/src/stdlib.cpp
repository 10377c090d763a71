#include "kpc/stdlib.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;

namespace kpc {

const char* origin_name(Origin o) {
  switch (o) {
    case Origin::PaperVerbatim: return "paper-verbatim";
    case Origin::PaperTranslated: return "paper-translated";
    case Origin::Reconstructed: return "reconstructed";
  }
  return "?";
}

std::string default_stdlib_root() {
  if (const char* env = std::getenv("KPC_STDLIB"); env && *env) return env;
#ifdef KPC_DEFAULT_STDLIB
  return KPC_DEFAULT_STDLIB;
#else
  return "stdlib";
#endif
}

namespace {

std::optional<Origin> parse_origin(const std::string& word) {
  if (word == "paper-verbatim") return Origin::PaperVerbatim;
  if (word == "paper-translated") return Origin::PaperTranslated;
  if (word == "reconstructed") return Origin::Reconstructed;
  return std::nullopt;
}

// Scans comment lines for '% origin: <tag>'. Exactly one must be present.
Origin origin_of(const std::string& text, const std::string& path) {
  std::istringstream in(text);
  std::string line;
  std::optional<Origin> found;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t i = line.find_first_not_of(" \t");
    if (i == std::string::npos || line[i] != '%') continue;
    i = line.find_first_not_of(" \t", i + 1);
    if (i == std::string::npos || line.compare(i, 7, "origin:") != 0) continue;
    i = line.find_first_not_of(" \t", i + 7);
    size_t j = line.find_last_not_of(" \t\r");
    std::string word = i == std::string::npos ? "" : line.substr(i, j - i + 1);
    auto o = parse_origin(word);
    if (!o)
      throw Error(ErrKind::InvalidDeclaration, "unknown origin tag '" + word + "'", path, lineno);
    if (found)
      throw Error(ErrKind::InvalidDeclaration, "more than one origin tag", path, lineno);
    found = o;
  }
  if (!found)
    throw Error(ErrKind::InvalidDeclaration, "missing '% origin:' tag", path);
  return *found;
}

std::vector<std::string> files_with_ext(const fs::path& dir, const std::string& ext) {
  std::vector<std::string> out;
  if (!fs::is_directory(dir)) return out;
  for (auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Corpus load_corpus(std::string root) {
  Corpus c;
  c.root = root.empty() ? default_stdlib_root() : std::move(root);
  fs::path base(c.root);
  if (!fs::is_directory(base))
    throw Error(ErrKind::FileNotFound, "no such corpus directory '" + c.root + "'");

  for (auto& f : files_with_ext(base / "patterns", ".kpat")) {
    std::string text = read_text_file(f);
    c.files.push_back({f, "pattern", origin_of(text, f)});
    c.library.add_pattern_text(std::move(text), f);
  }
  c.library.finalize();

  for (auto& f : files_with_ext(base / "morphisms", ".kmor")) {
    std::string text = read_text_file(f);
    c.files.push_back({f, "morphism", origin_of(text, f)});
    c.library.add_morphism(parse_morphism(text, f));
  }

  for (auto& f : files_with_ext(base / "kbs", ".kman")) {
    std::string text = read_text_file(f);
    c.files.push_back({f, "kb", origin_of(text, f)});
    Manifest m = parse_manifest(text, f);
    if (c.manifests.count(m.kb_name))
      throw Error(ErrKind::DuplicateSignatureEntry, "kb '" + m.kb_name + "' defined twice", f);
    c.manifest_paths[m.kb_name] = f;
    c.manifests[m.kb_name] = std::move(m);
  }

  // Fact files are parsed on assembly; the tag rule still applies now.
  for (auto& f : files_with_ext(base / "facts", ".kfact"))
    c.files.push_back({f, "facts", origin_of(read_text_file(f), f)});

  return c;
}

}  // namespace kpc
