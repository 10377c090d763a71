#pragma once
// Bundled pattern corpus: locating, loading and validating the standard
// library shipped with the tools.

#include <map>
#include <string>
#include <vector>

#include "kpc/library.hpp"

namespace kpc {

// Provenance class every corpus file must declare in a '% origin:' header
// comment. Exactly one tag per file.
enum class Origin { PaperVerbatim, PaperTranslated, Reconstructed };

const char* origin_name(Origin o);

struct CorpusFile {
  std::string path;  // absolute or root-relative as discovered
  std::string kind;  // "pattern", "morphism", "kb", "facts"
  Origin origin;
};

struct Corpus {
  std::string root;
  PatternLibrary library;
  std::map<std::string, Manifest> manifests;       // by kb name
  std::map<std::string, std::string> manifest_paths;
  std::vector<CorpusFile> files;                   // path order per kind
};

// KPC_STDLIB env var if set, else the compiled-in default, else "stdlib".
std::string default_stdlib_root();

// Loads patterns/, morphisms/ and kbs/ under root (default_stdlib_root()
// when empty). Enforces the one-origin-tag rule on every .kpat, .kmor,
// .kman and .kfact file. Throws on parse errors, duplicate names, missing
// or repeated tags (InvalidDeclaration).
Corpus load_corpus(std::string root = {});

}  // namespace kpc
