#include "kpc/library.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kpc {

void PatternLibrary::add_pattern_text(std::string text, std::string filename) {
  pending_.push_back({std::move(text), std::move(filename)});
}

void PatternLibrary::add_morphism(MorphismSource m) {
  auto name = m.name;
  if (!morphisms_.emplace(name, std::move(m)).second)
    throw Error(ErrKind::DuplicateSourceKey, "morphism '" + name + "' defined twice");
}

const PatternSource& PatternLibrary::pattern(const std::string& name) const {
  auto it = patterns_.find(name);
  if (it == patterns_.end())
    throw Error(ErrKind::UnknownPattern, "pattern '" + name + "' is not in the library");
  return it->second;
}

const MorphismSource& PatternLibrary::morphism(const std::string& name) const {
  auto it = morphisms_.find(name);
  if (it == morphisms_.end())
    throw Error(ErrKind::UnknownMorphism, "morphism '" + name + "' is not in the library");
  return it->second;
}

std::vector<std::string> PatternLibrary::pattern_names() const {
  std::vector<std::string> out;
  for (auto& [n, _] : patterns_) out.push_back(n);
  return out;
}

std::vector<std::string> PatternLibrary::morphism_names() const {
  std::vector<std::string> out;
  for (auto& [n, _] : morphisms_) out.push_back(n);
  return out;
}

namespace {

// Depth-first topological order with cycle-path reporting.
struct TopoSorter {
  const std::map<std::string, std::vector<std::string>>& uses;
  std::map<std::string, int> state;  // 0 unseen, 1 on stack, 2 done
  std::vector<std::string> order;
  std::vector<std::string> stack;

  void visit(const std::string& n) {
    auto it = uses.find(n);
    if (it == uses.end()) throw Error(ErrKind::UnknownPattern, "pattern '" + n + "' is not in the library");
    int& st = state[n];
    if (st == 2) return;
    if (st == 1) {
      std::string path;
      auto from = std::find(stack.begin(), stack.end(), n);
      for (auto p = from; p != stack.end(); ++p) path += *p + " -> ";
      path += n;
      throw Error(ErrKind::CyclicUses, "cyclic uses: " + path);
    }
    st = 1;
    stack.push_back(n);
    for (auto& u : it->second) visit(u);
    stack.pop_back();
    st = 2;
    order.push_back(n);
  }
};

std::vector<std::string> topo_order(const std::map<std::string, std::vector<std::string>>& uses) {
  TopoSorter s{uses, {}, {}, {}};
  for (auto& [n, _] : uses) s.visit(n);
  return s.order;
}

}  // namespace

void PatternLibrary::finalize() {
  if (pending_.empty()) return;
  // Headers for everything pending plus what is already resolved.
  std::map<std::string, PatternHeader> headers;
  std::map<std::string, Pending> texts;
  for (auto& p : pending_) {
    PatternHeader h = scan_pattern_header(p.text, p.filename);
    if (patterns_.count(h.name) || headers.count(h.name))
      throw Error(ErrKind::DuplicateSignatureEntry, "pattern '" + h.name + "' defined twice",
                  p.filename);
    texts.emplace(h.name, p);
    headers.emplace(h.name, std::move(h));
  }
  pending_.clear();

  std::map<std::string, std::vector<std::string>> uses;
  for (auto& [n, p] : patterns_) uses[n] = p.uses;
  for (auto& [n, h] : headers) uses[n] = h.uses;
  std::vector<std::string> order = topo_order(uses);

  for (auto& name : order) {
    if (patterns_.count(name)) continue;
    Signature ambient = ambient_for_uses(headers.at(name).uses);
    auto& src = texts.at(name);
    PatternSource p = parse_pattern(src.text, &ambient, src.filename);
    if (p.name != name)
      throw Error(ErrKind::SyntaxError, "pattern name '" + p.name + "' does not match header scan",
                  src.filename);
    patterns_.emplace(name, std::move(p));
  }
}

Signature PatternLibrary::ambient_for_uses(const std::vector<std::string>& uses) const {
  Signature out;
  for (auto& u : uses) {
    FlatPattern f = flatten_pattern(u, *this);
    out = merge_signatures(out, f.signature);
  }
  return out;
}

Signature PatternLibrary::ambient_for(const std::string& name) const {
  return ambient_for_uses(pattern(name).uses);
}

Signature PatternLibrary::lenient_fact_signature() const {
  Signature out;
  auto take = [&out](const Signature& sig) {
    for (auto& [_, s] : sig)
      if (!out.contains_name(s.name)) out.declare(s);
  };
  for (auto& name : pattern_names()) take(flatten_pattern(name, *this).signature);
  for (auto& name : morphism_names()) {
    const MorphismSource& m = morphism(name);
    if (!has_pattern(m.source_pattern)) continue;
    FlatPattern src = flatten_pattern(m.source_pattern, *this);
    if (!validate_morphism(m, src, Signature{}).empty()) continue;
    take(complete_morphism(m, src).visible_image_signature());
  }
  return out;
}

std::vector<std::string> resolve_uses_order(const PatternLibrary& lib) {
  std::map<std::string, std::vector<std::string>> uses;
  for (auto& [n, p] : lib.patterns_) uses[n] = p.uses;
  return topo_order(uses);
}

FlatPattern flatten_pattern(const std::string& name, const PatternLibrary& lib) {
  FlatPattern out;
  out.name = name;

  // Dependencies-first walk; each pattern contributes once regardless of
  // how many paths reach it.
  std::vector<std::string> order;
  {
    std::map<std::string, std::vector<std::string>> uses;
    std::vector<std::string> work{name};
    while (!work.empty()) {
      std::string n = work.back();
      work.pop_back();
      if (uses.count(n)) continue;
      const PatternSource& p = lib.pattern(n);
      uses[n] = p.uses;
      for (auto& u : p.uses) work.push_back(u);
    }
    order = topo_order(uses);
  }

  std::set<Clause> seen;  // canonical forms, set semantics
  for (auto& n : order) {
    const PatternSource& p = lib.pattern(n);
    out.signature = merge_signatures(out.signature, p.declared_signature);
    for (auto& c : p.clauses) {
      if (!seen.insert(canonical_clause(c)).second) continue;
      out.clauses.push_back(c);
      out.clause_origins.push_back(n);
    }
  }

  for (auto& c : out.clauses) {
    auto report = check_clause_safety(c, out.signature);
    if (!report.empty())
      throw Error(ErrKind::UnsafeClause, "in pattern '" + name + "', clause '" + clause_text(c) +
                                             "': " + safety_violation_text(report.front()));
  }
  return out;
}

PatternSource flat_to_source(const FlatPattern& p) {
  PatternSource out;
  out.name = p.name;
  out.declared_signature = p.signature;
  out.clauses = p.clauses;
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(std::filesystem::path(path), std::ios::binary);
  if (!in) throw Error(ErrKind::FileNotFound, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

namespace {

std::string read_file(const std::filesystem::path& path) { return read_text_file(path.string()); }

}  // namespace

AssembledKB assemble_kb(const Manifest& man, const PatternLibrary& lib) {
  AssembledKB kb;
  kb.name = man.kb_name;

  int index = 0;
  for (auto& app : man.applications) {
    auto annotate = [&](const Error& e) -> Error {
      return Error(e.kind,
                   "application #" + std::to_string(index + 1) + " (" + app.name + "): " + e.what(),
                   e.file, e.line, e.col);
    };
    try {
      if (app.kind == Manifest::Application::Kind::Include) {
        FlatPattern f = flatten_pattern(app.name, lib);
        kb.signature = merge_signatures(kb.signature, f.signature);
        for (size_t i = 0; i < f.clauses.size(); ++i) {
          kb.rules.push_back(f.clauses[i]);
          kb.rule_origins.push_back({f.clause_origins[i], "", index, ""});
        }
      } else {
        const MorphismSource& m = lib.morphism(app.name);
        FlatPattern src = flatten_pattern(m.source_pattern, lib);
        auto issues = validate_morphism(m, src, kb.signature);
        if (!issues.empty()) {
          std::string all;
          for (auto& iss : issues) all += (all.empty() ? "" : "; ") + iss.message;
          throw Error(issues.front().kind, all);
        }
        for (auto& w : lint_morphism_overlaps(m, src, kb.signature)) kb.warnings.push_back(w);
        ResolvedMorphism r = complete_morphism(m, src, index);
        for (auto& [s, img] : r.mapping) {
          if (r.hidden.count(s) && kb.signature.contains_name(img.name))
            throw Error(ErrKind::HiddenNameCollision,
                        "generated name '" + img.name + "' already declared in the target");
        }
        Theory th = apply_morphism(r);
        kb.signature = merge_signatures(kb.signature, th.signature);
        for (size_t i = 0; i < th.clauses.size(); ++i) {
          kb.rules.push_back(th.clauses[i]);
          kb.rule_origins.push_back({r.source.clause_origins[i], m.name, index, ""});
        }
      }
    } catch (const Error& e) {
      throw annotate(e);
    }
    ++index;
  }

  auto resolve_path = [&man](const std::string& rel) {
    std::filesystem::path p(rel);
    if (p.is_absolute()) return p;
    return std::filesystem::path(man.base_dir.empty() ? "." : man.base_dir) / p;
  };

  for (auto& ff : man.fact_files) {
    auto path = resolve_path(ff);
    std::vector<Atom> atoms = parse_facts(read_file(path), &kb.signature, path.string());
    for (auto& a : atoms) {
      // Unknown arity-0 constants are fact-base individuals.
      for (auto& t : a.args) {
        if (!is_const(t)) continue;
        const Symbol& s = std::get<Symbol>(t);
        if (!kb.signature.contains_name(s.name)) kb.signature.declare(s);
      }
      kb.facts.push_back(a);
      kb.fact_origins.push_back(ff);
    }
  }

  for (auto& rf : man.rule_files) {
    auto path = resolve_path(rf);
    for (auto& c : parse_rules(read_file(path), kb.signature, path.string())) {
      kb.rules.push_back(c);
      kb.rule_origins.push_back({"", "", -1, rf});
    }
  }

  for (auto& c : kb.rules) {
    auto report = check_clause_safety(c, kb.signature);
    if (!report.empty())
      throw Error(ErrKind::UnsafeClause, "kb '" + kb.name + "', rule '" + clause_text(c) +
                                             "': " + safety_violation_text(report.front()));
  }
  return kb;
}

std::string export_inclusion_graph(const PatternLibrary& lib,
                                   const std::vector<Manifest>& mans) {
  std::set<std::string> nodes;
  std::set<std::string> bold_edges;  // "a" -> "b" [style=bold]
  std::set<std::string> thin_edges;

  auto q = [](const std::string& s) { return "\"" + s + "\""; };

  for (auto& name : lib.pattern_names()) {
    nodes.insert(name);
    for (auto& u : lib.pattern(name).uses) thin_edges.insert(q(u) + " -> " + q(name));
  }
  for (auto& name : lib.morphism_names()) {
    nodes.insert(name);
    bold_edges.insert(q(lib.morphism(name).source_pattern) + " -> " + q(name));
  }
  for (auto& man : mans) {
    nodes.insert(man.kb_name);
    for (auto& app : man.applications) thin_edges.insert(q(app.name) + " -> " + q(man.kb_name));
  }

  std::ostringstream os;
  os << "digraph patterns {\n";
  for (auto& n : nodes) os << "  " << q(n) << ";\n";
  for (auto& e : thin_edges) os << "  " << e << ";\n";
  for (auto& e : bold_edges) os << "  " << e << " [style=bold];\n";
  os << "}\n";
  return os.str();
}

}  // namespace kpc
