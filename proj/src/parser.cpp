#include "kpc/parser.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <sstream>

namespace kpc {

namespace {

bool is_keyword(const std::string& s) {
  static const std::set<std::string> kw = {
      "pattern", "morphism", "kb",     "summary", "description", "uses",
      "signature", "axioms", "concept", "individual", "pred",    "source",
      "map",     "hide",     "apply",  "include", "facts",       "rules",
      "is"};
  return kw.count(s) != 0;
}

enum class T {
  End, Ident, Hidden, Int, Str,
  LBrace, RBrace, LParen, RParen, Comma, Dot, Slash,
  Arrow, If, QueryMark, Neg,
  Lt, Le, Gt, Ge, Eq, Ne,
  Plus, Minus, Star, IntDiv,
};

const char* tok_name(T t) {
  switch (t) {
    case T::End: return "end of input";
    case T::Ident: return "identifier";
    case T::Hidden: return "quoted name";
    case T::Int: return "integer";
    case T::Str: return "string";
    case T::LBrace: return "'{'";
    case T::RBrace: return "'}'";
    case T::LParen: return "'('";
    case T::RParen: return "')'";
    case T::Comma: return "','";
    case T::Dot: return "'.'";
    case T::Slash: return "'/'";
    case T::Arrow: return "'->'";
    case T::If: return "':-'";
    case T::QueryMark: return "'?-'";
    case T::Neg: return "'\\+'";
    case T::Lt: return "'<'";
    case T::Le: return "'<='";
    case T::Gt: return "'>'";
    case T::Ge: return "'>='";
    case T::Eq: return "'='";
    case T::Ne: return "'\\='";
    case T::Plus: return "'+'";
    case T::Minus: return "'-'";
    case T::Star: return "'*'";
    case T::IntDiv: return "'//'";
  }
  return "?";
}

struct Token {
  T t;
  std::string text;
  long long num = 0;
  int line = 1;
  int col = 1;
};

struct Lexer {
  const std::string& src;
  std::string file;
  size_t pos = 0;
  int line = 1, col = 1;

  Lexer(const std::string& s, std::string f) : src(s), file(std::move(f)) {}

  [[noreturn]] void fail(const std::string& msg, int l, int c) {
    throw Error(ErrKind::SyntaxError, msg, file, l, c);
  }

  char peek(size_t off = 0) const { return pos + off < src.size() ? src[pos + off] : '\0'; }

  char advance() {
    char c = src[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  static bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::vector<Token> lex() {
    std::vector<Token> out;
    for (;;) {
      while (pos < src.size()) {
        char c = peek();
        if (c == '%') {
          while (pos < src.size() && peek() != '\n') advance();
        } else if (std::isspace(static_cast<unsigned char>(c))) {
          advance();
        } else {
          break;
        }
      }
      int l = line, c0 = col;
      if (pos >= src.size()) {
        out.push_back({T::End, "", 0, l, c0});
        return out;
      }
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(peek())))
          num += advance();
        if (word_char(peek())) fail("malformed number '" + num + peek() + "...'", l, c0);
        try {
          out.push_back({T::Int, num, std::stoll(num), l, c0});
        } catch (const std::exception&) {
          fail("integer literal out of range: " + num, l, c0);
        }
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string id;
        for (;;) {
          while (pos < src.size() && word_char(peek())) id += advance();
          if (peek() == '-' && word_char(peek(1))) {
            id += advance();  // internal hyphen
            continue;
          }
          break;
        }
        out.push_back({T::Ident, id, 0, l, c0});
        continue;
      }
      if (c == '\'') {
        advance();
        std::string name;
        while (pos < src.size() && peek() != '\'' && peek() != '\n') name += advance();
        if (peek() != '\'') fail("unterminated quoted name", l, c0);
        advance();
        if (!is_hidden_name(name))
          fail("quoted names are reserved for hidden symbols ('hidden:...'): '" + name + "'", l,
               c0);
        out.push_back({T::Hidden, name, 0, l, c0});
        continue;
      }
      if (c == '"') {
        advance();
        std::string s;
        while (pos < src.size() && peek() != '"' && peek() != '\n') s += advance();
        if (peek() != '"') fail("unterminated string", l, c0);
        advance();
        out.push_back({T::Str, s, 0, l, c0});
        continue;
      }
      advance();
      switch (c) {
        case '{': out.push_back({T::LBrace, "{", 0, l, c0}); break;
        case '}': out.push_back({T::RBrace, "}", 0, l, c0}); break;
        case '(': out.push_back({T::LParen, "(", 0, l, c0}); break;
        case ')': out.push_back({T::RParen, ")", 0, l, c0}); break;
        case ',': out.push_back({T::Comma, ",", 0, l, c0}); break;
        case '.': out.push_back({T::Dot, ".", 0, l, c0}); break;
        case '+': out.push_back({T::Plus, "+", 0, l, c0}); break;
        case '*': out.push_back({T::Star, "*", 0, l, c0}); break;
        case '=': out.push_back({T::Eq, "=", 0, l, c0}); break;
        case '/':
          if (peek() == '/') {
            advance();
            out.push_back({T::IntDiv, "//", 0, l, c0});
          } else {
            out.push_back({T::Slash, "/", 0, l, c0});
          }
          break;
        case '-':
          if (peek() == '>') {
            advance();
            out.push_back({T::Arrow, "->", 0, l, c0});
          } else {
            out.push_back({T::Minus, "-", 0, l, c0});
          }
          break;
        case ':':
          if (peek() == '-') {
            advance();
            out.push_back({T::If, ":-", 0, l, c0});
          } else {
            fail("stray ':'", l, c0);
          }
          break;
        case '?':
          if (peek() == '-') {
            advance();
            out.push_back({T::QueryMark, "?-", 0, l, c0});
          } else {
            fail("stray '?'", l, c0);
          }
          break;
        case '\\':
          if (peek() == '+') {
            advance();
            out.push_back({T::Neg, "\\+", 0, l, c0});
          } else if (peek() == '=') {
            advance();
            out.push_back({T::Ne, "\\=", 0, l, c0});
          } else {
            fail("stray '\\'", l, c0);
          }
          break;
        case '<':
          if (peek() == '=') {
            advance();
            out.push_back({T::Le, "<=", 0, l, c0});
          } else {
            out.push_back({T::Lt, "<", 0, l, c0});
          }
          break;
        case '>':
          if (peek() == '=') {
            advance();
            out.push_back({T::Ge, ">=", 0, l, c0});
          } else {
            out.push_back({T::Gt, ">", 0, l, c0});
          }
          break;
        default:
          fail(std::string("unexpected character '") + c + "'", l, c0);
      }
    }
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t i = 0;
  std::string file;

  Parser(const std::string& text, std::string f) : file(std::move(f)) {
    Lexer lx(text, file);
    toks = lx.lex();
  }

  const Token& peek(size_t off = 0) const {
    size_t j = std::min(i + off, toks.size() - 1);
    return toks[j];
  }

  const Token& next() {
    const Token& t = toks[std::min(i, toks.size() - 1)];
    if (i < toks.size() - 1) ++i;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, const Token& at,
                         ErrKind kind = ErrKind::SyntaxError) {
    throw Error(kind, msg, file, at.line, at.col);
  }

  [[noreturn]] void expected(const std::string& what) {
    const Token& t = peek();
    std::string found = t.t == T::End ? std::string(tok_name(T::End))
                                      : std::string(tok_name(t.t)) +
                                            (t.text.empty() ? "" : " '" + t.text + "'");
    fail("expected " + what + ", found " + found, t);
  }

  Token expect(T t) {
    if (peek().t != t) expected(tok_name(t));
    return next();
  }

  bool accept(T t) {
    if (peek().t != t) return false;
    next();
    return true;
  }

  bool at_kw(const char* kw) const { return peek().t == T::Ident && peek().text == kw; }

  void expect_kw(const char* kw) {
    if (!at_kw(kw)) expected(std::string("'") + kw + "'");
    next();
  }

  // A fresh user-facing name (pattern/morphism/kb or declared symbol).
  std::string name_token() {
    if (peek().t != T::Ident) expected("name");
    Token t = next();
    if (is_keyword(t.text)) fail("keyword '" + t.text + "' cannot be used as a name", t);
    return t.text;
  }

  // A symbol reference; hidden names allowed (round-tripped engine output).
  std::string symbol_token() {
    if (peek().t == T::Hidden) return next().text;
    return name_token();
  }

  // --- clause parsing against a resolution environment -------------------

  const Signature* env = nullptr;
  // Fact mode: undeclared lowercase identifiers become provisional
  // individuals, and undeclared predicates are provisionally declared.
  bool provisional = false;
  // Query mode: undeclared predicates report UnknownPredicate instead.
  bool query_mode = false;

  Symbol resolve_predicate(const Token& t, int arity) {
    if (const Symbol* s = env ? env->find(t.text) : nullptr) {
      if (s->kind != SymbolKind::Predicate)
        fail("'" + t.text + "' is declared as a " + symbolkind_name(s->kind) +
                 " but used as a predicate",
             t, ErrKind::UndeclaredSymbolInAxiom);
      if (s->arity != arity)
        fail("predicate '" + t.text + "' has arity " + std::to_string(s->arity) + " but is used with " +
                 std::to_string(arity) + " argument(s)",
             t, ErrKind::ArityMismatch);
      return *s;
    }
    if (provisional) return make_pred(t.text, arity);
    fail("predicate '" + t.text + "' is not declared", t,
         query_mode ? ErrKind::UnknownPredicate : ErrKind::UndeclaredSymbolInAxiom);
  }

  Term resolve_term(const Token& t) {
    if (t.t == T::Int) return t.num;
    if (const Symbol* s = env ? env->find(t.text) : nullptr) {
      if (s->kind == SymbolKind::Predicate)
        fail("predicate '" + t.text + "' cannot be used as a term", t,
             ErrKind::UndeclaredSymbolInAxiom);
      return *s;
    }
    if (t.t == T::Hidden)
      fail("hidden symbol '" + t.text + "' is not declared", t,
           ErrKind::UndeclaredSymbolInAxiom);
    if (std::isupper(static_cast<unsigned char>(t.text[0]))) return Variable{t.text};
    if (provisional) return make_individual(t.text);
    fail("symbol '" + t.text + "' is not declared", t, ErrKind::UndeclaredSymbolInAxiom);
  }

  Term parse_term() {
    if (peek().t == T::Minus && peek(1).t == T::Int) {
      next();
      return -next().num;
    }
    if (peek().t == T::Int) return next().num;
    if (peek().t == T::Hidden) return resolve_term(next());
    if (peek().t == T::Ident) {
      Token t = next();
      if (is_keyword(t.text)) fail("keyword '" + t.text + "' cannot be used as a term", t);
      return resolve_term(t);
    }
    expected("term");
  }

  Atom parse_atom_tail(const Token& pred_tok) {
    expect(T::LParen);
    std::vector<Term> args;
    args.push_back(parse_term());
    while (accept(T::Comma)) args.push_back(parse_term());
    expect(T::RParen);
    Atom a;
    a.pred = resolve_predicate(pred_tok, static_cast<int>(args.size()));
    a.args = std::move(args);
    return a;
  }

  Atom parse_atom() {
    if (peek().t != T::Ident && peek().t != T::Hidden) expected("atom");
    Token t = next();
    if (t.t == T::Ident && is_keyword(t.text))
      fail("keyword '" + t.text + "' cannot start an atom", t);
    return parse_atom_tail(t);
  }

  ArithExpr parse_primary() {
    if (accept(T::LParen)) {
      ArithExpr e = parse_expr();
      expect(T::RParen);
      return e;
    }
    Token t = peek();
    Term term = parse_term();
    if (is_const(term))
      fail("constant '" + term_text(term) + "' is not allowed in arithmetic", t);
    return ArithExpr::make_leaf(std::move(term));
  }

  ArithExpr parse_mul() {
    ArithExpr e = parse_primary();
    for (;;) {
      if (accept(T::Star))
        e = ArithExpr::make_node(ArithExpr::Op::Mul, std::move(e), parse_primary());
      else if (accept(T::IntDiv))
        e = ArithExpr::make_node(ArithExpr::Op::Div, std::move(e), parse_primary());
      else
        return e;
    }
  }

  ArithExpr parse_expr() {
    ArithExpr e = parse_mul();
    for (;;) {
      if (accept(T::Plus))
        e = ArithExpr::make_node(ArithExpr::Op::Add, std::move(e), parse_mul());
      else if (accept(T::Minus))
        e = ArithExpr::make_node(ArithExpr::Op::Sub, std::move(e), parse_mul());
      else
        return e;
    }
  }

  std::optional<CmpOp> accept_cmpop() {
    switch (peek().t) {
      case T::Eq: next(); return CmpOp::Eq;
      case T::Ne: next(); return CmpOp::Ne;
      case T::Lt: next(); return CmpOp::Lt;
      case T::Le: next(); return CmpOp::Le;
      case T::Gt: next(); return CmpOp::Gt;
      case T::Ge: next(); return CmpOp::Ge;
      default: return std::nullopt;
    }
  }

  Literal parse_literal() {
    if (accept(T::Neg)) return Literal::neg(parse_atom());
    // Atom when a callable name is followed by '('; otherwise a builtin.
    if ((peek().t == T::Ident || peek().t == T::Hidden) && peek(1).t == T::LParen) {
      Token t = next();
      if (t.t == T::Ident && is_keyword(t.text))
        fail("keyword '" + t.text + "' cannot start an atom", t);
      return Literal::pos(parse_atom_tail(t));
    }
    Token start = peek();
    Term lhs = parse_term();
    if (at_kw("is")) {
      next();
      return Literal::arith(std::move(lhs), parse_expr());
    }
    if (auto op = accept_cmpop()) return Literal::compare(std::move(lhs), *op, parse_term());
    fail("expected 'is' or a comparison operator after term", start);
  }

  Clause parse_clause() {
    Clause c;
    c.head = parse_atom();
    if (accept(T::If)) {
      c.body.push_back(parse_literal());
      while (accept(T::Comma)) c.body.push_back(parse_literal());
    }
    expect(T::Dot);
    return c;
  }

  // --- file kinds ---------------------------------------------------------

  Signature parse_signature_block() {
    Signature sig;
    expect(T::LBrace);
    while (!accept(T::RBrace)) {
      if (at_kw("concept") || at_kw("individual")) {
        bool concept_decl = peek().text == "concept";
        next();
        Token t = peek();
        std::string n = symbol_token();
        if (sig.contains_name(n))
          fail("symbol '" + n + "' declared twice", t, ErrKind::DuplicateSignatureEntry);
        sig.declare(concept_decl ? make_concept(n) : make_individual(n));
      } else if (at_kw("pred")) {
        next();
        Token t = peek();
        std::string n = symbol_token();
        expect(T::Slash);
        Token ar = expect(T::Int);
        if (ar.num < 1)
          fail("predicate '" + n + "' must have arity >= 1", ar, ErrKind::InvalidDeclaration);
        if (ar.num > 32)
          fail("predicate '" + n + "' arity is unreasonably large", ar,
               ErrKind::InvalidDeclaration);
        if (sig.contains_name(n))
          fail("symbol '" + n + "' declared twice", t, ErrKind::DuplicateSignatureEntry);
        sig.declare(make_pred(n, static_cast<int>(ar.num)));
      } else {
        expected("'concept', 'individual', 'pred' or '}'");
      }
    }
    return sig;
  }

  PatternSource parse_pattern_file(const Signature* ambient) {
    expect_kw("pattern");
    PatternSource p;
    p.name = name_token();
    expect(T::LBrace);
    bool saw_summary = false, saw_desc = false, saw_uses = false, saw_sig = false,
         saw_axioms = false;
    Signature scope;  // ambient + local
    if (ambient) scope = *ambient;
    std::vector<Clause> clauses;
    while (!accept(T::RBrace)) {
      if (at_kw("summary")) {
        Token t = next();
        if (saw_summary) fail("duplicate summary", t);
        saw_summary = true;
        p.summary = expect(T::Str).text;
      } else if (at_kw("description")) {
        Token t = next();
        if (saw_desc) fail("duplicate description", t);
        saw_desc = true;
        p.description = expect(T::Str).text;
      } else if (at_kw("uses")) {
        Token t = next();
        if (saw_uses) fail("duplicate uses", t);
        saw_uses = true;
        p.uses.push_back(name_token());
        while (accept(T::Comma)) p.uses.push_back(name_token());
        for (size_t a = 0; a < p.uses.size(); ++a)
          for (size_t b = a + 1; b < p.uses.size(); ++b)
            if (p.uses[a] == p.uses[b])
              fail("pattern '" + p.uses[a] + "' listed twice in uses", t);
      } else if (at_kw("signature")) {
        Token t = next();
        if (saw_sig) fail("duplicate signature block", t);
        if (saw_axioms) fail("signature block must precede the axioms block", t);
        saw_sig = true;
        p.declared_signature = parse_signature_block();
        // Conflicts against inherited declarations surface here.
        scope = merge_signatures(scope, p.declared_signature);
      } else if (at_kw("axioms")) {
        Token t = next();
        if (saw_axioms) fail("duplicate axioms block", t);
        saw_axioms = true;
        env = &scope;
        expect(T::LBrace);
        while (!accept(T::RBrace)) clauses.push_back(parse_clause());
        env = nullptr;
      } else {
        expected("'summary', 'description', 'uses', 'signature', 'axioms' or '}'");
      }
    }
    expect(T::End);
    p.clauses = std::move(clauses);
    return p;
  }

  MorphismSource parse_morphism_file() {
    expect_kw("morphism");
    MorphismSource m;
    m.name = name_token();
    expect(T::LBrace);
    bool saw_source = false;
    std::set<std::string> keys;
    while (!accept(T::RBrace)) {
      if (at_kw("source")) {
        Token t = next();
        if (saw_source) fail("duplicate source", t);
        saw_source = true;
        m.source_pattern = name_token();
      } else if (at_kw("map")) {
        next();
        Token t = peek();
        std::string src = symbol_token();
        expect(T::Arrow);
        if (peek().t == T::Hidden)
          fail("cannot map to a reserved hidden name", peek());
        std::string tgt = name_token();
        if (!keys.insert(src).second)
          fail("source symbol '" + src + "' is mapped twice", t, ErrKind::DuplicateSourceKey);
        m.pairs.emplace_back(src, tgt);
      } else if (at_kw("hide")) {
        next();
        Token t = peek();
        std::string src = symbol_token();
        if (!keys.insert(src).second)
          fail("source symbol '" + src + "' is mapped twice", t, ErrKind::DuplicateSourceKey);
        m.explicit_hides.push_back(src);
      } else {
        expected("'source', 'map', 'hide' or '}'");
      }
    }
    expect(T::End);
    if (!saw_source) {
      throw Error(ErrKind::SyntaxError, "morphism '" + m.name + "' has no source pattern", file,
                  1, 1);
    }
    return m;
  }

  Manifest parse_manifest_file() {
    expect_kw("kb");
    Manifest m;
    m.kb_name = name_token();
    expect(T::LBrace);
    while (!accept(T::RBrace)) {
      if (at_kw("apply")) {
        next();
        m.applications.push_back({Manifest::Application::Kind::Morphism, name_token()});
      } else if (at_kw("include")) {
        next();
        m.applications.push_back({Manifest::Application::Kind::Include, name_token()});
      } else if (at_kw("facts")) {
        next();
        m.fact_files.push_back(expect(T::Str).text);
      } else if (at_kw("rules")) {
        next();
        m.rule_files.push_back(expect(T::Str).text);
      } else {
        expected("'apply', 'include', 'facts', 'rules' or '}'");
      }
    }
    expect(T::End);
    if (m.applications.empty() && m.fact_files.empty())
      throw Error(ErrKind::EmptyManifest,
                  "kb '" + m.kb_name + "' has no applications and no fact files", file, 1, 1);
    return m;
  }

  std::vector<Atom> parse_fact_file(const Signature* sig) {
    env = sig;
    provisional = sig == nullptr;
    std::vector<Atom> out;
    while (peek().t != T::End) {
      Token at = peek();
      Atom a = [&] {
        if (peek().t != T::Ident && peek().t != T::Hidden) expected("fact atom");
        Token t = next();
        if (t.t == T::Ident && is_keyword(t.text))
          fail("keyword '" + t.text + "' cannot start an atom", t);
        if (sig != nullptr && sig->find(t.text) == nullptr)
          fail("fact predicate '" + t.text + "' is not declared", t, ErrKind::UndeclaredSymbol);
        bool saved = provisional;
        provisional = true;  // constants: declared or provisional individuals
        Atom r = parse_atom_tail(t);
        provisional = saved;
        return r;
      }();
      expect(T::Dot);
      if (!a.ground())
        fail("fact '" + atom_text(a) + "' is not ground", at, ErrKind::NonGroundFact);
      out.push_back(std::move(a));
    }
    return out;
  }

  std::vector<Clause> parse_rule_file(const Signature& sig) {
    env = &sig;
    std::vector<Clause> out;
    while (peek().t != T::End) out.push_back(parse_clause());
    return out;
  }

  std::vector<Literal> parse_query_text(const Signature& sig) {
    env = &sig;
    query_mode = true;
    expect(T::QueryMark);
    std::vector<Literal> goals;
    goals.push_back(parse_literal());
    while (accept(T::Comma)) goals.push_back(parse_literal());
    expect(T::Dot);
    expect(T::End);
    return goals;
  }
};

}  // namespace

PatternSource parse_pattern(const std::string& text, const Signature* ambient,
                            const std::string& filename) {
  Parser p(text, filename);
  return p.parse_pattern_file(ambient);
}

PatternHeader scan_pattern_header(const std::string& text, const std::string& filename) {
  Lexer lx(text, filename);
  std::vector<Token> toks = lx.lex();
  auto fail = [&](const std::string& msg, const Token& t) {
    throw Error(ErrKind::SyntaxError, msg, filename, t.line, t.col);
  };
  PatternHeader h;
  if (toks.size() < 2 || toks[0].t != T::Ident || toks[0].text != "pattern")
    fail("expected a pattern file", toks.front());
  if (toks[1].t != T::Ident || is_keyword(toks[1].text)) fail("expected pattern name", toks[1]);
  h.name = toks[1].text;
  // 'uses' is globally reserved, so the first Ident token spelling it is the
  // uses item; string payloads are Str tokens and cannot shadow it.
  for (size_t i = 2; i + 1 < toks.size(); ++i) {
    if (toks[i].t != T::Ident || toks[i].text != "uses") continue;
    ++i;
    for (;;) {
      if (toks[i].t != T::Ident || is_keyword(toks[i].text))
        fail("expected pattern name in uses", toks[i]);
      h.uses.push_back(toks[i].text);
      ++i;
      if (i + 1 < toks.size() && toks[i].t == T::Comma)
        ++i;
      else
        break;
    }
    break;
  }
  return h;
}

MorphismSource parse_morphism(const std::string& text, const std::string& filename) {
  Parser p(text, filename);
  return p.parse_morphism_file();
}

Manifest parse_manifest(const std::string& text, const std::string& filename) {
  Parser p(text, filename);
  Manifest m = p.parse_manifest_file();
  if (!filename.empty()) {
    std::filesystem::path dir = std::filesystem::path(filename).parent_path();
    m.base_dir = dir.empty() ? "." : dir.string();
  } else {
    m.base_dir = ".";
  }
  return m;
}

std::vector<Atom> parse_facts(const std::string& text, const Signature* sig,
                              const std::string& filename) {
  Parser p(text, filename);
  return p.parse_fact_file(sig);
}

std::vector<Clause> parse_rules(const std::string& text, const Signature& sig,
                                const std::string& filename) {
  Parser p(text, filename);
  return p.parse_rule_file(sig);
}

std::vector<Literal> parse_query(const std::string& text, const Signature& sig) {
  Parser p(text, "");
  return p.parse_query_text(sig);
}

// --- canonical rendering ----------------------------------------------------

namespace {

void render_clause_block(std::ostringstream& os, const Clause& c, const std::string& indent) {
  if (c.body.empty()) {
    os << indent << clause_text(c) << "\n";
    return;
  }
  os << indent << atom_text(c.head) << " :-\n";
  for (size_t i = 0; i < c.body.size(); ++i)
    os << indent << "    " << literal_text(c.body[i]) << (i + 1 < c.body.size() ? "," : ".")
       << "\n";
}

void render_signature_block(std::ostringstream& os, const Signature& sig,
                            const std::string& indent) {
  os << indent << "signature {\n";
  for (auto kind : {SymbolKind::Concept, SymbolKind::Individual, SymbolKind::Predicate})
    for (auto& [_, s] : sig) {
      if (s.kind != kind) continue;
      os << indent << "  " << symbolkind_name(s.kind) << " " << symbol_text(s);
      if (s.kind == SymbolKind::Predicate) os << "/" << s.arity;
      os << "\n";
    }
  os << indent << "}\n";
}

}  // namespace

std::string render(const PatternSource& p) {
  std::ostringstream os;
  os << "pattern " << p.name << " {\n";
  if (!p.summary.empty()) os << "  summary \"" << p.summary << "\"\n";
  if (!p.description.empty()) os << "  description \"" << p.description << "\"\n";
  if (!p.uses.empty()) {
    os << "  uses ";
    for (size_t i = 0; i < p.uses.size(); ++i) os << (i ? ", " : "") << p.uses[i];
    os << "\n";
  }
  render_signature_block(os, p.declared_signature, "  ");
  os << "  axioms {\n";
  for (auto& c : p.clauses) render_clause_block(os, c, "    ");
  os << "  }\n}\n";
  return os.str();
}

std::string render(const MorphismSource& m) {
  std::ostringstream os;
  os << "morphism " << m.name << " {\n";
  os << "  source " << m.source_pattern << "\n";
  for (auto& [s, t] : m.pairs) {
    os << "  map " << (is_hidden_name(s) ? "'" + s + "'" : s) << " -> " << t << "\n";
  }
  for (auto& h : m.explicit_hides)
    os << "  hide " << (is_hidden_name(h) ? "'" + h + "'" : h) << "\n";
  os << "}\n";
  return os.str();
}

std::string render(const Manifest& m) {
  std::ostringstream os;
  os << "kb " << m.kb_name << " {\n";
  for (auto& a : m.applications)
    os << (a.kind == Manifest::Application::Kind::Morphism ? "  apply " : "  include ") << a.name
       << "\n";
  for (auto& f : m.fact_files) os << "  facts \"" << f << "\"\n";
  for (auto& r : m.rule_files) os << "  rules \"" << r << "\"\n";
  os << "}\n";
  return os.str();
}

std::string render_facts(const std::vector<Atom>& facts) {
  std::ostringstream os;
  for (auto& a : facts) os << atom_text(a) << ".\n";
  return os.str();
}

}  // namespace kpc
