#pragma once

// Front end for a class-based OO source subset (Java-like syntax).
//
// Supported: package and import declarations, top-level classes and
// interfaces, attributes (multi-declarator), constructors, methods and the
// statements needed to harvest local variables, attribute accesses and
// method invocations from bodies. Generic type arguments on member
// declarations are erased with a warning; other unsupported constructs in
// bodies (lambdas, anonymous classes, generic locals, ...) skip the enclosing
// statement with a warning. Top-level enums are omitted with a warning.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "oodoc/errors.hpp"

namespace oodoc {

enum class AccessLevel { Public, Protected, Private, Package };

inline std::string_view to_string(AccessLevel level) {
  switch (level) {
    case AccessLevel::Public: return "public";
    case AccessLevel::Protected: return "protected";
    case AccessLevel::Private: return "private";
    case AccessLevel::Package: return "package";
  }
  return "package";
}

struct SourceFile {
  std::filesystem::path path;
  std::string text;
  std::size_t line_count = 0;
};

struct BodyItem {
  enum class Kind { LocalVariable, MethodInvocation, AttributeAccess };
  Kind kind = Kind::LocalVariable;
  std::string name;
  // Declared type for locals; receiver expression text otherwise. An empty
  // receiver means the implicit `this`.
  std::string type_or_receiver;
  int line = 0;

  bool operator==(const BodyItem&) const = default;
};

struct RawAttribute {
  std::string name;
  std::string declared_type;
  AccessLevel access = AccessLevel::Package;
  bool is_static = false;
  int line = 0;

  bool operator==(const RawAttribute&) const = default;
};

struct RawParameter {
  std::string name;
  std::string declared_type;

  bool operator==(const RawParameter&) const = default;
};

struct RawMethod {
  std::string name;
  std::string return_type;  // empty for constructors
  AccessLevel access = AccessLevel::Package;
  bool is_static = false;
  bool is_constructor = false;
  bool has_body = true;
  std::vector<RawParameter> parameters;
  std::vector<std::string> throws;
  std::vector<BodyItem> body;
  int line = 0;

  bool operator==(const RawMethod&) const = default;
};

using RawMember = std::variant<RawAttribute, RawMethod>;

struct RawTypeDecl {
  enum class Kind { Class, Interface };
  std::string name;
  Kind kind = Kind::Class;
  AccessLevel access = AccessLevel::Package;
  bool is_abstract = false;
  bool is_final = false;
  std::vector<std::string> extends;  // at most one for classes
  std::vector<std::string> implements;
  std::vector<RawMember> members;
  int line = 0;

  bool operator==(const RawTypeDecl&) const = default;
};

struct ParseWarning {
  int line = 0;
  std::string message;

  bool operator==(const ParseWarning&) const = default;
};

struct FileSyntaxTree {
  std::filesystem::path path;
  std::string package_name;  // empty for the default package
  std::vector<std::string> imports;
  std::vector<RawTypeDecl> type_decls;
  std::vector<ParseWarning> warnings;

  bool operator==(const FileSyntaxTree&) const = default;
};

// ---------------------------------------------------------------------------
// Lines of code

// Physical lines holding something other than whitespace and comments.
inline std::size_t count_loc(std::string_view text) {
  std::size_t count = 0;
  bool in_block = false;
  bool has_code = false;
  char quote = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const char next = i + 1 < text.size() ? text[i + 1] : '\0';
    if (c == '\n') {
      if (has_code) ++count;
      has_code = false;
      quote = 0;  // literals never span lines in the supported subset
      continue;
    }
    if (in_block) {
      if (c == '*' && next == '/') {
        in_block = false;
        ++i;
      }
      continue;
    }
    if (quote != 0) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
      continue;
    }
    if (c == '/' && next == '/') {
      while (i + 1 < text.size() && text[i + 1] != '\n') ++i;
      continue;
    }
    if (c == '/' && next == '*') {
      in_block = true;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    has_code = true;
    if (c == '"' || c == '\'') quote = c;
  }
  if (has_code) ++count;
  return count;
}

inline std::size_t count_loc(const SourceFile& file) { return count_loc(file.text); }

// ---------------------------------------------------------------------------
// Discovery

inline SourceFile read_source_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  SourceFile file{path, buffer.str(), 0};
  file.line_count = count_loc(file.text);
  return file;
}

// Recursively collects files with `extension`, ordered by full path.
inline std::vector<SourceFile> scan_directory(const std::filesystem::path& root,
                                              std::string_view extension = ".java") {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw InputError("not a readable directory: " + root.string());
  std::vector<fs::path> paths;
  fs::recursive_directory_iterator it(root, ec), end;
  if (ec) throw InputError("cannot read directory: " + root.string() + ": " + ec.message());
  for (; it != end; it.increment(ec)) {
    if (ec) throw InputError("cannot read directory: " + root.string() + ": " + ec.message());
    if (it->is_regular_file(ec) && it->path().extension() == extension) paths.push_back(it->path());
  }
  std::sort(paths.begin(), paths.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });
  std::vector<SourceFile> files;
  files.reserve(paths.size());
  for (const auto& p : paths) files.push_back(read_source_file(p));
  return files;
}

// ---------------------------------------------------------------------------
// Lexer

namespace detail {

struct Token {
  enum class Kind { Identifier, Number, String, Char, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 0;
};

inline bool is_ident_start(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || c == '_' || c == '$' || u >= 0x80;
}

inline bool is_ident_char(char c) {
  return is_ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

inline std::vector<Token> tokenize(std::string_view text, const std::string& path) {
  static constexpr std::string_view kPuncts[] = {
      ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=",
      ">=",   "+=",  "-=",  "*=",  "/=",  "%=", "&=", "|=", "^=", "<<", ">>"};
  std::vector<Token> tokens;
  int line = 1;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      const int start = line;
      i += 2;
      while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) {
        if (text[i] == '\n') ++line;
        ++i;
      }
      if (i + 1 >= text.size()) throw ParseError(path, start, "unterminated block comment");
      i += 2;
      continue;
    }
    if (is_ident_start(c)) {
      const std::size_t start = i;
      while (i < text.size() && is_ident_char(text[i])) ++i;
      tokens.push_back({Token::Kind::Identifier, std::string(text.substr(start, i - start)), line});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      const std::size_t start = i;
      while (i < text.size()) {
        const char d = text[i];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '.' || d == '_') {
          ++i;
        } else if ((d == '+' || d == '-') && (text[i - 1] == 'e' || text[i - 1] == 'E') &&
                   !(text[start] == '0' && start + 1 < text.size() &&
                     (text[start + 1] == 'x' || text[start + 1] == 'X'))) {
          ++i;
        } else {
          break;
        }
      }
      tokens.push_back({Token::Kind::Number, std::string(text.substr(start, i - start)), line});
      continue;
    }
    if (c == '"' || c == '\'') {
      const std::size_t start = i++;
      while (i < text.size() && text[i] != c) {
        if (text[i] == '\n') throw ParseError(path, line, "unterminated literal");
        if (text[i] == '\\') ++i;
        ++i;
      }
      if (i >= text.size()) throw ParseError(path, line, "unterminated literal");
      ++i;
      tokens.push_back({c == '"' ? Token::Kind::String : Token::Kind::Char,
                        std::string(text.substr(start, i - start)), line});
      continue;
    }
    bool matched = false;
    for (const auto p : kPuncts) {
      if (text.substr(i, p.size()) == p) {
        tokens.push_back({Token::Kind::Punct, std::string(p), line});
        i += p.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    static constexpr std::string_view kSingles = "{}()[];,.=<>!~?:+-*/&|^%@";
    if (kSingles.find(c) == std::string_view::npos) {
      throw ParseError(path, line, std::string("unexpected character '") + c + "'");
    }
    tokens.push_back({Token::Kind::Punct, std::string(1, c), line});
    ++i;
  }
  tokens.push_back({Token::Kind::End, "", line});
  return tokens;
}

inline bool is_primitive(std::string_view s) {
  static const std::unordered_set<std::string_view> kPrimitives = {
      "boolean", "byte", "char", "short", "int", "long", "float", "double", "void"};
  return kPrimitives.count(s) != 0;
}

inline bool is_keyword(std::string_view s) {
  static const std::unordered_set<std::string_view> kKeywords = {
      "abstract", "assert",     "break",     "case",      "catch",     "class",        "const",
      "continue", "default",    "do",        "else",      "enum",      "extends",      "final",
      "finally",  "for",        "goto",      "if",        "implements", "import",      "instanceof",
      "interface", "native",    "new",       "package",   "private",   "protected",    "public",
      "return",   "static",     "strictfp",  "super",     "switch",    "synchronized", "this",
      "throw",    "throws",     "transient", "try",       "volatile",  "while",        "true",
      "false",    "null"};
  return kKeywords.count(s) != 0 || is_primitive(s);
}

// Thrown inside method bodies; the enclosing statement is skipped.
struct Unsupported {
  std::string what;
  int line;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string path)
      : tokens_(std::move(tokens)), path_(std::move(path)) {}

  FileSyntaxTree parse_compilation_unit() {
    FileSyntaxTree tree;
    tree.path = path_;
    skip_annotations();
    if (accept_word("package")) {
      tree.package_name = qualified_name();
      expect(";");
    }
    while (peek_word("import")) {
      advance();
      const bool is_static = accept_word("static");
      std::string name = qualified_name();
      if (accept(".")) {
        expect("*");
        name += ".*";
      }
      expect(";");
      if (is_static) {
        warn("static import '" + name + "' ignored");
      } else {
        tree.imports.push_back(std::move(name));
      }
    }
    while (!at_end()) {
      if (accept(";")) continue;
      type_declaration(tree);
    }
    tree.warnings = std::move(warnings_);
    return tree;
  }

 private:
  // -- token helpers --------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t idx = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[idx];
  }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  const Token& advance() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool is_punct(const Token& t, std::string_view p) const {
    return t.kind == Token::Kind::Punct && t.text == p;
  }
  bool peek_is(std::string_view p, std::size_t ahead = 0) const { return is_punct(peek(ahead), p); }
  bool peek_word(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::Identifier && peek(ahead).text == w;
  }
  bool peek_identifier(std::size_t ahead = 0) const {
    return peek(ahead).kind == Token::Kind::Identifier && !is_keyword(peek(ahead).text);
  }
  bool accept(std::string_view p) {
    if (!peek_is(p)) return false;
    advance();
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!peek_word(w)) return false;
    advance();
    return true;
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(path_, peek().line, message + (at_end() ? " at end of file" : " near '" + peek().text + "'"));
  }
  void expect(std::string_view p) {
    if (!accept(p)) fail("expected '" + std::string(p) + "'");
  }
  std::string identifier() {
    if (!peek_identifier()) fail("expected identifier");
    return advance().text;
  }
  std::string qualified_name() {
    std::string name = identifier();
    while (peek_is(".") && peek_identifier(1)) {
      advance();
      name += "." + advance().text;
    }
    return name;
  }
  void warn(std::string message) { warnings_.push_back({peek().line, std::move(message)}); }

  // Skips a balanced bracket group starting at the current opener.
  void skip_balanced(std::string_view open, std::string_view close) {
    const int line = peek().line;
    expect(open);
    int depth = 1;
    while (depth > 0) {
      if (at_end()) throw ParseError(path_, line, "unbalanced '" + std::string(open) + "'");
      if (peek_is(open)) ++depth;
      if (peek_is(close)) --depth;
      advance();
    }
  }

  // Skips `<...>`; returns false (without moving) when unbalanced.
  bool skip_type_arguments() {
    const std::size_t start = pos_;
    int depth = 0;
    do {
      const Token& t = peek();
      if (t.kind == Token::Kind::End || is_punct(t, ";") || is_punct(t, "{") || is_punct(t, "}") ||
          is_punct(t, "(") || is_punct(t, ")")) {
        pos_ = start;
        return false;
      }
      if (is_punct(t, "<")) depth += 1;
      if (is_punct(t, ">")) depth -= 1;
      if (is_punct(t, ">>")) depth -= 2;
      if (is_punct(t, ">>>")) depth -= 3;
      advance();
    } while (depth > 0);
    return true;
  }

  void skip_annotations() {
    while (peek_is("@") && !peek_word("interface", 1)) {
      advance();
      const std::string name = qualified_name();
      warn("annotation @" + name + " ignored");
      if (peek_is("(")) skip_balanced("(", ")");
    }
  }

  // -- declarations ---------------------------------------------------------

  struct Modifiers {
    bool is_public = false, is_protected = false, is_private = false;
    bool is_static = false, is_abstract = false, is_final = false, is_default = false;
    AccessLevel access(AccessLevel fallback = AccessLevel::Package) const {
      if (is_public) return AccessLevel::Public;
      if (is_protected) return AccessLevel::Protected;
      if (is_private) return AccessLevel::Private;
      return fallback;
    }
  };

  Modifiers modifiers() {
    Modifiers m;
    for (;;) {
      skip_annotations();
      const Token& t = peek();
      if (t.kind != Token::Kind::Identifier) break;
      if (t.text == "public") m.is_public = true;
      else if (t.text == "protected") m.is_protected = true;
      else if (t.text == "private") m.is_private = true;
      else if (t.text == "static") m.is_static = true;
      else if (t.text == "abstract") m.is_abstract = true;
      else if (t.text == "final") m.is_final = true;
      else if (t.text == "default" && !peek_is(":", 1)) m.is_default = true;
      else if (t.text == "native" || t.text == "synchronized" || t.text == "transient" ||
               t.text == "volatile" || t.text == "strictfp") {
      } else {
        break;
      }
      advance();
    }
    if (static_cast<int>(m.is_public) + m.is_protected + m.is_private > 1) fail("conflicting access modifiers");
    return m;
  }

  // Type reference: primitive or qualified name, optional erased type
  // arguments, array dimensions.
  std::string type_reference() {
    std::string type;
    if (peek().kind == Token::Kind::Identifier && is_primitive(peek().text)) {
      type = advance().text;
    } else {
      type = identifier();
      for (;;) {
        if (peek_is("<")) {
          if (!skip_type_arguments()) fail("malformed type arguments");
          warn("type arguments of '" + type + "' erased");
          continue;
        }
        if (peek_is(".") && peek_identifier(1)) {
          advance();
          type += "." + advance().text;
          continue;
        }
        break;
      }
    }
    while (peek_is("[") && peek_is("]", 1)) {
      advance();
      advance();
      type += "[]";
    }
    return type;
  }

  std::vector<std::string> type_list() {
    std::vector<std::string> types{type_reference()};
    while (accept(",")) types.push_back(type_reference());
    return types;
  }

  void type_declaration(FileSyntaxTree& tree) {
    const int line = peek().line;
    const Modifiers mods = modifiers();
    if (mods.is_private || mods.is_protected) fail("top-level type cannot be private or protected");
    if (peek_word("enum") || (peek_is("@") && peek_word("interface", 1))) {
      const std::string what = peek_is("@") ? "annotation type" : "enum";
      warn(what + " declaration omitted");
      while (!peek_is("{")) {
        if (at_end() || peek_is(";")) fail("malformed " + what + " declaration");
        advance();
      }
      skip_balanced("{", "}");
      return;
    }
    RawTypeDecl decl;
    decl.line = line;
    if (accept_word("class")) {
      decl.kind = RawTypeDecl::Kind::Class;
    } else if (accept_word("interface")) {
      decl.kind = RawTypeDecl::Kind::Interface;
    } else {
      fail("expected class or interface declaration");
    }
    decl.name = identifier();
    decl.access = mods.access();
    decl.is_abstract = mods.is_abstract || decl.kind == RawTypeDecl::Kind::Interface;
    decl.is_final = mods.is_final;
    if (peek_is("<")) {
      if (!skip_type_arguments()) fail("malformed type parameters");
      warn("type parameters of '" + decl.name + "' erased");
    }
    if (accept_word("extends")) {
      decl.extends = type_list();
      if (decl.kind == RawTypeDecl::Kind::Class && decl.extends.size() > 1) {
        fail("a class may extend only one class");
      }
    }
    if (accept_word("implements")) {
      if (decl.kind == RawTypeDecl::Kind::Interface) fail("interface cannot implement");
      decl.implements = type_list();
    }
    if (!peek_is("{")) fail("malformed declaration header of '" + decl.name + "'");
    class_body(decl);
    tree.type_decls.push_back(std::move(decl));
  }

  // Skips an unsupported member up to its terminating `;` or body.
  void skip_member() {
    const int line = peek().line;
    int parens = 0;
    for (;;) {
      if (at_end()) throw ParseError(path_, line, "unterminated member declaration");
      if (peek_is("(")) ++parens;
      if (peek_is(")")) --parens;
      if (parens == 0 && peek_is(";")) {
        advance();
        return;
      }
      if (parens == 0 && peek_is("{")) {
        skip_balanced("{", "}");
        if (peek_is(";")) advance();
        return;
      }
      if (parens == 0 && peek_is("}")) fail("malformed member declaration");
      advance();
    }
  }

  void class_body(RawTypeDecl& decl) {
    const bool in_interface = decl.kind == RawTypeDecl::Kind::Interface;
    const int open_line = peek().line;
    expect("{");
    for (;;) {
      if (at_end()) throw ParseError(path_, open_line, "unbalanced braces: class '" + decl.name + "' not closed");
      if (accept("}")) return;
      if (accept(";")) continue;
      const int line = peek().line;
      const Modifiers mods = modifiers();
      if (peek_is("{")) {
        warn("initializer block ignored");
        skip_balanced("{", "}");
        continue;
      }
      if (peek_word("class") || peek_word("interface") || peek_word("enum") ||
          (peek_is("@") && peek_word("interface", 1))) {
        warn("nested type declaration omitted");
        skip_member();
        continue;
      }
      if (peek_is("<")) {
        warn("generic method omitted");
        skip_member();
        continue;
      }
      const AccessLevel fallback = in_interface ? AccessLevel::Public : AccessLevel::Package;
      if (peek_word(decl.name) && peek_is("(", 1)) {
        advance();
        RawMethod ctor;
        ctor.name = decl.name;
        ctor.is_constructor = true;
        ctor.access = mods.access(fallback);
        ctor.line = line;
        method_rest(ctor);
        decl.members.emplace_back(std::move(ctor));
        continue;
      }
      const std::string type = type_reference();
      const std::string name = identifier();
      if (peek_is("(")) {
        RawMethod method;
        method.name = name;
        method.return_type = type;
        method.access = mods.access(fallback);
        method.is_static = mods.is_static;
        method.line = line;
        method_rest(method);
        decl.members.emplace_back(std::move(method));
        continue;
      }
      attribute_declarators(decl, mods, in_interface, type, name, line);
    }
  }

  void attribute_declarators(RawTypeDecl& decl, const Modifiers& mods, bool in_interface,
                             const std::string& type, std::string name, int line) {
    for (;;) {
      std::string declared = type;
      while (peek_is("[") && peek_is("]", 1)) {
        advance();
        advance();
        declared += "[]";
      }
      RawAttribute attr;
      attr.name = std::move(name);
      attr.declared_type = std::move(declared);
      attr.access = mods.access(in_interface ? AccessLevel::Public : AccessLevel::Package);
      attr.is_static = mods.is_static || in_interface;
      attr.line = line;
      decl.members.emplace_back(std::move(attr));
      if (accept("=")) skip_initializer();
      if (accept(";")) return;
      expect(",");
      line = peek().line;
      name = identifier();
    }
  }

  // Attribute initializers are not part of any method body; skip them.
  void skip_initializer() {
    int depth = 0;
    for (;;) {
      if (at_end()) fail("unterminated initializer");
      if (peek_is("(") || peek_is("{") || peek_is("[")) ++depth;
      if (peek_is(")") || peek_is("}") || peek_is("]")) {
        if (depth == 0) fail("unbalanced initializer");
        --depth;
      }
      if (depth == 0 && (peek_is(",") || peek_is(";"))) return;
      advance();
    }
  }

  void method_rest(RawMethod& method) {
    expect("(");
    if (!peek_is(")")) {
      do {
        modifiers();
        RawParameter param;
        param.declared_type = type_reference();
        if (accept("...")) {
          warn("varargs parameter treated as array");
          param.declared_type += "[]";
        }
        param.name = identifier();
        while (peek_is("[") && peek_is("]", 1)) {
          advance();
          advance();
          param.declared_type += "[]";
        }
        method.parameters.push_back(std::move(param));
      } while (accept(","));
    }
    expect(")");
    while (peek_is("[") && peek_is("]", 1)) {
      advance();
      advance();
      method.return_type += "[]";
    }
    if (accept_word("throws")) method.throws = type_list();
    if (accept(";")) {
      method.has_body = false;
      return;
    }
    if (!peek_is("{")) fail("expected method body of '" + method.name + "'");
    scope_.clear();
    for (const auto& p : method.parameters) scope_.insert(p.name);
    items_ = &method.body;
    block();
    items_ = nullptr;
  }

  // -- statements -----------------------------------------------------------

  void block() {
    const int open_line = peek().line;
    expect("{");
    for (;;) {
      if (at_end()) throw ParseError(path_, open_line, "unbalanced braces: block not closed");
      if (accept("}")) return;
      statement();
    }
  }

  void statement() {
    const std::size_t start = pos_;
    const std::size_t item_count = items_->size();
    try {
      statement_inner();
    } catch (const Unsupported& u) {
      warnings_.push_back({u.line, u.what + " skipped"});
      items_->resize(item_count);
      pos_ = start;
      resync_statement();
    }
  }

  void resync_statement() {
    int depth = 0;
    for (;;) {
      if (at_end()) return;
      if (peek_is("(") || peek_is("{") || peek_is("[")) {
        ++depth;
      } else if (peek_is(")") || peek_is("}") || peek_is("]")) {
        if (depth == 0) return;
        --depth;
        const bool closed_brace = peek_is("}");
        advance();
        if (depth == 0 && closed_brace && !(peek_is(";") || peek_is(")") || peek_is(",") || peek_is("."))) {
          return;
        }
        continue;
      } else if (depth == 0 && peek_is(";")) {
        advance();
        return;
      }
      advance();
    }
  }

  void unsupported(const std::string& what) { throw Unsupported{what, peek().line}; }

  void statement_inner() {
    if (peek_is("{")) return block();
    if (accept(";")) return;
    if (peek_is("@")) unsupported("annotated statement");
    const Token& t = peek();
    if (t.kind == Token::Kind::Identifier) {
      const std::string& w = t.text;
      if (w == "if") {
        advance();
        paren_expression();
        statement();
        if (accept_word("else")) statement();
        return;
      }
      if (w == "while") {
        advance();
        paren_expression();
        statement();
        return;
      }
      if (w == "do") {
        advance();
        statement();
        if (!accept_word("while")) fail("expected 'while'");
        paren_expression();
        expect(";");
        return;
      }
      if (w == "for") return for_statement();
      if (w == "switch") return switch_statement();
      if (w == "try") return try_statement();
      if (w == "return" || w == "throw") {
        advance();
        if (!peek_is(";")) expression();
        expect(";");
        return;
      }
      if (w == "break" || w == "continue") {
        advance();
        if (peek_identifier()) advance();
        expect(";");
        return;
      }
      if (w == "class" || w == "interface" || w == "enum" || w == "abstract") unsupported("local type declaration");
      if (w == "synchronized") unsupported("synchronized statement");
      if (w == "assert") unsupported("assert statement");
      if (w == "else" || w == "case" || w == "default" || w == "catch" || w == "finally") {
        fail("unexpected '" + w + "'");
      }
      if (peek_identifier() && peek_is(":", 1)) {
        advance();
        advance();
        return statement();
      }
    }
    if (looks_like_local_declaration()) {
      local_declaration();
      expect(";");
      return;
    }
    expression();
    expect(";");
  }

  void paren_expression() {
    expect("(");
    expression();
    expect(")");
  }

  // Lookahead for `[final] Type name (= | ; | , | [ | :)`.
  bool looks_like_local_declaration() {
    std::size_t i = 0;
    while (peek_word("final", i)) ++i;
    const Token& first = peek(i);
    if (first.kind != Token::Kind::Identifier) return false;
    if (is_keyword(first.text) && !is_primitive(first.text)) return false;
    ++i;
    if (!is_primitive(first.text)) {
      while (peek_is(".", i) && peek_identifier(i + 1)) i += 2;
      if (peek_is("<", i)) {
        // `Type<...> name` at statement start can only be a generic declaration.
        if (peek_identifier(i - 1)) unsupported("generic local declaration");
        return false;
      }
    }
    while (peek_is("[", i) && peek_is("]", i + 1)) i += 2;
    if (!peek_identifier(i)) return false;
    ++i;
    return peek_is("=", i) || peek_is(";", i) || peek_is(",", i) || peek_is("[", i) || peek_is(":", i);
  }

  // Declarators after the type; returns the final declared name (used by
  // enhanced for).
  std::string local_declaration(bool allow_colon = false) {
    while (accept_word("final")) {}
    const std::string type = type_reference();
    for (;;) {
      const int line = peek().line;
      std::string name = identifier();
      std::string declared = type;
      while (peek_is("[") && peek_is("]", 1)) {
        advance();
        advance();
        declared += "[]";
      }
      items_->push_back({BodyItem::Kind::LocalVariable, name, declared, line});
      scope_.insert(name);
      if (allow_colon && peek_is(":")) return name;
      if (accept("=")) {
        if (peek_is("{")) {
          array_initializer();
        } else {
          expression();
        }
      }
      if (!accept(",")) return name;
    }
  }

  void array_initializer() {
    expect("{");
    while (!peek_is("}")) {
      if (peek_is("{")) {
        array_initializer();
      } else {
        expression();
      }
      if (!accept(",")) break;
    }
    expect("}");
  }

  void for_statement() {
    advance();
    expect("(");
    if (!peek_is(";")) {
      if (looks_like_local_declaration()) {
        local_declaration(/*allow_colon=*/true);
        if (accept(":")) {
          expression();
          expect(")");
          statement();
          return;
        }
      } else {
        expression_list();
      }
    }
    expect(";");
    if (!peek_is(";")) expression();
    expect(";");
    if (!peek_is(")")) expression_list();
    expect(")");
    statement();
  }

  void expression_list() {
    expression();
    while (accept(",")) expression();
  }

  void switch_statement() {
    advance();
    paren_expression();
    const int open_line = peek().line;
    expect("{");
    for (;;) {
      if (at_end()) throw ParseError(path_, open_line, "unbalanced braces: switch not closed");
      if (accept("}")) return;
      if (accept_word("case")) {
        expression();
        while (accept(",")) expression();
        if (peek_is("->")) unsupported("arrow case label");
        expect(":");
        continue;
      }
      if (peek_word("default") && peek_is(":", 1)) {
        advance();
        advance();
        continue;
      }
      statement();
    }
  }

  void try_statement() {
    advance();
    if (peek_is("(")) unsupported("try-with-resources");
    block();
    bool handled = false;
    while (accept_word("catch")) {
      handled = true;
      expect("(");
      while (accept_word("final")) {}
      std::string type = type_reference();
      while (accept("|")) type += "|" + type_reference();
      const int line = peek().line;
      std::string name = identifier();
      expect(")");
      items_->push_back({BodyItem::Kind::LocalVariable, name, type, line});
      scope_.insert(std::move(name));
      block();
    }
    if (accept_word("finally")) {
      handled = true;
      block();
    }
    if (!handled) fail("try without catch or finally");
  }

  // -- expressions ----------------------------------------------------------
  //
  // Expressions are parsed only to harvest body items, so binary operators
  // are read as a flat sequence. Each unary chain yields its receiver text:
  // identifiers joined by '.', calls as `name()`, indexing as `[]`, casts as
  // `(Type)`, string literals as `""`. Anything else is "?" (unknown type).

  static bool is_binary_operator(const Token& t) {
    static const std::unordered_set<std::string_view> kOps = {
        "+",  "-",  "*",  "/",  "%",  "<<", ">>", ">>>", "<",  ">",  "<=",  ">=",  "==", "!=",
        "&",  "^",  "|",  "&&", "||", "=",  "+=", "-=",  "*=", "/=", "%=",  "&=",  "^=", "|=",
        "<<=", ">>=", ">>>="};
    return t.kind == Token::Kind::Punct && kOps.count(t.text) != 0;
  }

  std::string expression() {
    std::string text = unary();
    bool single = true;
    for (;;) {
      if (peek_is("->") || peek_is("::")) unsupported("lambda or method reference");
      if (peek_is("?")) {
        advance();
        expression();
        expect(":");
        expression();
        single = false;
        continue;
      }
      if (accept_word("instanceof")) {
        type_reference();
        single = false;
        continue;
      }
      if (is_binary_operator(peek())) {
        advance();
        unary();
        single = false;
        continue;
      }
      break;
    }
    return single ? text : "?";
  }

  std::string unary() {
    if (peek_is("+") || peek_is("-") || peek_is("!") || peek_is("~") || peek_is("++") || peek_is("--")) {
      advance();
      unary();
      return "?";
    }
    if (peek_is("(")) {
      if (parenthesized_lambda_ahead()) unsupported("lambda or method reference");
      if (const auto cast = try_cast()) {
        unary();
        return postfix("(" + *cast + ")");
      }
      advance();
      const std::string inner = expression();
      expect(")");
      return postfix(inner == "?" ? "?" : inner);
    }
    return postfix(primary());
  }

  // True when the parenthesized group at the cursor is followed by `->`.
  bool parenthesized_lambda_ahead() const {
    int depth = 0;
    for (std::size_t i = 0; peek(i).kind != Token::Kind::End; ++i) {
      if (peek_is("(", i)) ++depth;
      if (peek_is(")", i) && --depth == 0) return peek_is("->", i + 1);
    }
    return false;
  }

  // Recognizes `(Type) operand`; leaves the position untouched otherwise.
  std::optional<std::string> try_cast() {
    std::size_t i = 1;
    const Token& first = peek(i);
    if (first.kind != Token::Kind::Identifier) return std::nullopt;
    if (is_keyword(first.text) && !is_primitive(first.text)) return std::nullopt;
    const bool primitive = is_primitive(first.text);
    std::string type = first.text;
    ++i;
    while (!primitive && peek_is(".", i) && peek_identifier(i + 1)) {
      type += "." + peek(i + 1).text;
      i += 2;
    }
    if (!primitive && peek_is("<", i)) {
      const std::size_t saved = pos_;
      pos_ += i;
      const bool balanced = skip_type_arguments();
      const bool closes = balanced && peek_is(")");
      pos_ = saved;
      if (closes) unsupported("generic cast");
      return std::nullopt;
    }
    while (peek_is("[", i) && peek_is("]", i + 1)) {
      type += "[]";
      i += 2;
    }
    if (!peek_is(")", i)) return std::nullopt;
    const Token& after = peek(i + 1);
    bool operand = false;
    if (primitive) {
      operand = true;
    } else if (after.kind == Token::Kind::Identifier) {
      operand = !is_keyword(after.text) || after.text == "this" || after.text == "new" ||
                after.text == "super" || after.text == "true" || after.text == "false" || after.text == "null";
    } else if (after.kind != Token::Kind::Punct && after.kind != Token::Kind::End) {
      operand = true;
    } else {
      operand = is_punct(after, "(") || is_punct(after, "!") || is_punct(after, "~");
    }
    if (!operand) return std::nullopt;
    pos_ += i + 1;
    return type;
  }

  void arguments() {
    expect("(");
    if (!peek_is(")")) expression_list();
    expect(")");
  }

  void emit(BodyItem::Kind kind, std::string name, std::string receiver, int line) {
    items_->push_back({kind, std::move(name), std::move(receiver), line});
  }

  std::string primary() {
    const Token& t = peek();
    const int line = t.line;
    switch (t.kind) {
      case Token::Kind::String:
        advance();
        return "\"\"";
      case Token::Kind::Number:
      case Token::Kind::Char:
        advance();
        return "?";
      case Token::Kind::End:
        fail("unexpected end of expression");
      case Token::Kind::Punct:
        fail("expected expression");
      case Token::Kind::Identifier:
        break;
    }
    const std::string word = t.text;
    if (word == "true" || word == "false" || word == "null") {
      advance();
      return "?";
    }
    if (word == "this" || word == "super") {
      advance();
      if (peek_is("(")) {
        arguments();  // constructor chaining
        return "?";
      }
      return word;
    }
    if (word == "new") {
      advance();
      return creation(line);
    }
    if (is_primitive(word)) {
      // `int.class`, `int[].class`
      type_reference();
      if (accept(".") && accept_word("class")) return "?";
      fail("unexpected primitive type in expression");
    }
    if (is_keyword(word)) fail("unexpected '" + word + "'");
    advance();
    if (peek_is("(")) {
      emit(BodyItem::Kind::MethodInvocation, word, "", line);
      arguments();
      return word + "()";
    }
    if (!scope_.count(word)) {
      const bool is_receiver_root = peek_is(".");
      const bool looks_like_type = std::isupper(static_cast<unsigned char>(word[0])) != 0;
      if (!(is_receiver_root && looks_like_type)) emit(BodyItem::Kind::AttributeAccess, word, "", line);
    }
    return word;
  }

  std::string creation(int line) {
    if (peek().kind == Token::Kind::Identifier && is_primitive(peek().text)) {
      advance();
      return array_creation();
    }
    std::string type = qualified_name();
    if (peek_is("<")) unsupported("generic instance creation");
    if (peek_is("[")) return array_creation();
    const std::string simple = type.substr(type.rfind('.') + 1);
    emit(BodyItem::Kind::MethodInvocation, simple, "new " + type, line);
    arguments();
    if (peek_is("{")) unsupported("anonymous class");
    return "new " + type + "()";
  }

  std::string array_creation() {
    while (accept("[")) {
      if (!peek_is("]")) expression();
      expect("]");
    }
    if (peek_is("{")) array_initializer();
    return "?";
  }

  std::string postfix(std::string chain) {
    for (;;) {
      if (peek_is(".")) {
        advance();
        if (peek_is("<")) unsupported("explicit type arguments");
        if (peek_word("new")) unsupported("inner instance creation");
        if (accept_word("class") || accept_word("this")) {
          chain = "?";
          continue;
        }
        const int line = peek().line;
        const std::string name = identifier();
        if (peek_is("(")) {
          emit(BodyItem::Kind::MethodInvocation, name, chain, line);
          arguments();
          chain = chain == "?" ? "?" : chain + "." + name + "()";
        } else {
          emit(BodyItem::Kind::AttributeAccess, name, chain, line);
          chain = chain == "?" ? "?" : chain + "." + name;
        }
        continue;
      }
      if (peek_is("[")) {
        advance();
        expression();
        expect("]");
        chain = chain == "?" ? "?" : chain + "[]";
        continue;
      }
      if (peek_is("++") || peek_is("--")) {
        advance();
        return "?";
      }
      if (peek_is("->") || peek_is("::")) unsupported("lambda or method reference");
      return chain;
    }
  }

  std::vector<Token> tokens_;
  std::string path_;
  std::size_t pos_ = 0;
  std::vector<ParseWarning> warnings_;
  std::unordered_set<std::string> scope_;
  std::vector<BodyItem>* items_ = nullptr;
};

}  // namespace detail

// Throws ParseError with the file path and line on malformed input.
inline FileSyntaxTree parse_file(const SourceFile& file) {
  const std::string path = file.path.generic_string();
  detail::Parser parser(detail::tokenize(file.text, path), path);
  return parser.parse_compilation_unit();
}

}  // namespace oodoc
