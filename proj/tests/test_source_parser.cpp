#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "oodoc/errors.hpp"
#include "oodoc/source_parser.hpp"
#include "support/fixture.hpp"
#include "support/loc_oracle.hpp"

namespace {

using namespace oodoc;
using Kind = BodyItem::Kind;

FileSyntaxTree parse_text(const std::string& text, const std::string& path = "T.java") {
  return parse_file(SourceFile{path, text, count_loc(text)});
}

std::vector<RawAttribute> attributes_of(const RawTypeDecl& d) {
  std::vector<RawAttribute> out;
  for (const auto& m : d.members) {
    if (const auto* a = std::get_if<RawAttribute>(&m)) out.push_back(*a);
  }
  return out;
}

std::vector<RawMethod> methods_of(const RawTypeDecl& d) {
  std::vector<RawMethod> out;
  for (const auto& m : d.members) {
    if (const auto* fn = std::get_if<RawMethod>(&m)) out.push_back(*fn);
  }
  return out;
}

RawMethod only_method(const std::string& body, const std::string& params = "") {
  const auto tree = parse_text("class A { int count; void f(" + params + ") { " + body + " } }");
  return methods_of(tree.type_decls.at(0)).at(0);
}

TEST(SourceParser, MinimalDeclaration) {
  const auto tree = parse_text("package p; public class A {}");
  EXPECT_EQ(tree.package_name, "p");
  ASSERT_EQ(tree.type_decls.size(), 1u);
  const auto& a = tree.type_decls[0];
  EXPECT_EQ(a.name, "A");
  EXPECT_EQ(a.kind, RawTypeDecl::Kind::Class);
  EXPECT_EQ(a.access, AccessLevel::Public);
  EXPECT_TRUE(a.extends.empty());
  EXPECT_TRUE(a.implements.empty());
  EXPECT_TRUE(a.members.empty());
  EXPECT_TRUE(tree.warnings.empty());
}

TEST(SourceParser, DefaultPackageWhenUndeclared) {
  const auto tree = parse_text("class A {}");
  EXPECT_EQ(tree.package_name, "");
  EXPECT_EQ(tree.type_decls.at(0).access, AccessLevel::Package);
}

TEST(SourceParser, BodyItemsOfSimpleStatements) {
  // `helper` is a parameter, so it is not itself an attribute access.
  const auto m = only_method("int x = 0; this.count = x; helper.run();", "Runner helper");
  ASSERT_EQ(m.body.size(), 3u);
  EXPECT_EQ(m.body[0].kind, Kind::LocalVariable);
  EXPECT_EQ(m.body[0].name, "x");
  EXPECT_EQ(m.body[0].type_or_receiver, "int");
  EXPECT_EQ(m.body[1].kind, Kind::AttributeAccess);
  EXPECT_EQ(m.body[1].name, "count");
  EXPECT_EQ(m.body[1].type_or_receiver, "this");
  EXPECT_EQ(m.body[2].kind, Kind::MethodInvocation);
  EXPECT_EQ(m.body[2].name, "run");
  EXPECT_EQ(m.body[2].type_or_receiver, "helper");
}

TEST(SourceParser, MyLineParameterCounts) {
  const auto files = scan_directory(testkit::fixture_dir());
  const SourceFile* my_line = nullptr;
  for (const auto& f : files) {
    if (f.path.filename() == "MyLine.java") my_line = &f;
  }
  ASSERT_NE(my_line, nullptr);
  const auto tree = parse_file(*my_line);
  EXPECT_EQ(tree.package_name, "Drawing.Shapes.coreElements");
  const auto methods = methods_of(tree.type_decls.at(0));
  ASSERT_EQ(methods.size(), 2u);
  EXPECT_TRUE(methods[0].is_constructor);
  EXPECT_EQ(methods[0].name, "MyLine");
  EXPECT_EQ(methods[0].parameters.size(), 5u);
  EXPECT_EQ(methods[1].name, "draw");
  EXPECT_EQ(methods[1].parameters.size(), 1u);
}

TEST(SourceParser, MultiDeclaratorAttributes) {
  const auto tree = parse_text("class A { protected static int a, b = 2, c[]; }");
  const auto attrs = attributes_of(tree.type_decls.at(0));
  ASSERT_EQ(attrs.size(), 3u);
  EXPECT_EQ(attrs[0].name, "a");
  EXPECT_EQ(attrs[1].name, "b");
  EXPECT_EQ(attrs[2].name, "c");
  EXPECT_EQ(attrs[2].declared_type, "int[]");
  for (const auto& a : attrs) {
    EXPECT_EQ(a.access, AccessLevel::Protected);
    EXPECT_TRUE(a.is_static);
  }
}

TEST(SourceParser, HeaderAndSignatureDetails) {
  const auto tree = parse_text(
      "package q.r;\n"
      "import java.util.List;\n"
      "import java.io.*;\n"
      "public abstract class B extends Base implements I1, q.I2 {\n"
      "  private static final String NAME = \"n\";\n"
      "  B() {}\n"
      "  public static void main(String[] args) throws java.io.IOException, E2 {}\n"
      "  protected abstract int size();\n"
      "}\n");
  EXPECT_EQ(tree.package_name, "q.r");
  EXPECT_EQ(tree.imports, (std::vector<std::string>{"java.util.List", "java.io.*"}));
  const auto& b = tree.type_decls.at(0);
  EXPECT_TRUE(b.is_abstract);
  EXPECT_EQ(b.extends, std::vector<std::string>{"Base"});
  EXPECT_EQ(b.implements, (std::vector<std::string>{"I1", "q.I2"}));
  const auto methods = methods_of(b);
  ASSERT_EQ(methods.size(), 3u);
  EXPECT_TRUE(methods[0].is_constructor);
  EXPECT_EQ(methods[0].return_type, "");
  EXPECT_EQ(methods[0].access, AccessLevel::Package);
  EXPECT_TRUE(methods[1].is_static);
  EXPECT_EQ(methods[1].return_type, "void");
  ASSERT_EQ(methods[1].parameters.size(), 1u);
  EXPECT_EQ(methods[1].parameters[0].declared_type, "String[]");
  EXPECT_EQ(methods[1].throws, (std::vector<std::string>{"java.io.IOException", "E2"}));
  EXPECT_FALSE(methods[2].has_body);
  EXPECT_EQ(methods[2].return_type, "int");
}

TEST(SourceParser, InterfaceMembersDefaultToPublic) {
  const auto tree = parse_text("interface I extends J, K { int LIMIT = 3; void run(int n); }");
  const auto& i = tree.type_decls.at(0);
  EXPECT_EQ(i.kind, RawTypeDecl::Kind::Interface);
  EXPECT_EQ(i.extends, (std::vector<std::string>{"J", "K"}));
  const auto attrs = attributes_of(i);
  ASSERT_EQ(attrs.size(), 1u);
  EXPECT_EQ(attrs[0].access, AccessLevel::Public);
  EXPECT_TRUE(attrs[0].is_static);
  const auto methods = methods_of(i);
  ASSERT_EQ(methods.size(), 1u);
  EXPECT_EQ(methods[0].access, AccessLevel::Public);
  EXPECT_FALSE(methods[0].has_body);
}

TEST(SourceParser, ControlFlowIsTraversed) {
  const auto m = only_method(
      "for (int i = 0; i < n; i++) { while (ready()) { total = total + i; } }"
      "if (flag) { a.b(); } else { int y = 1; }"
      "switch (mode) { case 1: go(); break; default: return; }"
      "{ int z = 2; }",
      "int n");
  std::vector<std::string> locals, calls, accesses;
  for (const auto& item : m.body) {
    if (item.kind == Kind::LocalVariable) locals.push_back(item.name);
    if (item.kind == Kind::MethodInvocation) calls.push_back(item.name);
    if (item.kind == Kind::AttributeAccess) accesses.push_back(item.name);
  }
  EXPECT_EQ(locals, (std::vector<std::string>{"i", "y", "z"}));
  EXPECT_EQ(calls, (std::vector<std::string>{"ready", "b", "go"}));
  // `total`, `flag`, `a`, `mode` are not locals or parameters.
  EXPECT_EQ(accesses, (std::vector<std::string>{"total", "total", "flag", "a", "mode"}));
}

TEST(SourceParser, ReceiverChainsAndStaticTypeAccess) {
  const auto m = only_method("out.list.get(0).draw(g); Color c = Color.RED;", "Graphics g");
  std::vector<std::pair<std::string, std::string>> calls;
  bool saw_color_field = false;
  for (const auto& item : m.body) {
    if (item.kind == Kind::MethodInvocation) calls.emplace_back(item.name, item.type_or_receiver);
    if (item.kind == Kind::AttributeAccess && item.name == "RED") {
      saw_color_field = true;
      EXPECT_EQ(item.type_or_receiver, "Color");
    }
    // A capitalized receiver root names a type, not an attribute.
    EXPECT_NE(item.name, "Color");
  }
  ASSERT_EQ(calls.size(), 2u);
  EXPECT_EQ(calls[0], (std::pair<std::string, std::string>{"get", "out.list"}));
  EXPECT_EQ(calls[1], (std::pair<std::string, std::string>{"draw", "out.list.get()"}));
  EXPECT_TRUE(saw_color_field);
}

TEST(SourceParser, ConstructorCallRecorded) {
  const auto m = only_method("shapes = new ArrayList();");
  ASSERT_EQ(m.body.size(), 2u);
  EXPECT_EQ(m.body[0].kind, Kind::AttributeAccess);
  EXPECT_EQ(m.body[1].kind, Kind::MethodInvocation);
  EXPECT_EQ(m.body[1].name, "ArrayList");
}

TEST(SourceParser, UnsupportedBodyConstructIsSkippedWithWarning) {
  const auto tree = parse_text(
      "class A {\n"
      "  void f() {\n"
      "    int before = 1;\n"
      "    Runnable r = () -> go();\n"
      "    int after = 2;\n"
      "  }\n"
      "}\n");
  const auto m = methods_of(tree.type_decls.at(0)).at(0);
  std::vector<std::string> locals;
  for (const auto& item : m.body) {
    if (item.kind == Kind::LocalVariable) locals.push_back(item.name);
    EXPECT_NE(item.name, "go");
  }
  EXPECT_EQ(locals, (std::vector<std::string>{"before", "after"}));
  ASSERT_FALSE(tree.warnings.empty());
  EXPECT_EQ(tree.warnings[0].line, 4);
}

TEST(SourceParser, TopLevelEnumOmittedWithWarning) {
  const auto tree = parse_text("enum Color { RED, GREEN }\nclass A {}\n");
  ASSERT_EQ(tree.type_decls.size(), 1u);
  EXPECT_EQ(tree.type_decls[0].name, "A");
  EXPECT_EQ(tree.warnings.size(), 1u);
}

TEST(SourceParser, GenericTypeArgumentsErased) {
  const auto tree = parse_text("class A { java.util.List<String> names; }");
  const auto attrs = attributes_of(tree.type_decls.at(0));
  ASSERT_EQ(attrs.size(), 1u);
  EXPECT_EQ(attrs[0].declared_type, "java.util.List");
  EXPECT_FALSE(tree.warnings.empty());
}

TEST(SourceParser, UnbalancedBracesIsParseError) {
  try {
    parse_text("class A {\n  void f() {\n", "Broken.java");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.path(), "Broken.java");
    EXPECT_GT(e.line(), 0);
  }
}

TEST(SourceParser, MalformedHeaderIsParseError) {
  try {
    parse_text("package p;\n\npublic class extends {}\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(parse_text("class A extends B, C {}"), ParseError);
  EXPECT_THROW(parse_text("private class A {}"), ParseError);
}

TEST(SourceParser, Deterministic) {
  for (const auto& f : scan_directory(testkit::fixture_dir())) {
    EXPECT_EQ(parse_file(f), parse_file(f)) << f.path;
  }
}

TEST(SourceParser, FixtureHandCounts) {
  struct Expected {
    std::string file;
    std::size_t attributes, methods, parameters;
  };
  // Hand count over the fixture sources.
  const std::vector<Expected> expected = {
      {"MyLine.java", 0, 2, 6},       {"MyOval.java", 0, 2, 6},         {"MyRectangle.java", 0, 2, 6},
      {"DrawingShapes.java", 5, 5, 3}, {"MyShape.java", 5, 12, 11},     {"PaintJPanel.java", 4, 6, 5},
  };
  const auto files = scan_directory(testkit::fixture_dir());
  ASSERT_EQ(files.size(), expected.size());
  for (const auto& f : files) {
    const auto tree = parse_file(f);
    ASSERT_EQ(tree.type_decls.size(), 1u) << f.path;
    const auto& d = tree.type_decls[0];
    std::size_t params = 0;
    for (const auto& m : methods_of(d)) params += m.parameters.size();
    bool matched = false;
    for (const auto& e : expected) {
      if (f.path.filename() != e.file) continue;
      matched = true;
      EXPECT_EQ(attributes_of(d).size(), e.attributes) << e.file;
      EXPECT_EQ(methods_of(d).size(), e.methods) << e.file;
      EXPECT_EQ(params, e.parameters) << e.file;
    }
    EXPECT_TRUE(matched) << f.path;
  }
}

// --------------------------------------------------------------------------
// count_loc

TEST(CountLoc, Empty) { EXPECT_EQ(count_loc(""), 0u); }

TEST(CountLoc, CodeBlankComment) { EXPECT_EQ(count_loc("int a;\n\n// comment\n"), 1u); }

TEST(CountLoc, BlockComments) {
  EXPECT_EQ(count_loc("/*\n * doc\n */\nint a; /* tail */\n/* x */ int b;\n  /* a */ /* b */  \n"), 2u);
  EXPECT_EQ(count_loc("int a; /* opens\n still comment\n closes */ int b;\n"), 2u);
}

TEST(CountLoc, CommentMarkersInsideStrings) {
  EXPECT_EQ(count_loc("String s = \"// not a comment\";\nString t = \"/* nor this\";\nint c;\n"), 3u);
  EXPECT_EQ(count_loc("char q = '\"'; // trailing\n"), 1u);
}

TEST(CountLoc, NoTrailingNewline) { EXPECT_EQ(count_loc("int a;\nint b;"), 2u); }

TEST(CountLoc, MatchesOracleOnFixture) {
  std::size_t total = 0;
  for (const auto& f : scan_directory(testkit::fixture_dir())) {
    EXPECT_EQ(count_loc(f), testkit::oracle_loc(f.text)) << f.path;
    EXPECT_EQ(f.line_count, count_loc(f));
    total += f.line_count;
  }
  EXPECT_EQ(testkit::fixture_project().loc, total);
}

// --------------------------------------------------------------------------
// scan_directory

class ScanDirectory : public ::testing::Test {
 protected:
  void SetUp() override { root_ = testkit::scratch_dir("scan"); }
  void TearDown() override { std::filesystem::remove_all(root_); }
  void touch(const std::filesystem::path& rel) {
    std::filesystem::create_directories((root_ / rel).parent_path());
    std::ofstream(root_ / rel) << "class X {}\n";
  }
  std::vector<std::string> names(std::string_view ext) {
    std::vector<std::string> out;
    for (const auto& f : scan_directory(root_, ext)) {
      out.push_back(std::filesystem::relative(f.path, root_).generic_string());
    }
    return out;
  }
  std::filesystem::path root_;
};

TEST_F(ScanDirectory, LexicographicOrder) {
  touch("b.src");
  touch("a.src");
  EXPECT_EQ(names(".src"), (std::vector<std::string>{"a.src", "b.src"}));
}

TEST_F(ScanDirectory, EmptyDirectory) { EXPECT_TRUE(names(".src").empty()); }

TEST_F(ScanDirectory, NestedAndFilteredByExtension) {
  touch("z/a.java");
  touch("a/z/b.java");
  touch("m.java");
  touch("a/notes.txt");
  EXPECT_EQ(names(".java"), (std::vector<std::string>{"a/z/b.java", "m.java", "z/a.java"}));
}

TEST(ScanDirectoryErrors, MissingDirectory) {
  EXPECT_THROW(scan_directory("/nonexistent/oodoc/dir"), InputError);
}

TEST(ScanDirectoryFixture, FixtureTreeOrder) {
  std::vector<std::string> rel;
  for (const auto& f : scan_directory(testkit::fixture_dir())) {
    rel.push_back(std::filesystem::relative(f.path, testkit::fixture_dir()).generic_string());
  }
  const std::string base = "Drawing/Shapes/";
  EXPECT_EQ(rel, (std::vector<std::string>{
                     base + "coreElements/MyLine.java", base + "coreElements/MyOval.java",
                     base + "coreElements/MyRectangle.java", base + "coreFrame/DrawingShapes.java",
                     base + "coreFrame/MyShape.java", base + "coreFrame/PaintJPanel.java"}));
}

}  // namespace
