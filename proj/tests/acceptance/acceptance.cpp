// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "oodoc/code_model.hpp"
#include "oodoc/doc_generator.hpp"
#include "oodoc/evaluation.hpp"
#include "oodoc/metrics.hpp"
#include "oodoc/pipeline.hpp"
#include "oodoc/xml_exchange.hpp"
#include "support/dot_parser.hpp"
#include "support/fixture.hpp"
#include "support/loc_oracle.hpp"
#include "support/model_gen.hpp"
#include "support/soundness.hpp"

namespace {

using namespace oodoc;
using Clock = std::chrono::steady_clock;

// Collects the reasons a criterion failed.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  template <class A, class B>
  void equal(const A& actual, const B& expected, const std::string& what) {
    if (!(actual == expected)) {
      std::ostringstream s;
      s << what << ": got " << actual << ", want " << expected;
      failures_.push_back(s.str());
    }
  }
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void fixture_fidelity(Check& c, std::string& detail) {
  const auto start = Clock::now();
  const Analysis a = analyze_directory(testkit::fixture_dir(), ".java", testkit::fixture_name());
  const MetricsRecord m = project_metrics(a.project);
  const double elapsed = seconds_since(start);
  c.expect(a.failures.empty(), "fixture files failed to parse");
  c.equal(m.nom, 29u, "NoM");
  c.equal(m.noa, 14u, "NoA");
  c.equal(m.noc, 6u, "NoC");
  c.equal(m.nop, 2u, "class-bearing packages");
  const ClassIndex index(a.project);
  for (const auto& pkg : a.project.packages) {
    if (!pkg.classes.empty()) c.equal(pkg.classes.size(), 3u, "classes in " + pkg.qualified_name);
  }
  struct Row {
    std::string cls;
    std::size_t noa, nom;
    std::string superclass;
  };
  for (const Row& r : {Row{"MyShape", 5, 12, ""}, Row{"DrawingShapes", 5, 5, "JFrame"}, Row{"PaintJPanel", 4, 6, "JPanel"}}) {
    const ClassEntity* cls = index.find(testkit::kFrame + r.cls);
    c.expect(cls != nullptr, "missing " + r.cls);
    if (!cls) continue;
    c.equal(class_metrics(*cls).noa, r.noa, r.cls + " NoA");
    c.equal(class_metrics(*cls).nom, r.nom, r.cls + " NoM");
    c.equal(cls->superclass.value_or(""), r.superclass, r.cls + " superclass");
    if (!r.superclass.empty()) c.expect(!index.contains(r.superclass), r.cls + " superclass should be external");
  }
  c.expect(elapsed < 5.0, "runtime " + std::to_string(elapsed) + " s");
  std::ostringstream s;
  s << "NoM=" << m.nom << " NoA=" << m.noa << " NoC=" << m.noc << " NoP=" << m.nop << " in " << elapsed << " s";
  detail = s.str();
}

void inheritance_edges(Check& c, std::string& detail) {
  const auto g = gen_class_dependency_document(testkit::fixture_project());
  std::set<std::pair<std::string, std::string>> internal;
  for (const auto& e : g.edges) {
    if (e.kind == EdgeKind::Inherits && e.to.rfind("external:", 0) != 0) internal.emplace(e.from, e.to);
  }
  const std::string shape = testkit::kFrame + "MyShape";
  const std::set<std::pair<std::string, std::string>> expected = {
      {testkit::kElements + "MyLine", shape},
      {testkit::kElements + "MyOval", shape},
      {testkit::kElements + "MyRectangle", shape},
  };
  c.expect(internal == expected, "internal inheritance edge set differs");
  detail = std::to_string(internal.size()) + " internal inheritance edges";
}

void method_dependencies(Check& c, std::string& detail) {
  const auto dot = serialize_dot(gen_method_dependency_document(testkit::fixture_project()));
  const auto edges = testkit::dot_edges(testkit::parse_dot(dot));
  const testkit::EdgeTriple invokes{method_dependency_method_id(testkit::kFrame + "PaintJPanel", "paintComponent"),
                                    method_dependency_method_id(testkit::kFrame + "MyShape", "draw"), "invokes"};
  const testkit::EdgeTriple accesses{
      method_dependency_method_id(testkit::kFrame + "PaintJPanel", "paintJPanelMouseDragged"),
      method_dependency_attribute_id(testkit::kFrame + "PaintJPanel", "currentShape"), "accesses"};
  c.expect(edges.count(invokes) == 1, "missing paintComponent -> MyShape.draw");
  c.expect(edges.count(accesses) == 1, "missing paintJPanelMouseDragged -> currentShape");
  detail = std::to_string(edges.size()) + " edges in method-dependency document";
}

void xml_round_trip(Check& c, std::string& detail) {
  std::vector<Project> models{testkit::fixture_project()};
  for (unsigned seed = 1; seed <= 20; ++seed) models.push_back(testkit::random_model(seed));
  std::size_t ok = 0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const std::string first = serialize_model(models[i]);
    const std::string second = serialize_model(models[i]);
    const bool same = parse_model(first) == models[i];
    c.expect(same, "round trip differs for model " + std::to_string(i));
    c.expect(first == second, "serialization not deterministic for model " + std::to_string(i));
    ok += same && first == second;
  }
  detail = std::to_string(ok) + "/" + std::to_string(models.size()) + " models (fixture + 20 random)";
}

void precision_recall_example(Check& c, std::string& detail) {
  LinkSet reference, retrieved;
  for (int i = 0; i < 95; ++i) {
    reference.insert("class:C" + std::to_string(i));
    if (i < 90) retrieved.insert("class:C" + std::to_string(i));
  }
  const auto r = precision_recall(retrieved, reference);
  c.expect(r.precision == Ratio{1, 1}, "precision is not exactly 1");
  c.expect(std::fabs(r.recall.value() - 0.94) <= 0.005, "recall " + format_ratio(r.recall) + " not within 0.005 of 0.94");
  std::vector<Project> models{testkit::fixture_project()};
  for (unsigned seed = 1; seed <= 20; ++seed) models.push_back(testkit::random_model(seed));
  for (const auto& p : models) {
    const auto links = extract_links(p);
    const auto self = precision_recall(links, links);
    c.expect(self.precision == Ratio{1, 1} && self.recall == Ratio{1, 1}, "self-evaluation of " + p.name);
  }
  detail = "precision " + format_ratio(r.precision) + " recall " + format_ratio(r.recall) + " (" +
           std::to_string(r.recall.numerator) + "/" + std::to_string(r.recall.denominator) + ")";
}

void dot_validity(Check& c, std::string& detail) {
  const Project& p = testkit::fixture_project();
  std::size_t parsed = 0;
  for (const bool merge : {false, true}) {
    DocumentOptions options;
    options.merge = merge;
    options.include_unresolved = merge;
    for (const auto& d : generate_documents(p, options)) {
      try {
        const auto g = testkit::parse_dot(d.dot);
        c.expect(g.directed, d.path.string() + " is not a digraph");
        for (const auto& [id, attrs] : g.nodes) {
          const auto label = attrs.find("label");
          c.expect(label != attrs.end(), d.path.string() + ": node without label " + id);
          if (label != attrs.end()) testkit::check_record_label(label->second);
        }
        for (const auto& e : g.edges) {
          c.expect(g.nodes.count(e.from) && g.nodes.count(e.to), d.path.string() + ": dangling edge " + e.from);
        }
        ++parsed;
      } catch (const std::exception& e) {
        c.expect(false, d.path.string() + ": " + e.what());
      }
    }
  }
  // Edge soundness both ways: DOT edges == relations recomputed from the model.
  const auto cross = [&](const DocumentGraph& g, const testkit::EdgeTriples& expected, const std::string& name) {
    const auto actual = testkit::dot_edges(testkit::parse_dot(serialize_dot(g)));
    c.expect(actual == expected, name + " edges differ from model relations");
  };
  cross(gen_package_document(p), testkit::expected_package_edges(p), "package");
  cross(gen_class_dependency_document(p), testkit::expected_class_dependency_edges(p), "class-dependency");
  cross(gen_method_dependency_document(p), testkit::expected_method_dependency_edges(p), "method-dependency");
  detail = std::to_string(parsed) + " documents parsed; edge cross-walk on 3 relation documents";
}

void loc_oracle(Check& c, std::string& detail) {
  std::size_t oracle = 0;
  for (const auto& f : scan_directory(testkit::fixture_dir())) oracle += testkit::oracle_loc(f.text);
  const std::size_t loc = testkit::fixture_project().loc;
  c.equal(loc, oracle, "LoC");
  // The original corpus reported LinesOfCode="1500"; this fixture is a
  // re-authored reconstruction, so that value is not asserted.
  detail = "LoC " + std::to_string(loc) + " == oracle " + std::to_string(oracle);
}

void scale_smoke(Check& c, std::string& detail) {
  const auto root = testkit::scratch_dir("scale");
  const auto files = testkit::synthetic_corpus(2024, {10, 21, 4, 6});
  testkit::write_corpus(files, root);
  const auto start = Clock::now();
  const Analysis a = analyze_directory(root, ".java", "synthetic");
  const std::string xml = serialize_model(a.project);
  const auto docs = generate_documents(a.project, DocumentOptions{});
  const auto out = testkit::scratch_dir("scale-out");
  write_documents(docs, out);
  const double elapsed = seconds_since(start);
  const MetricsRecord m = project_metrics(a.project);
  c.expect(m.noc >= 200, "only " + std::to_string(m.noc) + " classes");
  c.expect(a.failures.empty(), std::to_string(a.failures.size()) + " files failed to parse");
  c.expect(elapsed < 30.0, "runtime " + std::to_string(elapsed) + " s");
  for (const auto& problem : validate(a.project)) c.expect(false, problem);
  // Containment tree: each class under exactly one package, no external type
  // doubling as a container.
  std::set<std::string> seen;
  for (const auto& pkg : a.project.packages) {
    for (const auto& cls : pkg.classes) {
      c.expect(seen.insert(qualify(pkg.qualified_name, cls.name)).second, "class listed twice: " + cls.name);
    }
  }
  for (const auto& e : a.project.external_types) {
    for (const auto& pkg : a.project.packages) c.expect(pkg.qualified_name != e.name, "external type is a package");
  }
  c.expect(resolve_references(a.project) == a.project, "resolution not idempotent");
  c.expect(parse_model(xml) == a.project, "round trip differs at scale");
  std::filesystem::remove_all(root);
  std::filesystem::remove_all(out);
  std::ostringstream s;
  s << m.noc << " classes, " << m.nom << " methods, " << docs.size() << " documents in " << elapsed << " s";
  detail = s.str();
}

}  // namespace

// `--expect-fail N` marks criterion N as known-unattainable: its FAIL line is
// still printed, but it only affects the exit status if it unexpectedly passes.
int main(int argc, char** argv) {
  std::set<std::string> expected_failures;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--expect-fail") expected_failures.insert(argv[++i]);
  }
  const std::vector<std::pair<std::string, std::function<void(Check&, std::string&)>>> criteria = {
      {"1 fixture fidelity", fixture_fidelity},
      {"2 inheritance edges", inheritance_edges},
      {"3 method dependencies", method_dependencies},
      {"4 xml round-trip", xml_round_trip},
      {"5 precision/recall", precision_recall_example},
      {"6 dot validity", dot_validity},
      {"7 loc oracle", loc_oracle},
      {"8 scale smoke test", scale_smoke},
  };
  int failed = 0, unexpected = 0;
  for (const auto& [name, run] : criteria) {
    const bool xfail = expected_failures.count(name.substr(0, name.find(' '))) != 0;
    Check check;
    std::string detail;
    try {
      run(check, detail);
    } catch (const std::exception& e) {
      check.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = check.failures().empty();
    failed += !ok;
    unexpected += ok == xfail;
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << name << (detail.empty() ? "" : " -- " + detail)
              << (xfail ? (ok ? " (expected to fail)" : " (known unattainable)") : "") << "\n";
    for (const auto& f : check.failures()) std::cout << "      " << f << "\n";
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return unexpected;
}
