#pragma once

// Documentation graphs (package, class and method documents) and their DOT
// serialization.
//
// Palette: project lightyellow, packages lightgray, classes lightblue,
// interfaces white, external types dotted outline, methods aliceblue,
// attributes honeydew. Edge styles: inherits solid/empty arrow, implements
// dashed/empty arrow, invokes solid/normal arrow, accesses dashed/vee arrow,
// contains diamond tail.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "oodoc/code_model.hpp"
#include "oodoc/metrics.hpp"

namespace oodoc {

enum class DocumentKind { Package, ClassInfo, ClassDependency, ClassContent, MethodInfo, MethodContent, MethodDependency };

inline constexpr std::array<DocumentKind, 7> kAllDocumentKinds = {
    DocumentKind::Package,      DocumentKind::ClassInfo,     DocumentKind::ClassDependency,
    DocumentKind::ClassContent, DocumentKind::MethodInfo,    DocumentKind::MethodContent,
    DocumentKind::MethodDependency};

inline std::string_view to_string(DocumentKind kind) {
  switch (kind) {
    case DocumentKind::Package: return "package";
    case DocumentKind::ClassInfo: return "class-info";
    case DocumentKind::ClassDependency: return "class-dependency";
    case DocumentKind::ClassContent: return "class-content";
    case DocumentKind::MethodInfo: return "method-info";
    case DocumentKind::MethodContent: return "method-content";
    case DocumentKind::MethodDependency: return "method-dependency";
  }
  return "package";
}

inline std::optional<DocumentKind> parse_document_kind(std::string_view text) {
  for (const auto kind : kAllDocumentKinds) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

enum class NodeStyle { Project, Package, Class, Interface, External, Method, Attribute };
enum class EdgeKind { Contains, Inherits, Implements, Invokes, Accesses };

inline std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Contains: return "contains";
    case EdgeKind::Inherits: return "inherits";
    case EdgeKind::Implements: return "implements";
    case EdgeKind::Invokes: return "invokes";
    case EdgeKind::Accesses: return "accesses";
  }
  return "contains";
}

// One line of a record label. An empty field renders the value alone; the
// note, when present, renders in brackets.
struct LabelRow {
  std::string field;
  std::string value;
  std::string note;

  bool operator==(const LabelRow&) const = default;
};

struct GraphNode {
  std::string id;
  std::vector<LabelRow> rows;  // rows[0] is the header
  NodeStyle style = NodeStyle::Class;
  std::string group;           // rendered as a cluster when non-empty

  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::Contains;
  std::string label;

  bool operator==(const GraphEdge&) const = default;
};

struct DocumentGraph {
  DocumentKind kind = DocumentKind::Package;
  std::string name;
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;

  const GraphNode* find_node(std::string_view id) const {
    for (const auto& n : nodes) {
      if (n.id == id) return &n;
    }
    return nullptr;
  }

  bool operator==(const DocumentGraph&) const = default;
};

namespace detail {

inline std::string display_type(const std::string& type) {
  if (type.empty()) return "-";
  return simple_name(type);
}

inline std::string flag(bool b) { return b ? "TRUE" : "FALSE"; }

inline std::string package_label(const std::string& name) { return name.empty() ? "(default)" : name; }

inline void add_edge_once(DocumentGraph& g, std::set<std::tuple<std::string, std::string, EdgeKind>>& seen,
                          GraphEdge edge) {
  if (seen.emplace(edge.from, edge.to, edge.kind).second) g.edges.push_back(std::move(edge));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Package document

inline DocumentGraph gen_package_document(const Project& project) {
  DocumentGraph g{DocumentKind::Package, "package", {}, {}};
  const MetricsRecord m = project_metrics(project);
  g.nodes.push_back({"project",
                     {{"", project.name, ""},
                      {"LoC", std::to_string(m.loc), ""},
                      {"NoP", std::to_string(m.nop), ""},
                      {"NoC", std::to_string(m.noc), ""},
                      {"NoA", std::to_string(m.noa), ""},
                      {"NoM", std::to_string(m.nom), ""}},
                     NodeStyle::Project,
                     ""});
  std::set<std::string> declared;
  for (const auto& pkg : project.packages) declared.insert(pkg.qualified_name);
  for (const auto& pkg : project.packages) {
    const std::string id = "package:" + pkg.qualified_name;
    g.nodes.push_back({id,
                       {{"", detail::package_label(pkg.qualified_name), ""},
                        {"Classes", std::to_string(pkg.classes.size()), ""}},
                       NodeStyle::Package,
                       ""});
    std::string parent = parent_package(pkg.qualified_name);
    while (!parent.empty() && !declared.count(parent)) parent = parent_package(parent);
    const std::string from = parent.empty() ? "project" : "package:" + parent;
    g.edges.push_back({from, id, EdgeKind::Contains, ""});
  }
  return g;
}

// ---------------------------------------------------------------------------
// Class documents

inline DocumentGraph gen_class_information_document(const Project& project) {
  DocumentGraph g{DocumentKind::ClassInfo, "class-info", {}, {}};
  for (const auto& pkg : project.packages) {
    for (const auto& cls : pkg.classes) {
      std::vector<std::string> interfaces;
      for (const auto& i : cls.super_interfaces) interfaces.push_back(simple_name(i));
      std::string joined;
      for (std::size_t i = 0; i < interfaces.size(); ++i) joined += (i ? ", " : "") + interfaces[i];
      const auto counts = class_metrics(cls);
      g.nodes.push_back({qualify(pkg.qualified_name, cls.name),
                         {{"", cls.name, ""},
                          {"Superclass", cls.superclass ? simple_name(*cls.superclass) : "-", ""},
                          {"IsInterface", detail::flag(cls.is_interface), ""},
                          {"SuperInterfaces", joined.empty() ? "-" : joined, ""},
                          {"Number of Attributes", std::to_string(counts.noa), ""},
                          {"Number of Methods", std::to_string(counts.nom), ""}},
                         cls.is_interface ? NodeStyle::Interface : NodeStyle::Class,
                         detail::package_label(pkg.qualified_name)});
    }
  }
  return g;
}

inline DocumentGraph gen_class_dependency_document(const Project& project) {
  DocumentGraph g{DocumentKind::ClassDependency, "class-dependency", {}, {}};
  const ClassIndex index(project);
  std::set<std::string> externals;
  std::set<std::tuple<std::string, std::string, EdgeKind>> seen;
  const auto target = [&](const std::string& type) {
    if (index.contains(type)) return type;
    externals.insert(type);
    return "external:" + type;
  };
  for (const auto& pkg : project.packages) {
    for (const auto& cls : pkg.classes) {
      const std::string id = qualify(pkg.qualified_name, cls.name);
      g.nodes.push_back({id, {{"", cls.name, ""}}, cls.is_interface ? NodeStyle::Interface : NodeStyle::Class,
                         detail::package_label(pkg.qualified_name)});
      if (cls.superclass) detail::add_edge_once(g, seen, {id, target(*cls.superclass), EdgeKind::Inherits, ""});
      for (const auto& i : cls.super_interfaces) {
        detail::add_edge_once(g, seen,
                              {id, target(i), cls.is_interface ? EdgeKind::Inherits : EdgeKind::Implements, ""});
      }
    }
  }
  for (const auto& name : externals) {
    g.nodes.push_back({"external:" + name, {{"", name, ""}}, NodeStyle::External, ""});
  }
  return g;
}

inline DocumentGraph gen_class_content_document(const Project& project) {
  DocumentGraph g{DocumentKind::ClassContent, "class-content", {}, {}};
  for (const auto& pkg : project.packages) {
    for (const auto& cls : pkg.classes) {
      GraphNode node{qualify(pkg.qualified_name, cls.name), {{"", cls.name, ""}},
                     cls.is_interface ? NodeStyle::Interface : NodeStyle::Class,
                     detail::package_label(pkg.qualified_name)};
      for (const auto& a : cls.attributes) node.rows.push_back({a.name, detail::display_type(a.declared_type), ""});
      for (const auto& m : cls.methods) {
        node.rows.push_back({m.name + "()", m.is_constructor ? "-" : detail::display_type(m.return_type), ""});
      }
      g.nodes.push_back(std::move(node));
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Method documents

namespace detail {

inline std::string method_node_id(const std::string& cls, const MethodEntity& m) { return cls + "#" + m.signature(); }

inline GraphNode method_info_node(const std::string& owner, const MethodEntity& m, std::string group) {
  GraphNode node{method_node_id(owner, m),
                 {{"", m.name, ""},
                  {"ReturnType", m.is_constructor ? "-" : display_type(m.return_type), ""},
                  {"IsStatic", flag(m.is_static), ""},
                  {"NumberOfParameters", std::to_string(m.parameters.size()), ""}},
                 NodeStyle::Method,
                 std::move(group)};
  for (const auto& p : m.parameters) {
    node.rows.push_back({"Parameter " + std::to_string(p.order), p.name + " : " + display_type(p.declared_type), ""});
  }
  return node;
}

inline GraphNode method_content_node(const ClassIndex& index, const std::string& owner, const MethodEntity& m,
                                     std::string group) {
  GraphNode node{method_node_id(owner, m), {{"", m.signature(), ""}}, NodeStyle::Method, std::move(group)};
  for (const auto& l : m.local_variables) {
    node.rows.push_back({"local", l.name + " : " + display_type(l.declared_type), ""});
  }
  for (const auto& a : m.accesses) {
    std::string value = a.attribute_name;
    if (a.resolved) {
      if (const auto found = index.find_attribute(a.declaring_class, a.attribute_name)) {
        value += " : " + display_type(found->second->declared_type);
      }
    }
    node.rows.push_back({"access", value, a.declaring_class.empty() ? "" : simple_name(a.declaring_class)});
  }
  for (const auto& c : m.invocations) {
    node.rows.push_back({"invocation", c.method_name, c.declaring_class.empty() ? "" : simple_name(c.declaring_class)});
  }
  return node;
}

inline const Package* owning_package(const Project& project, const ClassEntity& cls) {
  for (const auto& pkg : project.packages) {
    for (const auto& c : pkg.classes) {
      if (&c == &cls) return &pkg;
    }
  }
  return nullptr;
}

}  // namespace detail

// Per-class method information document. `package` qualifies node ids.
inline DocumentGraph gen_method_information_document(const ClassEntity& cls, std::string_view package = "") {
  const std::string owner = qualify(package, cls.name);
  DocumentGraph g{DocumentKind::MethodInfo, owner, {}, {}};
  for (const auto& m : cls.methods) g.nodes.push_back(detail::method_info_node(owner, m, ""));
  return g;
}

// All classes in one document, one cluster per class.
inline DocumentGraph gen_method_information_document(const Project& project) {
  DocumentGraph g{DocumentKind::MethodInfo, "method-info", {}, {}};
  for (const auto& pkg : project.packages) {
    for (const auto& cls : pkg.classes) {
      const std::string owner = qualify(pkg.qualified_name, cls.name);
      for (const auto& m : cls.methods) g.nodes.push_back(detail::method_info_node(owner, m, owner));
    }
  }
  return g;
}

// Per-class method content document. Access rows show the attribute type
// when resolved; notes carry the declaring class.
inline DocumentGraph gen_method_content_document(const Project& project, const ClassEntity& cls) {
  const Package* pkg = detail::owning_package(project, cls);
  const std::string owner = qualify(pkg ? pkg->qualified_name : "", cls.name);
  DocumentGraph g{DocumentKind::MethodContent, owner, {}, {}};
  const ClassIndex index(project);
  for (const auto& m : cls.methods) g.nodes.push_back(detail::method_content_node(index, owner, m, ""));
  return g;
}

inline DocumentGraph gen_method_content_document(const Project& project) {
  DocumentGraph g{DocumentKind::MethodContent, "method-content", {}, {}};
  const ClassIndex index(project);
  for (const auto& pkg : project.packages) {
    for (const auto& cls : pkg.classes) {
      const std::string owner = qualify(pkg.qualified_name, cls.name);
      for (const auto& m : cls.methods) g.nodes.push_back(detail::method_content_node(index, owner, m, owner));
    }
  }
  return g;
}

// Node ids of the method dependency document. Methods are identified by
// class and name (invocations resolve by name, not overload).
inline std::string method_dependency_method_id(std::string_view cls, std::string_view method) {
  return "method:" + std::string(cls) + "." + std::string(method);
}
inline std::string method_dependency_attribute_id(std::string_view cls, std::string_view attr) {
  return "attribute:" + std::string(cls) + "#" + std::string(attr);
}

// invokes (method -> method) and accesses (method -> attribute) edges.
// Resolved relations only unless `include_unresolved`; a method invoking its
// own name in its own class is not drawn.
inline DocumentGraph gen_method_dependency_document(const Project& project, bool include_unresolved = false) {
  DocumentGraph g{DocumentKind::MethodDependency, "method-dependency", {}, {}};
  const ClassIndex index(project);
  std::map<std::string, GraphNode> pending;
  std::vector<std::string> order;
  const auto touch = [&](const std::string& id, const std::string& cls, const std::string& member, bool is_method) {
    if (pending.count(id)) return;
    const bool internal = index.contains(cls);
    const std::string shown = cls.empty() ? "?" : simple_name(cls);
    pending.emplace(id, GraphNode{id,
                                  {{"", shown + "." + member, ""}},
                                  internal ? (is_method ? NodeStyle::Method : NodeStyle::Attribute) : NodeStyle::External,
                                  internal ? cls : ""});
    order.push_back(id);
  };
  std::set<std::tuple<std::string, std::string, EdgeKind>> seen;
  for (const auto& pkg : project.packages) {
    for (const auto& cls : pkg.classes) {
      const std::string owner = qualify(pkg.qualified_name, cls.name);
      for (const auto& m : cls.methods) {
        const std::string from = method_dependency_method_id(owner, m.name);
        for (const auto& c : m.invocations) {
          if (!c.resolved && !include_unresolved) continue;
          if (c.declaring_class == owner && c.method_name == m.name) continue;
          const std::string to = method_dependency_method_id(c.declaring_class.empty() ? "?" : c.declaring_class,
                                                             c.method_name);
          touch(from, owner, m.name, true);
          touch(to, c.declaring_class, c.method_name, true);
          detail::add_edge_once(g, seen, {from, to, EdgeKind::Invokes, ""});
        }
        for (const auto& a : m.accesses) {
          if (!a.resolved && !include_unresolved) continue;
          const std::string to = method_dependency_attribute_id(a.declaring_class.empty() ? "?" : a.declaring_class,
                                                                a.attribute_name);
          touch(from, owner, m.name, true);
          touch(to, a.declaring_class, a.attribute_name, false);
          detail::add_edge_once(g, seen, {from, to, EdgeKind::Accesses, ""});
        }
      }
    }
  }
  // Group nodes by class (stable within a class) so clusters stay contiguous.
  std::stable_sort(order.begin(), order.end(),
                   [&](const std::string& a, const std::string& b) { return pending[a].group < pending[b].group; });
  for (const auto& id : order) g.nodes.push_back(pending[id]);
  return g;
}

// ---------------------------------------------------------------------------
// DOT

namespace detail {

// Escapes text for a record field inside a double-quoted DOT string.
inline std::string record_escape(std::string_view text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '{': case '}': case '|': case '<': case '>':
        out += '\\';
        out += c;
        break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string quote_id(std::string_view id) {
  std::string out = "\"";
  for (const char c : id) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string record_label(const GraphNode& node) {
  std::string label = "{";
  for (std::size_t i = 0; i < node.rows.size(); ++i) {
    const auto& row = node.rows[i];
    std::string text = row.field.empty() ? row.value : row.field + ": " + row.value;
    if (!row.note.empty()) text += " [" + row.note + "]";
    if (i) label += "|";
    label += record_escape(text);
    if (i) label += "\\l";
  }
  return label + "}";
}

inline std::string_view node_style(NodeStyle style) {
  switch (style) {
    case NodeStyle::Project: return "style=filled, fillcolor=\"lightyellow\"";
    case NodeStyle::Package: return "style=filled, fillcolor=\"lightgray\"";
    case NodeStyle::Class: return "style=filled, fillcolor=\"lightblue\"";
    case NodeStyle::Interface: return "style=filled, fillcolor=\"white\"";
    case NodeStyle::External: return "style=dotted";
    case NodeStyle::Method: return "style=filled, fillcolor=\"aliceblue\"";
    case NodeStyle::Attribute: return "style=filled, fillcolor=\"honeydew\"";
  }
  return "";
}

inline std::string_view edge_style(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Contains: return "dir=back, arrowtail=diamond, style=solid";
    case EdgeKind::Inherits: return "arrowhead=empty, style=solid";
    case EdgeKind::Implements: return "arrowhead=empty, style=dashed";
    case EdgeKind::Invokes: return "arrowhead=normal, style=solid";
    case EdgeKind::Accesses: return "arrowhead=vee, style=dashed";
  }
  return "";
}

}  // namespace detail

// Nodes in model order (consecutive nodes of one group form a cluster);
// edges sorted by (from, to, kind).
inline std::string serialize_dot(const DocumentGraph& graph) {
  std::ostringstream out;
  const std::string_view kind = to_string(graph.kind);
  out << "digraph " << detail::quote_id(kind) << " {\n";
  out << "  graph [label=" << detail::quote_id(graph.name) << ", labelloc=t, fontname=\"Helvetica\", rankdir="
      << (graph.kind == DocumentKind::Package ? "TB" : "BT") << "];\n";
  out << "  node [shape=record, fontname=\"Helvetica\", fontsize=10];\n";
  out << "  edge [fontname=\"Helvetica\", fontsize=9];\n";
  int cluster = 0;
  std::size_t i = 0;
  while (i < graph.nodes.size()) {
    const std::string& group = graph.nodes[i].group;
    std::size_t j = i;
    while (j < graph.nodes.size() && graph.nodes[j].group == group) ++j;
    std::string indent = "  ";
    if (!group.empty()) {
      out << "  subgraph " << detail::quote_id("cluster_" + std::to_string(cluster++)) << " {\n";
      out << "    label=" << detail::quote_id(group) << ";\n";
      indent = "    ";
    }
    for (std::size_t k = i; k < j; ++k) {
      const auto& node = graph.nodes[k];
      out << indent << detail::quote_id(node.id) << " [shape=record, label=\"" << detail::record_label(node) << "\", "
          << detail::node_style(node.style) << "];\n";
    }
    if (!group.empty()) out << "  }\n";
    i = j;
  }
  std::vector<const GraphEdge*> edges;
  for (const auto& e : graph.edges) edges.push_back(&e);
  std::sort(edges.begin(), edges.end(), [](const GraphEdge* a, const GraphEdge* b) {
    return std::tie(a->from, a->to, a->kind) < std::tie(b->from, b->to, b->kind);
  });
  for (const auto* e : edges) {
    out << "  " << detail::quote_id(e->from) << " -> " << detail::quote_id(e->to) << " [" << detail::edge_style(e->kind);
    if (!e->label.empty()) out << ", label=" << detail::quote_id(e->label);
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace oodoc
