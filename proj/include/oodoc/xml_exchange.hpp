#pragma once

// XML exchange format for Project models.
//
//   Project(ProjectName, LinesOfCode)
//     Packages / Package(PackageName)
//       Classes / Class(ClassName, classAccessLevel, IsInterface, [SuperClass], [Imports])
//         SuperInterfaces([Names])
//         Attributes / Attribute(AttributeName, AttributeType, AttributeAccessLevel, IsStatic)
//         Methods / Method(MethodName, MethodAccessLevel, [ReturnType], IsStatic, IsConstructor)
//           Parameters(NumberOfParameters) / Parameter(Name, DeclaredType, Order)
//           LocalVariables / LocalVariable(Name, DeclaredType)
//           AttributeAccesses / AttributeAccess(Name, Receiver, DeclaringClass, Resolved)
//           MethodInvocations / MethodInvocation(Name, Receiver, DeclaringClass, Resolved)
//           MethodExceptions / MethodException(Name)
//
// Lists inside attribute values (Names, Imports) are comma separated.

#include <expat.h>

#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oodoc/code_model.hpp"
#include "oodoc/errors.hpp"

namespace oodoc {

namespace detail {

inline std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    out.emplace_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class XmlWriter {
 public:
  using Attrs = std::vector<std::pair<std::string_view, std::string>>;

  void open(std::string_view name, const Attrs& attrs = {}) {
    line(name, attrs, false);
    ++depth_;
  }
  void close(std::string_view name) {
    --depth_;
    indent();
    out_ << "</" << name << ">\n";
  }
  void empty(std::string_view name, const Attrs& attrs = {}) { line(name, attrs, true); }
  std::string str() const { return out_.str(); }

 private:
  void indent() {
    for (int i = 0; i < depth_; ++i) out_ << "  ";
  }
  void line(std::string_view name, const Attrs& attrs, bool self_closing) {
    indent();
    out_ << '<' << name;
    for (const auto& [key, value] : attrs) out_ << ' ' << key << "=\"" << xml_escape(value) << '"';
    out_ << (self_closing ? "/>\n" : ">\n");
  }

  std::ostringstream out_;
  int depth_ = 0;
};

inline std::string bool_text(bool b) { return b ? "true" : "false"; }

template <typename T, typename F>
void write_list(XmlWriter& w, std::string_view container, const std::vector<T>& items, F&& write_item,
                const XmlWriter::Attrs& attrs = {}) {
  if (items.empty()) {
    w.empty(container, attrs);
    return;
  }
  w.open(container, attrs);
  for (const auto& item : items) write_item(item);
  w.close(container);
}

}  // namespace detail

inline std::string serialize_model(const Project& project) {
  using detail::bool_text;
  detail::XmlWriter w;
  std::string doc = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  w.open("Project", {{"ProjectName", project.name}, {"LinesOfCode", std::to_string(project.loc)}});
  detail::write_list(w, "Packages", project.packages, [&](const Package& pkg) {
    w.open("Package", {{"PackageName", pkg.qualified_name}});
    detail::write_list(w, "Classes", pkg.classes, [&](const ClassEntity& cls) {
      detail::XmlWriter::Attrs attrs = {{"ClassName", cls.name},
                                        {"classAccessLevel", std::string(to_string(cls.access))},
                                        {"IsInterface", bool_text(cls.is_interface)}};
      if (cls.superclass) attrs.emplace_back("SuperClass", *cls.superclass);
      if (!cls.imports.empty()) attrs.emplace_back("Imports", detail::join(cls.imports, ","));
      w.open("Class", attrs);
      if (cls.super_interfaces.empty()) {
        w.empty("SuperInterfaces");
      } else {
        w.empty("SuperInterfaces", {{"Names", detail::join(cls.super_interfaces, ",")}});
      }
      detail::write_list(w, "Attributes", cls.attributes, [&](const AttributeEntity& a) {
        w.empty("Attribute", {{"AttributeName", a.name},
                              {"AttributeType", a.declared_type},
                              {"AttributeAccessLevel", std::string(to_string(a.access))},
                              {"IsStatic", bool_text(a.is_static)}});
      });
      detail::write_list(w, "Methods", cls.methods, [&](const MethodEntity& m) {
        detail::XmlWriter::Attrs mattrs = {{"MethodName", m.name},
                                           {"MethodAccessLevel", std::string(to_string(m.access))}};
        if (!m.is_constructor) mattrs.emplace_back("ReturnType", m.return_type);
        mattrs.emplace_back("IsStatic", bool_text(m.is_static));
        mattrs.emplace_back("IsConstructor", bool_text(m.is_constructor));
        w.open("Method", mattrs);
        detail::write_list(
            w, "Parameters", m.parameters,
            [&](const Parameter& p) {
              w.empty("Parameter",
                      {{"Name", p.name}, {"DeclaredType", p.declared_type}, {"Order", std::to_string(p.order)}});
            },
            {{"NumberOfParameters", std::to_string(m.parameters.size())}});
        detail::write_list(w, "LocalVariables", m.local_variables, [&](const LocalVariableEntity& l) {
          w.empty("LocalVariable", {{"Name", l.name}, {"DeclaredType", l.declared_type}});
        });
        detail::write_list(w, "AttributeAccesses", m.accesses, [&](const AccessRelation& a) {
          w.empty("AttributeAccess", {{"Name", a.attribute_name},
                                      {"Receiver", a.receiver},
                                      {"DeclaringClass", a.declaring_class},
                                      {"Resolved", bool_text(a.resolved)}});
        });
        detail::write_list(w, "MethodInvocations", m.invocations, [&](const InvocationRelation& c) {
          w.empty("MethodInvocation", {{"Name", c.method_name},
                                       {"Receiver", c.receiver},
                                       {"DeclaringClass", c.declaring_class},
                                       {"Resolved", bool_text(c.resolved)}});
        });
        detail::write_list(w, "MethodExceptions", m.throws,
                           [&](const std::string& e) { w.empty("MethodException", {{"Name", e}}); });
        w.close("Method");
      });
      w.close("Class");
    });
    w.close("Package");
  });
  w.close("Project");
  return doc + w.str();
}

// ---------------------------------------------------------------------------
// Reading

namespace detail {

struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<std::unique_ptr<XmlElement>> children;
  long line = 0;
};

// Builds an element tree with expat; malformed XML becomes SchemaError.
inline std::unique_ptr<XmlElement> read_xml(std::string_view text) {
  struct State {
    XML_Parser parser;
    std::unique_ptr<XmlElement> root;
    std::vector<XmlElement*> stack;
    long text_line = 0;
  };
  State state;
  state.parser = XML_ParserCreate("UTF-8");
  if (!state.parser) throw Error("cannot create XML parser");
  const std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> guard(state.parser, &XML_ParserFree);
  XML_SetUserData(state.parser, &state);
  XML_SetElementHandler(
      state.parser,
      [](void* data, const XML_Char* name, const XML_Char** attrs) {
        auto& s = *static_cast<State*>(data);
        auto element = std::make_unique<XmlElement>();
        element->name = name;
        element->line = static_cast<long>(XML_GetCurrentLineNumber(s.parser));
        for (int i = 0; attrs[i]; i += 2) element->attributes.emplace_back(attrs[i], attrs[i + 1]);
        XmlElement* raw = element.get();
        if (s.stack.empty()) {
          s.root = std::move(element);
        } else {
          s.stack.back()->children.push_back(std::move(element));
        }
        s.stack.push_back(raw);
      },
      [](void* data, const XML_Char*) { static_cast<State*>(data)->stack.pop_back(); });
  XML_SetCharacterDataHandler(state.parser, [](void* data, const XML_Char* s, int len) {
    auto& st = *static_cast<State*>(data);
    for (int i = 0; i < len; ++i) {
      if (!std::isspace(static_cast<unsigned char>(s[i]))) {
        if (st.text_line == 0) st.text_line = static_cast<long>(XML_GetCurrentLineNumber(st.parser));
        return;
      }
    }
  });
  if (XML_Parse(state.parser, text.data(), static_cast<int>(text.size()), XML_TRUE) == XML_STATUS_ERROR) {
    throw SchemaError(static_cast<long>(XML_GetCurrentLineNumber(state.parser)),
                      std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(state.parser)));
  }
  if (state.text_line != 0) throw SchemaError(state.text_line, "unexpected text content");
  return std::move(state.root);
}

class ModelReader {
 public:
  Project project(const XmlElement& e) {
    expect_name(e, "Project");
    check_attributes(e, {"ProjectName", "LinesOfCode"}, {});
    Project p;
    p.name = required(e, "ProjectName");
    p.loc = number(e, "LinesOfCode");
    for (const XmlElement* packages : children(e, {"Packages"}, /*at_most_once=*/true)) {
      check_attributes(*packages, {}, {});
      for (const XmlElement* pkg : children(*packages, {"Package"})) p.packages.push_back(package(*pkg));
    }
    p.external_types = detail::collect_external_types(p);
    return p;
  }

 private:
  Package package(const XmlElement& e) {
    check_attributes(e, {"PackageName"}, {});
    Package pkg;
    pkg.qualified_name = required(e, "PackageName");
    for (const XmlElement* classes : children(e, {"Classes"}, true)) {
      check_attributes(*classes, {}, {});
      for (const XmlElement* c : children(*classes, {"Class"})) pkg.classes.push_back(class_entity(*c));
    }
    return pkg;
  }

  ClassEntity class_entity(const XmlElement& e) {
    check_attributes(e, {"ClassName", "classAccessLevel", "IsInterface"}, {"SuperClass", "Imports"});
    ClassEntity cls;
    cls.name = required(e, "ClassName");
    cls.access = access(e, "classAccessLevel");
    cls.is_interface = boolean(e, "IsInterface");
    if (const auto* s = optional(e, "SuperClass")) cls.superclass = *s;
    if (const auto* s = optional(e, "Imports")) cls.imports = split_list(*s);
    for (const XmlElement* c : children(e, {"SuperInterfaces", "Attributes", "Methods"}, true)) {
      if (c->name == "SuperInterfaces") {
        check_attributes(*c, {}, {"Names"});
        if (const auto* s = optional(*c, "Names")) cls.super_interfaces = split_list(*s);
        children(*c, {});
      } else if (c->name == "Attributes") {
        check_attributes(*c, {}, {});
        for (const XmlElement* a : children(*c, {"Attribute"})) {
          check_attributes(*a, {"AttributeName", "AttributeType", "AttributeAccessLevel", "IsStatic"}, {});
          children(*a, {});
          cls.attributes.push_back({required(*a, "AttributeName"), required(*a, "AttributeType"),
                                    access(*a, "AttributeAccessLevel"), boolean(*a, "IsStatic")});
        }
      } else {
        check_attributes(*c, {}, {});
        for (const XmlElement* m : children(*c, {"Method"})) cls.methods.push_back(method(*m));
      }
    }
    return cls;
  }

  MethodEntity method(const XmlElement& e) {
    check_attributes(e, {"MethodName", "MethodAccessLevel", "IsStatic", "IsConstructor"}, {"ReturnType"});
    MethodEntity m;
    m.name = required(e, "MethodName");
    m.access = access(e, "MethodAccessLevel");
    m.is_static = boolean(e, "IsStatic");
    m.is_constructor = boolean(e, "IsConstructor");
    if (const auto* r = optional(e, "ReturnType")) m.return_type = *r;
    const auto kids = children(
        e, {"Parameters", "LocalVariables", "AttributeAccesses", "MethodInvocations", "MethodExceptions"}, true);
    for (const XmlElement* c : kids) {
      if (c->name == "Parameters") {
        check_attributes(*c, {}, {"NumberOfParameters"});
        for (const XmlElement* p : children(*c, {"Parameter"})) {
          check_attributes(*p, {"Name", "DeclaredType", "Order"}, {});
          children(*p, {});
          m.parameters.push_back({required(*p, "Name"), required(*p, "DeclaredType"), number(*p, "Order")});
        }
        if (optional(*c, "NumberOfParameters") && number(*c, "NumberOfParameters") != m.parameters.size()) {
          throw ConsistencyError(c->line, "NumberOfParameters=\"" + required(*c, "NumberOfParameters") +
                                              "\" but " + std::to_string(m.parameters.size()) +
                                              " Parameter elements in method " + m.name);
        }
        for (std::size_t i = 0; i < m.parameters.size(); ++i) {
          if (m.parameters[i].order != i) {
            throw ConsistencyError(c->line, "parameter Order values of method " + m.name + " are not 0..n-1");
          }
        }
      } else if (c->name == "LocalVariables") {
        check_attributes(*c, {}, {});
        for (const XmlElement* l : children(*c, {"LocalVariable"})) {
          check_attributes(*l, {"Name", "DeclaredType"}, {});
          children(*l, {});
          m.local_variables.push_back({required(*l, "Name"), required(*l, "DeclaredType")});
        }
      } else if (c->name == "AttributeAccesses") {
        check_attributes(*c, {}, {});
        for (const XmlElement* a : children(*c, {"AttributeAccess"})) {
          check_attributes(*a, {"Name", "Receiver", "DeclaringClass", "Resolved"}, {});
          children(*a, {});
          m.accesses.push_back(
              {required(*a, "Name"), required(*a, "Receiver"), required(*a, "DeclaringClass"), boolean(*a, "Resolved")});
        }
      } else if (c->name == "MethodInvocations") {
        check_attributes(*c, {}, {});
        for (const XmlElement* i : children(*c, {"MethodInvocation"})) {
          check_attributes(*i, {"Name", "Receiver", "DeclaringClass", "Resolved"}, {});
          children(*i, {});
          m.invocations.push_back(
              {required(*i, "Name"), required(*i, "Receiver"), required(*i, "DeclaringClass"), boolean(*i, "Resolved")});
        }
      } else {
        check_attributes(*c, {}, {});
        for (const XmlElement* x : children(*c, {"MethodException"})) {
          check_attributes(*x, {"Name"}, {});
          children(*x, {});
          m.throws.push_back(required(*x, "Name"));
        }
      }
    }
    return m;
  }

  // -- helpers --------------------------------------------------------------

  static void expect_name(const XmlElement& e, std::string_view name) {
    if (e.name != name) throw SchemaError(e.line, "expected <" + std::string(name) + ">, found <" + e.name + ">");
  }

  static std::vector<const XmlElement*> children(const XmlElement& e, std::set<std::string_view> allowed,
                                                 bool at_most_once = false) {
    std::vector<const XmlElement*> out;
    std::set<std::string> seen;
    for (const auto& child : e.children) {
      if (!allowed.count(child->name)) {
        throw SchemaError(child->line, "unknown element <" + child->name + "> inside <" + e.name + ">");
      }
      if (at_most_once && !seen.insert(child->name).second) {
        throw SchemaError(child->line, "repeated element <" + child->name + "> inside <" + e.name + ">");
      }
      out.push_back(child.get());
    }
    return out;
  }

  static void check_attributes(const XmlElement& e, std::set<std::string_view> required_names,
                               std::set<std::string_view> optional_names) {
    for (const auto& [key, value] : e.attributes) {
      if (!required_names.count(key) && !optional_names.count(key)) {
        throw SchemaError(e.line, "unknown attribute " + key + " on <" + e.name + ">");
      }
    }
    for (const auto name : required_names) {
      if (!optional(e, name)) throw SchemaError(e.line, "missing attribute " + std::string(name) + " on <" + e.name + ">");
    }
  }

  static const std::string* optional(const XmlElement& e, std::string_view name) {
    for (const auto& [key, value] : e.attributes) {
      if (key == name) return &value;
    }
    return nullptr;
  }

  static std::string required(const XmlElement& e, std::string_view name) {
    const auto* v = optional(e, name);
    if (!v) throw SchemaError(e.line, "missing attribute " + std::string(name) + " on <" + e.name + ">");
    return *v;
  }

  static std::size_t number(const XmlElement& e, std::string_view name) {
    const std::string v = required(e, name);
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
      throw SchemaError(e.line, std::string(name) + " is not a non-negative integer: '" + v + "'");
    }
    return static_cast<std::size_t>(std::stoull(v));
  }

  static bool boolean(const XmlElement& e, std::string_view name) {
    const std::string v = required(e, name);
    if (v == "true") return true;
    if (v == "false") return false;
    throw SchemaError(e.line, std::string(name) + " must be true or false: '" + v + "'");
  }

  static AccessLevel access(const XmlElement& e, std::string_view name) {
    const std::string v = required(e, name);
    for (const auto level : {AccessLevel::Public, AccessLevel::Protected, AccessLevel::Private, AccessLevel::Package}) {
      if (v == to_string(level)) return level;
    }
    throw SchemaError(e.line, std::string(name) + " is not an access level: '" + v + "'");
  }
};

}  // namespace detail

// Throws SchemaError (with line) for malformed documents, unknown elements or
// attributes; ConsistencyError when a count attribute disagrees.
inline Project parse_model(std::string_view document) {
  const auto root = detail::read_xml(document);
  if (!root) throw SchemaError(1, "empty document");
  return detail::ModelReader().project(*root);
}

}  // namespace oodoc
