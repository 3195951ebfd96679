#pragma once

// Resolved project model: package -> class -> member containment plus
// inheritance, attribute-access and method-invocation relations.

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "oodoc/errors.hpp"
#include "oodoc/source_parser.hpp"

namespace oodoc {

struct Parameter {
  std::string name;
  std::string declared_type;
  std::size_t order = 0;

  bool operator==(const Parameter&) const = default;
};

struct LocalVariableEntity {
  std::string name;
  std::string declared_type;

  bool operator==(const LocalVariableEntity&) const = default;
};

// The accessing method is the MethodEntity that owns the relation.
struct AccessRelation {
  std::string attribute_name;
  std::string receiver;         // source receiver expression, "" for implicit this
  std::string declaring_class;  // qualified if internal, as written if external, "" if unknown
  bool resolved = false;

  bool operator==(const AccessRelation&) const = default;
};

struct InvocationRelation {
  std::string method_name;
  std::string receiver;
  std::string declaring_class;
  bool resolved = false;

  bool operator==(const InvocationRelation&) const = default;
};

struct MethodEntity {
  std::string name;
  std::string return_type;  // empty for constructors
  AccessLevel access = AccessLevel::Package;
  bool is_static = false;
  bool is_constructor = false;
  std::vector<Parameter> parameters;
  std::vector<LocalVariableEntity> local_variables;
  std::vector<std::string> throws;
  std::vector<AccessRelation> accesses;
  std::vector<InvocationRelation> invocations;

  // `name(type,...)`; the method's identity within its class.
  std::string signature() const {
    std::string sig = name + "(";
    for (std::size_t i = 0; i < parameters.size(); ++i) {
      if (i) sig += ",";
      sig += parameters[i].declared_type;
    }
    return sig + ")";
  }

  bool operator==(const MethodEntity&) const = default;
};

struct AttributeEntity {
  std::string name;
  std::string declared_type;
  AccessLevel access = AccessLevel::Package;
  bool is_static = false;

  bool operator==(const AttributeEntity&) const = default;
};

struct ClassEntity {
  std::string name;
  AccessLevel access = AccessLevel::Package;
  bool is_interface = false;
  std::optional<std::string> superclass;
  std::vector<std::string> super_interfaces;
  // Imports of the declaring file; the resolution context for type names.
  std::vector<std::string> imports;
  std::vector<AttributeEntity> attributes;
  std::vector<MethodEntity> methods;

  bool operator==(const ClassEntity&) const = default;
};

struct Package {
  std::string qualified_name;
  std::vector<ClassEntity> classes;

  bool operator==(const Package&) const = default;
};

struct ExternalTypeRef {
  std::string name;

  bool operator==(const ExternalTypeRef&) const = default;
};

struct Project {
  std::string name;
  std::vector<Package> packages;
  std::size_t loc = 0;
  std::vector<ExternalTypeRef> external_types;

  bool operator==(const Project&) const = default;
};

inline std::string qualify(std::string_view package, std::string_view name) {
  if (package.empty()) return std::string(name);
  return std::string(package) + "." + std::string(name);
}

inline std::string simple_name(std::string_view qualified) {
  const auto dot = qualified.rfind('.');
  return std::string(dot == std::string_view::npos ? qualified : qualified.substr(dot + 1));
}

inline std::string parent_package(std::string_view qualified) {
  const auto dot = qualified.rfind('.');
  return dot == std::string_view::npos ? std::string() : std::string(qualified.substr(0, dot));
}

// ---------------------------------------------------------------------------
// Index over a project's classes by qualified name.

class ClassIndex {
 public:
  struct Entry {
    const Package* package = nullptr;
    const ClassEntity* cls = nullptr;
  };

  explicit ClassIndex(const Project& project) {
    for (const auto& pkg : project.packages) {
      for (const auto& cls : pkg.classes) entries_[qualify(pkg.qualified_name, cls.name)] = {&pkg, &cls};
    }
  }

  const ClassEntity* find(const std::string& qualified_name) const {
    const auto it = entries_.find(qualified_name);
    return it == entries_.end() ? nullptr : it->second.cls;
  }
  const Package* package_of(const std::string& qualified_name) const {
    const auto it = entries_.find(qualified_name);
    return it == entries_.end() ? nullptr : it->second.package;
  }
  bool contains(const std::string& qualified_name) const { return entries_.count(qualified_name) != 0; }

  // Supertypes in lookup order: the class itself, its superclass chain, then
  // super-interfaces breadth first. Only internal classes are visited;
  // `external_root` receives the first external supertype met on the
  // superclass chain.
  std::vector<std::pair<std::string, const ClassEntity*>> lineage(const std::string& qualified_name,
                                                                  std::string* external_root = nullptr) const {
    std::vector<std::pair<std::string, const ClassEntity*>> out;
    std::unordered_set<std::string> seen;
    std::deque<std::string> interfaces;
    std::string current = qualified_name;
    while (const ClassEntity* cls = find(current)) {
      if (!seen.insert(current).second) break;
      out.emplace_back(current, cls);
      for (const auto& i : cls->super_interfaces) interfaces.push_back(i);
      if (!cls->superclass) break;
      current = *cls->superclass;
      if (!contains(current)) {
        if (external_root && external_root->empty()) *external_root = current;
        break;
      }
    }
    while (!interfaces.empty()) {
      const std::string name = interfaces.front();
      interfaces.pop_front();
      const ClassEntity* cls = find(name);
      if (!cls) continue;
      if (!seen.insert(name).second) continue;
      out.emplace_back(name, cls);
      for (const auto& i : cls->super_interfaces) interfaces.push_back(i);
    }
    return out;
  }

  // Declaring class and entity of the first attribute/method named `member`.
  std::optional<std::pair<std::string, const AttributeEntity*>> find_attribute(const std::string& cls,
                                                                               const std::string& member) const {
    for (const auto& [qname, entity] : lineage(cls)) {
      for (const auto& a : entity->attributes) {
        if (a.name == member) return std::make_pair(qname, &a);
      }
    }
    return std::nullopt;
  }
  std::optional<std::pair<std::string, const MethodEntity*>> find_method(const std::string& cls,
                                                                         const std::string& member) const {
    for (const auto& [qname, entity] : lineage(cls)) {
      for (const auto& m : entity->methods) {
        if (m.name == member) return std::make_pair(qname, &m);
      }
    }
    return std::nullopt;
  }

 private:
  std::unordered_map<std::string, Entry> entries_;
};

// ---------------------------------------------------------------------------
// Construction

namespace detail {

inline std::vector<std::string> package_and_ancestors(const std::string& name) {
  std::vector<std::string> out;
  if (name.empty()) return {""};
  std::string current = name;
  while (!current.empty()) {
    out.push_back(current);
    current = parent_package(current);
  }
  return out;
}

inline MethodEntity to_method(const RawMethod& raw) {
  MethodEntity m;
  m.name = raw.name;
  m.return_type = raw.return_type;
  m.access = raw.access;
  m.is_static = raw.is_static;
  m.is_constructor = raw.is_constructor;
  for (std::size_t i = 0; i < raw.parameters.size(); ++i) {
    m.parameters.push_back({raw.parameters[i].name, raw.parameters[i].declared_type, i});
  }
  m.throws = raw.throws;
  for (const auto& item : raw.body) {
    switch (item.kind) {
      case BodyItem::Kind::LocalVariable:
        m.local_variables.push_back({item.name, item.type_or_receiver});
        break;
      case BodyItem::Kind::AttributeAccess:
        m.accesses.push_back({item.name, item.type_or_receiver, "", false});
        break;
      case BodyItem::Kind::MethodInvocation:
        m.invocations.push_back({item.name, item.type_or_receiver, "", false});
        break;
    }
  }
  return m;
}

}  // namespace detail

// Containment tree from parsed files. Relations are present but unresolved.
// Packages are ordered by qualified name; ancestors of declared packages are
// materialized empty. Classes keep file-then-declaration order.
inline Project build_model(const std::vector<FileSyntaxTree>& trees, const std::vector<SourceFile>& files,
                           std::string project_name) {
  Project project;
  project.name = std::move(project_name);
  for (const auto& f : files) project.loc += f.line_count;

  std::map<std::string, Package> packages;
  std::map<std::string, std::string> origin;  // qualified class -> file
  for (const auto& tree : trees) {
    for (const auto& name : detail::package_and_ancestors(tree.package_name)) {
      packages.try_emplace(name, Package{name, {}});
    }
    Package& pkg = packages[tree.package_name];
    const std::string file = tree.path.generic_string();
    for (const auto& decl : tree.type_decls) {
      const std::string qname = qualify(tree.package_name, decl.name);
      if (const auto [it, inserted] = origin.emplace(qname, file); !inserted) {
        throw ModelError("duplicate class " + qname + " declared in " + it->second + " and " + file);
      }
      ClassEntity cls;
      cls.name = decl.name;
      cls.access = decl.access;
      cls.is_interface = decl.kind == RawTypeDecl::Kind::Interface;
      if (cls.is_interface) {
        cls.super_interfaces = decl.extends;
      } else {
        if (!decl.extends.empty()) cls.superclass = decl.extends.front();
        cls.super_interfaces = decl.implements;
      }
      cls.imports = tree.imports;
      std::set<std::string> attribute_names, signatures;
      for (const auto& member : decl.members) {
        if (const auto* a = std::get_if<RawAttribute>(&member)) {
          if (!attribute_names.insert(a->name).second) {
            throw ModelError("duplicate attribute " + qname + "#" + a->name + " in " + file);
          }
          cls.attributes.push_back({a->name, a->declared_type, a->access, a->is_static});
        } else {
          MethodEntity m = detail::to_method(std::get<RawMethod>(member));
          if (!signatures.insert(m.signature()).second) {
            throw ModelError("duplicate method " + qname + "#" + m.signature() + " in " + file);
          }
          cls.methods.push_back(std::move(m));
        }
      }
      pkg.classes.push_back(std::move(cls));
    }
  }
  for (auto& [name, pkg] : packages) project.packages.push_back(std::move(pkg));
  return project;
}

// ---------------------------------------------------------------------------
// Resolution

namespace detail {

inline std::size_t strip_dims(std::string& type) {
  std::size_t dims = 0;
  while (type.size() >= 2 && type.compare(type.size() - 2, 2, "[]") == 0) {
    type.resize(type.size() - 2);
    ++dims;
  }
  return dims;
}

inline std::string remove_dims(std::string type, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    if (type.size() < 2 || type.compare(type.size() - 2, 2, "[]") != 0) return "";
    type.resize(type.size() - 2);
  }
  return type;
}

class Resolver {
 public:
  explicit Resolver(const ClassIndex& index) : index_(index) {}

  // Qualified name for internal types, the written name otherwise.
  std::string type(const std::string& written, const std::string& package,
                   const std::vector<std::string>& imports) const {
    if (written.empty()) return written;
    std::string base = written;
    const std::size_t dims = strip_dims(base);
    const std::string suffix = [&] {
      std::string s;
      for (std::size_t i = 0; i < dims; ++i) s += "[]";
      return s;
    }();
    if (detail::is_primitive(base)) return written;
    if (base.find('.') != std::string::npos) return written;
    for (const auto& imp : imports) {
      if (imp.size() > 2 && imp.compare(imp.size() - 2, 2, ".*") == 0) continue;
      if (simple_name(imp) == base) return (index_.contains(imp) ? imp : base) + suffix;
    }
    if (const std::string same = qualify(package, base); index_.contains(same)) return same + suffix;
    for (const auto& imp : imports) {
      if (imp.size() > 2 && imp.compare(imp.size() - 2, 2, ".*") == 0) {
        const std::string candidate = imp.substr(0, imp.size() - 1) + base;
        if (index_.contains(candidate)) return candidate + suffix;
      }
    }
    return written;
  }

  // Static type of a receiver expression inside `method` of class `owner`;
  // "" when it cannot be determined.
  std::string receiver_type(const std::string& receiver, const std::string& owner, const std::string& package,
                            const ClassEntity& cls, const MethodEntity& method) const {
    if (receiver.empty()) return owner;
    std::string current;
    std::string rest;
    if (receiver.rfind("new ", 0) == 0) {
      const std::string body = receiver.substr(4);
      const auto call = body.find("()");
      current = type(body.substr(0, call), package, cls.imports);
      if (call != std::string::npos && call + 2 < body.size()) rest = body.substr(call + 3);
    } else if (receiver.front() == '(') {
      const auto close = receiver.find(')');
      if (close == std::string::npos) return "";
      current = type(receiver.substr(1, close - 1), package, cls.imports);
      if (close + 1 < receiver.size()) rest = receiver.substr(close + 2);
    } else {
      const auto dot = receiver.find('.');
      const std::string first = receiver.substr(0, dot);
      current = first_segment_type(first, owner, package, cls, method);
      if (dot != std::string::npos) rest = receiver.substr(dot + 1);
    }
    std::size_t start = 0;
    while (!rest.empty() && start <= rest.size() && !current.empty()) {
      const auto dot = rest.find('.', start);
      const std::string segment = rest.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      current = member_type(current, segment);
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    return current;
  }

  bool is_internal(const std::string& qualified) const { return index_.contains(qualified); }

  // Declaring class for an unresolved member of internal class `cls`.
  std::string fallback_owner(const std::string& cls) const {
    std::string external;
    index_.lineage(cls, &external);
    return external.empty() ? cls : external;
  }

  const ClassIndex& index() const { return index_; }

 private:
  std::string first_segment_type(std::string segment, const std::string& owner, const std::string& package,
                                 const ClassEntity& cls, const MethodEntity& method) const {
    if (segment == "this") return owner;
    if (segment == "super") return cls.superclass.value_or("");
    if (segment == "\"\"") return "String";
    if (segment == "?") return "";
    const std::size_t dims = strip_dims(segment);
    std::string base;
    if (segment.size() > 2 && segment.compare(segment.size() - 2, 2, "()") == 0) {
      const auto m = index_.find_method(owner, segment.substr(0, segment.size() - 2));
      base = m ? m->second->return_type : "";
    } else {
      base = variable_type(segment, owner, package, cls, method);
    }
    return remove_dims(base, dims);
  }

  std::string variable_type(const std::string& name, const std::string& owner, const std::string& package,
                            const ClassEntity& cls, const MethodEntity& method) const {
    for (auto it = method.local_variables.rbegin(); it != method.local_variables.rend(); ++it) {
      if (it->name == name) return it->declared_type;
    }
    for (const auto& p : method.parameters) {
      if (p.name == name) return p.declared_type;
    }
    if (const auto a = index_.find_attribute(owner, name)) return a->second->declared_type;
    const std::string as_type = type(name, package, cls.imports);
    if (index_.contains(as_type)) return as_type;
    if (!name.empty() && std::isupper(static_cast<unsigned char>(name.front()))) return name;
    return "";
  }

  std::string member_type(const std::string& owner_type, std::string segment) const {
    if (!index_.contains(owner_type)) return "";
    const std::size_t dims = strip_dims(segment);
    std::string base;
    if (segment.size() > 2 && segment.compare(segment.size() - 2, 2, "()") == 0) {
      const auto m = index_.find_method(owner_type, segment.substr(0, segment.size() - 2));
      base = m ? m->second->return_type : "";
    } else {
      const auto a = index_.find_attribute(owner_type, segment);
      base = a ? a->second->declared_type : "";
    }
    return remove_dims(base, dims);
  }

  const ClassIndex& index_;
};

inline std::vector<ExternalTypeRef> collect_external_types(const Project& project) {
  const ClassIndex index(project);
  std::set<std::string> names;
  for (const auto& pkg : project.packages) {
    for (const auto& cls : pkg.classes) {
      if (cls.superclass && !index.contains(*cls.superclass)) names.insert(*cls.superclass);
      for (const auto& i : cls.super_interfaces) {
        if (!index.contains(i)) names.insert(i);
      }
    }
  }
  std::vector<ExternalTypeRef> out;
  for (const auto& n : names) out.push_back({n});
  return out;
}

}  // namespace detail

// Resolves every type name, supertype, access and invocation. Unresolvable
// names degrade to external references; never throws. Idempotent.
inline Project resolve_references(Project project) {
  // Pass 1: type names. The index only needs qualified class names, which
  // this pass does not change.
  {
    const ClassIndex index(project);
    const detail::Resolver resolver(index);
    for (auto& pkg : project.packages) {
      for (auto& cls : pkg.classes) {
        const auto t = [&](const std::string& name) { return resolver.type(name, pkg.qualified_name, cls.imports); };
        if (cls.superclass) cls.superclass = t(*cls.superclass);
        for (auto& i : cls.super_interfaces) i = t(i);
        for (auto& a : cls.attributes) a.declared_type = t(a.declared_type);
        for (auto& m : cls.methods) {
          m.return_type = t(m.return_type);
          for (auto& p : m.parameters) p.declared_type = t(p.declared_type);
          for (auto& l : m.local_variables) l.declared_type = t(l.declared_type);
          for (auto& e : m.throws) e = t(e);
        }
      }
    }
  }
  // Pass 2: relations, read against a snapshot so results do not depend on
  // the order in which methods are visited.
  const Project snapshot = project;
  const ClassIndex index(snapshot);
  const detail::Resolver resolver(index);
  for (std::size_t pi = 0; pi < project.packages.size(); ++pi) {
    const Package& spkg = snapshot.packages[pi];
    for (std::size_t ci = 0; ci < spkg.classes.size(); ++ci) {
      const ClassEntity& scls = spkg.classes[ci];
      const std::string owner = qualify(spkg.qualified_name, scls.name);
      ClassEntity& cls = project.packages[pi].classes[ci];
      for (std::size_t mi = 0; mi < scls.methods.size(); ++mi) {
        const MethodEntity& smethod = scls.methods[mi];
        MethodEntity& method = cls.methods[mi];
        for (auto& access : method.accesses) {
          const std::string recv =
              resolver.receiver_type(access.receiver, owner, spkg.qualified_name, scls, smethod);
          access.resolved = false;
          if (resolver.is_internal(recv)) {
            if (const auto found = index.find_attribute(recv, access.attribute_name)) {
              access.declaring_class = found->first;
              access.resolved = true;
            } else {
              access.declaring_class = resolver.fallback_owner(recv);
            }
          } else {
            access.declaring_class = recv;
          }
        }
        for (auto& call : method.invocations) {
          const std::string recv = resolver.receiver_type(call.receiver, owner, spkg.qualified_name, scls, smethod);
          call.resolved = false;
          if (resolver.is_internal(recv)) {
            if (const auto found = index.find_method(recv, call.method_name)) {
              call.declaring_class = found->first;
              call.resolved = true;
            } else {
              call.declaring_class = resolver.fallback_owner(recv);
            }
          } else {
            call.declaring_class = recv;
          }
        }
      }
    }
  }
  project.external_types = detail::collect_external_types(project);
  return project;
}

// ---------------------------------------------------------------------------
// Lookup

struct EntityRef {
  enum class Kind { Package, Class, Attribute, Method };
  Kind kind;
  const Package* package = nullptr;
  const ClassEntity* cls = nullptr;
  const AttributeEntity* attribute = nullptr;
  const MethodEntity* method = nullptr;
};

// Resolves `pkg`, `pkg.Class`, `pkg.Class#attr` or `pkg.Class#method(T,...)`.
// Returns nullopt when nothing matches; throws InputError when the name is
// malformed.
inline std::optional<EntityRef> lookup(const Project& project, std::string_view qualified_name) {
  const auto malformed = [&](const std::string& why) {
    return InputError("malformed qualified name '" + std::string(qualified_name) + "': " + why);
  };
  if (qualified_name.empty()) throw malformed("empty");
  const auto hash = qualified_name.find('#');
  const std::string_view head = qualified_name.substr(0, hash);
  if (head.empty() || head.front() == '.' || head.back() == '.' || head.find("..") != std::string_view::npos) {
    throw malformed("empty name segment");
  }
  for (const char c : head) {
    if (c != '.' && !detail::is_ident_char(c)) throw malformed("invalid character");
  }
  std::string_view member;
  if (hash != std::string_view::npos) {
    member = qualified_name.substr(hash + 1);
    if (member.empty()) throw malformed("empty member name");
    if (member.find('#') != std::string_view::npos) throw malformed("more than one '#'");
    const auto open = member.find('(');
    if (open != std::string_view::npos && (member.back() != ')' || open == 0 ||
                                           member.find(')') != member.size() - 1)) {
      throw malformed("unbalanced parameter list");
    }
    if (open == std::string_view::npos && member.find(')') != std::string_view::npos) {
      throw malformed("unbalanced parameter list");
    }
  }

  const ClassIndex index(project);
  const std::string head_str(head);
  if (const ClassEntity* cls = index.find(head_str)) {
    const Package* pkg = index.package_of(head_str);
    if (member.empty()) return EntityRef{EntityRef::Kind::Class, pkg, cls};
    if (member.find('(') == std::string_view::npos) {
      for (const auto& a : cls->attributes) {
        if (a.name == member) return EntityRef{EntityRef::Kind::Attribute, pkg, cls, &a};
      }
      return std::nullopt;
    }
    std::string wanted;
    for (const char c : member) {
      if (!std::isspace(static_cast<unsigned char>(c))) wanted += c;
    }
    for (const auto& m : cls->methods) {
      if (m.signature() == wanted) return EntityRef{EntityRef::Kind::Method, pkg, cls, nullptr, &m};
    }
    return std::nullopt;
  }
  if (!member.empty()) return std::nullopt;
  for (const auto& pkg : project.packages) {
    if (pkg.qualified_name == head) return EntityRef{EntityRef::Kind::Package, &pkg};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Structural invariants; returns one message per violation.

inline std::vector<std::string> validate(const Project& project) {
  std::vector<std::string> problems;
  const ClassIndex index(project);
  std::set<std::string> package_names;
  for (const auto& pkg : project.packages) {
    if (!package_names.insert(pkg.qualified_name).second) {
      problems.push_back("duplicate package " + pkg.qualified_name);
    }
    std::set<std::string> class_names;
    for (const auto& cls : pkg.classes) {
      const std::string owner = qualify(pkg.qualified_name, cls.name);
      if (!class_names.insert(cls.name).second) problems.push_back("duplicate class " + owner);
      if (cls.is_interface && cls.superclass) problems.push_back("interface with superclass " + owner);
      std::set<std::string> attrs, sigs;
      for (const auto& a : cls.attributes) {
        if (!attrs.insert(a.name).second) problems.push_back("duplicate attribute " + owner + "#" + a.name);
        if (a.declared_type.empty()) problems.push_back("untyped attribute " + owner + "#" + a.name);
      }
      for (const auto& m : cls.methods) {
        const std::string where = owner + "#" + m.signature();
        if (!sigs.insert(m.signature()).second) problems.push_back("duplicate method " + where);
        for (std::size_t i = 0; i < m.parameters.size(); ++i) {
          if (m.parameters[i].order != i) problems.push_back("parameter order gap in " + where);
        }
        for (const auto& l : m.local_variables) {
          if (l.declared_type.empty()) problems.push_back("untyped local " + l.name + " in " + where);
        }
        for (const auto& a : m.accesses) {
          if (!a.resolved) continue;
          const ClassEntity* target = index.find(a.declaring_class);
          const bool ok = target && std::any_of(target->attributes.begin(), target->attributes.end(),
                                                [&](const AttributeEntity& e) { return e.name == a.attribute_name; });
          if (!ok) problems.push_back("dangling access " + a.declaring_class + "#" + a.attribute_name + " from " + where);
        }
        for (const auto& c : m.invocations) {
          if (!c.resolved) continue;
          const ClassEntity* target = index.find(c.declaring_class);
          const bool ok = target && std::any_of(target->methods.begin(), target->methods.end(),
                                                [&](const MethodEntity& e) { return e.name == c.method_name; });
          if (!ok) problems.push_back("dangling invocation " + c.declaring_class + "#" + c.method_name + " from " + where);
        }
      }
    }
  }
  for (const auto& ext : project.external_types) {
    if (index.contains(ext.name)) problems.push_back("external type shadows internal class " + ext.name);
  }
  return problems;
}

}  // namespace oodoc
