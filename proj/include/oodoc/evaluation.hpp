#pragma once

// Precision/recall of an extracted model against a reference model.
//
// Link encodings:
//   pkg:<qname>                       class:<qname>
//   attr:<class>#<name>               method:<class>#<name>(<type,...>)
//   local:<class>#<name>(<types>)#<local>
//   inherits:<sub>-><super>           implements:<class>-><iface>
//   invokes:<class>#<name>(<types>)-><callee-class>#<name>
//   accesses:<class>#<name>(<types>)-><class>#<attr>
//
// Supertype links are emitted for internal and external supertypes alike;
// invokes/accesses links only for resolved relations.

#include <cstdint>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "oodoc/code_model.hpp"

namespace oodoc {

using LinkSet = std::set<std::string>;

struct Ratio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  Ratio reduced() const {
    const auto g = std::gcd(numerator, denominator);
    return g == 0 ? *this : Ratio{numerator / g, denominator / g};
  }
  // Exact comparison against another ratio.
  bool operator==(const Ratio& other) const {
    return numerator * other.denominator == other.numerator * denominator;
  }
};

struct EvalReport {
  Ratio precision;
  Ratio recall;
  std::size_t true_positives = 0;
  std::size_t retrieved_count = 0;
  std::size_t relevant_count = 0;
  LinkSet missing;   // relevant but not retrieved
  LinkSet spurious;  // retrieved but not relevant
};

inline LinkSet extract_links(const Project& project) {
  LinkSet links;
  for (const auto& pkg : project.packages) {
    links.insert("pkg:" + pkg.qualified_name);
    for (const auto& cls : pkg.classes) {
      const std::string owner = qualify(pkg.qualified_name, cls.name);
      links.insert("class:" + owner);
      if (cls.superclass) links.insert("inherits:" + owner + "->" + *cls.superclass);
      for (const auto& i : cls.super_interfaces) {
        links.insert((cls.is_interface ? "inherits:" : "implements:") + owner + "->" + i);
      }
      for (const auto& a : cls.attributes) links.insert("attr:" + owner + "#" + a.name);
      for (const auto& m : cls.methods) {
        const std::string method = owner + "#" + m.signature();
        links.insert("method:" + method);
        for (const auto& l : m.local_variables) links.insert("local:" + method + "#" + l.name);
        for (const auto& c : m.invocations) {
          if (c.resolved) links.insert("invokes:" + method + "->" + c.declaring_class + "#" + c.method_name);
        }
        for (const auto& a : m.accesses) {
          if (a.resolved) links.insert("accesses:" + method + "->" + a.declaring_class + "#" + a.attribute_name);
        }
      }
    }
  }
  return links;
}

// Empty retrieved set: precision 1. Empty reference set: recall 1.
inline EvalReport precision_recall(const LinkSet& retrieved, const LinkSet& reference) {
  EvalReport r;
  r.retrieved_count = retrieved.size();
  r.relevant_count = reference.size();
  for (const auto& link : retrieved) {
    if (reference.count(link)) {
      ++r.true_positives;
    } else {
      r.spurious.insert(link);
    }
  }
  for (const auto& link : reference) {
    if (!retrieved.count(link)) r.missing.insert(link);
  }
  r.precision = retrieved.empty() ? Ratio{1, 1} : Ratio{r.true_positives, r.retrieved_count};
  r.recall = reference.empty() ? Ratio{1, 1} : Ratio{r.true_positives, r.relevant_count};
  return r;
}

inline std::string format_ratio(const Ratio& ratio) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << ratio.value();
  return out.str();
}

inline void write_report(std::ostream& out, const EvalReport& r, bool list_differences = true) {
  out << "precision " << format_ratio(r.precision) << " (" << r.precision.numerator << "/" << r.precision.denominator
      << ")\n";
  out << "recall " << format_ratio(r.recall) << " (" << r.recall.numerator << "/" << r.recall.denominator << ")\n";
  out << "true_positives " << r.true_positives << "\n";
  out << "retrieved " << r.retrieved_count << "\n";
  out << "relevant " << r.relevant_count << "\n";
  if (!list_differences) return;
  for (const auto& link : r.missing) out << "missing " << link << "\n";
  for (const auto& link : r.spurious) out << "spurious " << link << "\n";
}

}  // namespace oodoc
