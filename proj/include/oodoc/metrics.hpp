#pragma once

#include <cstddef>
#include <ostream>
#include <string>

#include "oodoc/code_model.hpp"

namespace oodoc {

// Size metrics. `nop` counts packages that directly contain a class;
// `nop_declared` counts every package in the model, including empty
// ancestors.
struct MetricsRecord {
  std::size_t loc = 0;
  std::size_t nop = 0;
  std::size_t nop_declared = 0;
  std::size_t noc = 0;
  std::size_t noa = 0;
  std::size_t nom = 0;

  bool operator==(const MetricsRecord&) const = default;
};

struct ClassMetrics {
  std::size_t noa = 0;
  std::size_t nom = 0;

  bool operator==(const ClassMetrics&) const = default;
};

struct MethodMetrics {
  std::size_t param_count = 0;
  std::size_t local_count = 0;
  std::size_t access_count = 0;
  std::size_t invocation_count = 0;

  bool operator==(const MethodMetrics&) const = default;
};

// Declared members only; constructors count as methods.
inline ClassMetrics class_metrics(const ClassEntity& cls) { return {cls.attributes.size(), cls.methods.size()}; }

inline MethodMetrics method_metrics(const MethodEntity& m) {
  return {m.parameters.size(), m.local_variables.size(), m.accesses.size(), m.invocations.size()};
}

inline MetricsRecord project_metrics(const Project& project) {
  MetricsRecord r;
  r.loc = project.loc;
  r.nop_declared = project.packages.size();
  for (const auto& pkg : project.packages) {
    if (!pkg.classes.empty()) ++r.nop;
    r.noc += pkg.classes.size();
    for (const auto& cls : pkg.classes) {
      const auto c = class_metrics(cls);
      r.noa += c.noa;
      r.nom += c.nom;
    }
  }
  return r;
}

// One metric per line: "LoC 123".
inline void write_metrics_table(std::ostream& out, const MetricsRecord& r) {
  out << "LoC " << r.loc << '\n'
      << "NoP " << r.nop << '\n'
      << "NoP(declared) " << r.nop_declared << '\n'
      << "NoC " << r.noc << '\n'
      << "NoA " << r.noa << '\n'
      << "NoM " << r.nom << '\n';
}

}  // namespace oodoc
