#pragma once

#include <unistd.h>

#include <filesystem>
#include <stdexcept>
#include <string>

#include "oodoc/code_model.hpp"
#include "oodoc/pipeline.hpp"

namespace oodoc::testkit {

inline std::filesystem::path fixture_dir() { return OODOC_FIXTURE_DIR; }

inline std::string fixture_name() { return "Drawing shapes software"; }

inline const Project& fixture_project() {
  static const Project project = analyze_directory(fixture_dir(), ".java", fixture_name()).project;
  return project;
}

inline const ClassEntity& find_class(const Project& p, const std::string& qualified) {
  const ClassIndex index(p);
  if (const ClassEntity* c = index.find(qualified)) return *c;
  throw std::runtime_error("no class " + qualified);
}

inline const MethodEntity& find_method(const ClassEntity& cls, const std::string& name, std::size_t params) {
  for (const auto& m : cls.methods) {
    if (m.name == name && m.parameters.size() == params) return m;
  }
  throw std::runtime_error("no method " + cls.name + "." + name);
}

inline const std::string kFrame = "Drawing.Shapes.coreFrame.";
inline const std::string kElements = "Drawing.Shapes.coreElements.";

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("oodoc-test-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oodoc::testkit
