#pragma once

// scan -> parse (concurrent, per file) -> model -> resolve, and document
// output to disk.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "oodoc/code_model.hpp"
#include "oodoc/doc_generator.hpp"
#include "oodoc/errors.hpp"
#include "oodoc/source_parser.hpp"

namespace oodoc {

struct FileDiagnostic {
  std::string path;
  int line = 0;
  std::string message;
};

struct ParseOutcome {
  std::vector<FileSyntaxTree> trees;       // successfully parsed files, path order
  std::vector<SourceFile> parsed_files;    // matching sources
  std::vector<FileDiagnostic> failures;    // files skipped
  std::vector<FileDiagnostic> warnings;
};

// Parses every file; a failing file is recorded and skipped. Results keep the
// input order regardless of completion order.
inline ParseOutcome parse_all(const std::vector<SourceFile>& files, unsigned jobs = 0) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(files.size(), 1)));
  struct Slot {
    std::optional<FileSyntaxTree> tree;
    std::optional<FileDiagnostic> failure;
  };
  std::vector<Slot> slots(files.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      try {
        slots[i].tree = parse_file(files[i]);
      } catch (const ParseError& e) {
        slots[i].failure = FileDiagnostic{e.path(), e.line(), e.what()};
      }
    }
  };
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  ParseOutcome out;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (slots[i].failure) {
      out.failures.push_back(*slots[i].failure);
      continue;
    }
    for (const auto& w : slots[i].tree->warnings) {
      out.warnings.push_back({files[i].path.generic_string(), w.line, w.message});
    }
    out.trees.push_back(std::move(*slots[i].tree));
    out.parsed_files.push_back(files[i]);
  }
  return out;
}

struct Analysis {
  Project project;
  std::size_t file_count = 0;
  std::vector<FileDiagnostic> failures;
  std::vector<FileDiagnostic> warnings;
};

// LoC covers the files that parsed; skipped files contribute nothing.
inline Analysis analyze(const std::vector<SourceFile>& files, const std::string& project_name, unsigned jobs = 0) {
  ParseOutcome parsed = parse_all(files, jobs);
  Analysis a;
  a.file_count = files.size();
  a.project = resolve_references(build_model(parsed.trees, parsed.parsed_files, project_name));
  a.failures = std::move(parsed.failures);
  a.warnings = std::move(parsed.warnings);
  return a;
}

inline Analysis analyze_directory(const std::filesystem::path& root, std::string_view extension,
                                  const std::string& project_name, unsigned jobs = 0) {
  return analyze(scan_directory(root, extension), project_name, jobs);
}

// ---------------------------------------------------------------------------
// Document output

struct DocumentOptions {
  std::vector<DocumentKind> kinds{kAllDocumentKinds.begin(), kAllDocumentKinds.end()};
  bool merge = false;               // one method-info / method-content file instead of one per class
  bool include_unresolved = false;  // method-dependency document
};

struct RenderedDocument {
  std::filesystem::path path;  // relative to the docs directory
  std::string dot;
};

// Generates the requested documents (concurrently per kind) in a fixed order.
inline std::vector<RenderedDocument> generate_documents(const Project& project, const DocumentOptions& options) {
  std::vector<std::future<std::vector<RenderedDocument>>> tasks;
  for (const auto kind : kAllDocumentKinds) {
    if (std::find(options.kinds.begin(), options.kinds.end(), kind) == options.kinds.end()) continue;
    tasks.push_back(std::async(std::launch::async, [&project, &options, kind] {
      std::vector<RenderedDocument> docs;
      const std::string name(to_string(kind));
      const auto single = [&](const DocumentGraph& g) { docs.push_back({name + ".dot", serialize_dot(g)}); };
      switch (kind) {
        case DocumentKind::Package: single(gen_package_document(project)); break;
        case DocumentKind::ClassInfo: single(gen_class_information_document(project)); break;
        case DocumentKind::ClassDependency: single(gen_class_dependency_document(project)); break;
        case DocumentKind::ClassContent: single(gen_class_content_document(project)); break;
        case DocumentKind::MethodDependency:
          single(gen_method_dependency_document(project, options.include_unresolved));
          break;
        case DocumentKind::MethodInfo:
        case DocumentKind::MethodContent:
          if (options.merge) {
            single(kind == DocumentKind::MethodInfo ? gen_method_information_document(project)
                                                    : gen_method_content_document(project));
            break;
          }
          for (const auto& pkg : project.packages) {
            for (const auto& cls : pkg.classes) {
              const DocumentGraph g = kind == DocumentKind::MethodInfo
                                          ? gen_method_information_document(cls, pkg.qualified_name)
                                          : gen_method_content_document(project, cls);
              docs.push_back({std::filesystem::path(name) / (qualify(pkg.qualified_name, cls.name) + ".dot"),
                              serialize_dot(g)});
            }
          }
          break;
      }
      return docs;
    }));
  }
  std::vector<RenderedDocument> all;
  for (auto& t : tasks) {
    auto docs = t.get();
    std::move(docs.begin(), docs.end(), std::back_inserter(all));
  }
  return all;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write file: " + path.string());
  out << text;
  if (!out) throw InputError("cannot write file: " + path.string());
}

inline std::vector<std::filesystem::path> write_documents(const std::vector<RenderedDocument>& docs,
                                                          const std::filesystem::path& docs_dir) {
  std::vector<std::filesystem::path> written;
  for (const auto& d : docs) {
    const auto path = docs_dir / d.path;
    write_text_file(path, d.dot);
    written.push_back(path);
  }
  return written;
}

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// Runs `renderer -Tsvg <file.dot> -o <file.svg>`; returns the files that
// failed.
inline std::vector<std::filesystem::path> render_svg(const std::string& renderer,
                                                     const std::vector<std::filesystem::path>& dot_files) {
  std::vector<std::filesystem::path> failed;
  for (const auto& dot : dot_files) {
    auto svg = dot;
    svg.replace_extension(".svg");
    const std::string cmd = shell_quote(renderer) + " -Tsvg " + shell_quote(dot.string()) + " -o " +
                            shell_quote(svg.string()) + " 2>/dev/null";
    if (std::system(cmd.c_str()) != 0) failed.push_back(dot);
  }
  return failed;
}

}  // namespace oodoc
