#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 input or
// parse error, 3 evaluation threshold not met.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "oodoc/doc_generator.hpp"
#include "oodoc/errors.hpp"
#include "oodoc/evaluation.hpp"
#include "oodoc/metrics.hpp"
#include "oodoc/pipeline.hpp"
#include "oodoc/xml_exchange.hpp"

namespace oodoc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitThreshold = 3;

// Consulted when --renderer is not given.
inline constexpr const char* kRendererEnv = "OODOC_RENDERER";

struct RunConfig {
  std::filesystem::path input_root;
  std::filesystem::path output_dir = "oodoc-out";
  std::string project_name;
  std::string source_extension = ".java";
  std::vector<DocumentKind> documents{kAllDocumentKinds.begin(), kAllDocumentKinds.end()};
  bool render = false;
  std::string renderer_path;
  bool include_unresolved = false;
  bool merge = false;
  bool strict = false;
  unsigned jobs = 0;
};

struct EvaluateConfig {
  std::filesystem::path retrieved;
  std::filesystem::path reference;
  std::optional<std::pair<double, double>> fail_under;  // (precision, recall)
  bool list_differences = true;
};

namespace detail {

inline nlohmann::json metrics_json(const MetricsRecord& m) {
  return {{"loc", m.loc}, {"nop", m.nop}, {"nop_declared", m.nop_declared},
          {"noc", m.noc}, {"noa", m.noa}, {"nom", m.nom}};
}

inline bool is_within(const std::filesystem::path& inner, const std::filesystem::path& outer) {
  std::error_code ec;
  const auto a = std::filesystem::weakly_canonical(std::filesystem::absolute(inner), ec);
  const auto b = std::filesystem::weakly_canonical(std::filesystem::absolute(outer), ec);
  auto ai = a.begin();
  for (auto bi = b.begin(); bi != b.end(); ++bi, ++ai) {
    if (bi->empty()) continue;  // trailing separator
    if (ai == a.end() || *ai != *bi) return false;
  }
  return true;
}

inline std::string default_project_name(const std::filesystem::path& root) {
  std::error_code ec;
  const auto canonical = std::filesystem::weakly_canonical(std::filesystem::absolute(root), ec);
  const auto name = canonical.filename().string();
  return name.empty() ? "project" : name;
}

inline void report_diagnostics(const Analysis& a, std::ostream& err) {
  for (const auto& w : a.warnings) err << "warning: " << w.path << ":" << w.line << ": " << w.message << "\n";
  for (const auto& f : a.failures) err << "error: " << f.message << " (file skipped)\n";
}

inline std::string resolve_renderer(const RunConfig& config) {
  if (!config.renderer_path.empty()) return config.renderer_path;
  if (const char* env = std::getenv(kRendererEnv)) return env;
  return "";
}

// Shared by analyze and document. Returns an exit code.
inline int emit_documents(const RunConfig& config, const Project& project, std::ostream& out, std::ostream& err) {
  DocumentOptions options;
  options.kinds = config.documents;
  options.merge = config.merge;
  options.include_unresolved = config.include_unresolved;
  const auto written = write_documents(generate_documents(project, options), config.output_dir / "docs");
  out << "wrote " << written.size() << " document file(s) to " << (config.output_dir / "docs").string() << "\n";
  if (!config.render) return kExitOk;
  const auto failed = render_svg(resolve_renderer(config), written);
  for (const auto& f : failed) err << (config.strict ? "error" : "warning") << ": renderer failed on " << f.string() << "\n";
  if (!failed.empty() && config.strict) return kExitInput;
  return kExitOk;
}

inline int prepare(RunConfig& config, std::ostream& err, bool writes_output) {
  if (config.project_name.empty()) config.project_name = default_project_name(config.input_root);
  if (!config.source_extension.empty() && config.source_extension.front() != '.') {
    config.source_extension = "." + config.source_extension;
  }
  if (writes_output && is_within(config.output_dir, config.input_root)) {
    err << "error: output directory " << config.output_dir.string() << " lies inside the input root\n";
    return kExitUsage;
  }
  if (config.render && resolve_renderer(config).empty()) {
    err << "error: --render needs --renderer or " << kRendererEnv << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

// Returns nullopt (after reporting) when a run should stop.
inline std::optional<Analysis> load(const RunConfig& config, std::ostream& err, int& code) {
  std::vector<SourceFile> files = scan_directory(config.input_root, config.source_extension);
  if (files.empty()) {
    err << "error: no source files (" << config.source_extension << ") under " << config.input_root.string() << "\n";
    code = kExitInput;
    return std::nullopt;
  }
  Analysis a = analyze(files, config.project_name, config.jobs);
  report_diagnostics(a, err);
  if (!a.failures.empty() && config.strict) {
    code = kExitInput;
    return std::nullopt;
  }
  return a;
}

}  // namespace detail

inline int run_analyze(RunConfig config, std::ostream& out, std::ostream& err) {
  try {
    if (const int code = detail::prepare(config, err, true); code != kExitOk) return code;
    int code = kExitOk;
    const auto analysis = detail::load(config, err, code);
    if (!analysis) return code;
    const Project& project = analysis->project;
    write_text_file(config.output_dir / "model.xml", serialize_model(project));
    const MetricsRecord metrics = project_metrics(project);
    std::ostringstream table;
    write_metrics_table(table, metrics);
    write_text_file(config.output_dir / "metrics.txt", table.str());
    write_text_file(config.output_dir / "metrics.json", detail::metrics_json(metrics).dump(2) + "\n");
    out << table.str();
    return detail::emit_documents(config, project, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

inline int run_document(RunConfig config, std::ostream& out, std::ostream& err) {
  try {
    if (config.documents.empty()) {
      err << "error: no documents requested\n";
      return kExitUsage;
    }
    if (const int code = detail::prepare(config, err, true); code != kExitOk) return code;
    int code = kExitOk;
    const auto analysis = detail::load(config, err, code);
    if (!analysis) return code;
    return detail::emit_documents(config, analysis->project, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

inline int run_metrics(RunConfig config, const std::optional<std::filesystem::path>& record, std::ostream& out,
                       std::ostream& err) {
  try {
    if (const int code = detail::prepare(config, err, false); code != kExitOk) return code;
    int code = kExitOk;
    const auto analysis = detail::load(config, err, code);
    if (!analysis) return code;
    const MetricsRecord metrics = project_metrics(analysis->project);
    write_metrics_table(out, metrics);
    if (record) write_text_file(*record, detail::metrics_json(metrics).dump(2) + "\n");
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

inline Project load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read model file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_model(buffer.str());
  } catch (const Error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

inline int run_evaluate(const EvaluateConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const LinkSet retrieved = extract_links(load_model_file(config.retrieved));
    const LinkSet reference = extract_links(load_model_file(config.reference));
    const EvalReport report = precision_recall(retrieved, reference);
    write_report(out, report, config.list_differences);
    if (config.fail_under) {
      const auto [p, r] = *config.fail_under;
      if (report.precision.value() < p || report.recall.value() < r) {
        err << "error: below threshold (precision >= " << p << ", recall >= " << r << " required)\n";
        return kExitThreshold;
      }
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

// Renders every .dot file under `dir` to a sibling .svg.
inline int run_render(const std::filesystem::path& dir, RunConfig config, std::ostream& out, std::ostream& err) {
  config.render = true;
  const std::string renderer = detail::resolve_renderer(config);
  if (renderer.empty()) {
    err << "error: render needs --renderer or " << kRendererEnv << "\n";
    return kExitUsage;
  }
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    err << "error: not a directory: " << dir.string() << "\n";
    return kExitInput;
  }
  std::vector<std::filesystem::path> dots;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".dot") dots.push_back(entry.path());
  }
  std::sort(dots.begin(), dots.end());
  const auto failed = render_svg(renderer, dots);
  for (const auto& f : failed) err << (config.strict ? "error" : "warning") << ": renderer failed on " << f.string() << "\n";
  out << "rendered " << dots.size() - failed.size() << " of " << dots.size() << " file(s)\n";
  return !failed.empty() && config.strict ? kExitInput : kExitOk;
}

inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Static documentation generator for object-oriented source code"};
  app.require_subcommand(1);

  RunConfig config;
  std::vector<std::string> document_names;

  const auto add_input_options = [&](CLI::App* sub, bool with_output) {
    sub->add_option("input", config.input_root, "Source root directory")->required();
    sub->add_option("--name", config.project_name, "Project name (default: input directory name)");
    sub->add_option("--ext", config.source_extension, "Source file extension")->capture_default_str();
    sub->add_option("--jobs,-j", config.jobs, "Parser threads (0: hardware concurrency)");
    sub->add_flag("--strict", config.strict, "Fail when any file fails to parse or render");
    if (with_output) {
      sub->add_option("-o,--output", config.output_dir, "Output directory")->capture_default_str();
      sub->add_option("--documents", document_names, "Documents to emit (comma separated)")->delimiter(',');
      sub->add_flag("--merge", config.merge, "One method-info/method-content file for all classes");
      sub->add_flag("--include-unresolved", config.include_unresolved,
                    "Draw unresolved relations in the method dependency document");
      sub->add_flag("--render", config.render, "Render SVG files with the external renderer");
      sub->add_option("--renderer", config.renderer_path, "DOT renderer executable");
    }
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "Write model.xml, metrics and documents");
  add_input_options(analyze_cmd, true);
  auto* document_cmd = app.add_subcommand("document", "Write documents only");
  add_input_options(document_cmd, true);
  auto* metrics_cmd = app.add_subcommand("metrics", "Print size metrics");
  add_input_options(metrics_cmd, false);
  std::string record_path;
  metrics_cmd->add_option("--record", record_path, "Also write the metrics as JSON");

  EvaluateConfig eval;
  std::vector<double> thresholds;
  bool quiet = false;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Precision/recall of a model against a reference");
  evaluate_cmd->add_option("--retrieved", eval.retrieved, "Extracted model.xml")->required();
  evaluate_cmd->add_option("--reference", eval.reference, "Reference model.xml")->required();
  evaluate_cmd->add_option("--fail-under", thresholds, "Minimum precision and recall")->expected(2);
  evaluate_cmd->add_flag("--quiet", quiet, "Do not list missing/spurious links");

  std::filesystem::path render_dir;
  auto* render_cmd = app.add_subcommand("render", "Render existing .dot files to SVG");
  render_cmd->add_option("dir", render_dir, "Directory containing .dot files")->required();
  render_cmd->add_option("--renderer", config.renderer_path, "DOT renderer executable");
  render_cmd->add_flag("--strict", config.strict, "Fail when any file fails to render");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  if (!document_names.empty()) {
    config.documents.clear();
    for (const auto& name : document_names) {
      const auto kind = parse_document_kind(name);
      if (!kind) {
        err << "error: unknown document '" << name << "'\n";
        return kExitUsage;
      }
      if (std::find(config.documents.begin(), config.documents.end(), *kind) == config.documents.end()) {
        config.documents.push_back(*kind);
      }
    }
  }

  if (analyze_cmd->parsed()) return run_analyze(config, out, err);
  if (document_cmd->parsed()) return run_document(config, out, err);
  if (metrics_cmd->parsed()) {
    return run_metrics(config, record_path.empty() ? std::nullopt : std::optional<std::filesystem::path>(record_path),
                       out, err);
  }
  if (evaluate_cmd->parsed()) {
    if (thresholds.size() == 2) eval.fail_under = std::make_pair(thresholds[0], thresholds[1]);
    eval.list_differences = !quiet;
    return run_evaluate(eval, out, err);
  }
  return run_render(render_dir, config, out, err);
}

}  // namespace oodoc::cli
