#include "headergen/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>

#include "headergen/error.hpp"
#include "headergen/evaluate.hpp"

namespace fs = std::filesystem;

namespace headergen {

namespace {

int exit_code_for(const Error& err) { return err.is_input_error() ? 2 : 1; }

struct LoadedConfig {
  TypeStubDB stubs;
  TaxonomyDB taxonomy;
  std::map<std::string, std::string> docstrings;
};

LoadedConfig load_config(const RunConfig& config) {
  LoadedConfig loaded;
  loaded.stubs = TypeStubDB::load_dir(config.stubs_dir);
  loaded.taxonomy = TaxonomyDB::load_file(config.taxonomy_path);
  loaded.docstrings = load_docstrings(config.stubs_dir);
  return loaded;
}

int annotate_one(const std::string& nb_path, const RunConfig& config,
                 const LoadedConfig& loaded, std::ostream& out, std::ostream& err) {
  auto result = run_analysis(load_notebook(nb_path), loaded.stubs, loaded.taxonomy);
  if (!config.dump_eag_path.empty()) {
    write_file(config.dump_eag_path, result->eag.dump_dot());
  }
  if (config.mode == OutputMode::ReportOnly) {
    out << result->report.to_json().dump(2) << "\n";
    return 0;
  }
  NotebookDoc annotated = annotate_notebook(*result, loaded.taxonomy, loaded.docstrings);
  const std::string target =
      config.mode == OutputMode::Inplace ? nb_path : config.out_path;
  write_notebook(annotated, target);
  err << nb_path << " -> " << target << "\n";
  return 0;
}

} // namespace

int cmd_analyze(const std::string& nb_path, const RunConfig& config, std::ostream& out,
                std::ostream& err) {
  try {
    LoadedConfig loaded = load_config(config);
    auto result = run_analysis(load_notebook(nb_path), loaded.stubs, loaded.taxonomy);
    if (!config.dump_eag_path.empty()) {
      write_file(config.dump_eag_path, result->eag.dump_dot());
    }
    const std::string report = result->report.to_json().dump(2) + "\n";
    if (!config.report_path.empty()) {
      write_file(config.report_path, report);
    } else {
      out << report;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_annotate(const std::string& nb_or_dir, const RunConfig& config, std::ostream& out,
                 std::ostream& err) {
  try {
    LoadedConfig loaded = load_config(config);
    std::error_code ec;
    if (!fs::is_directory(nb_or_dir, ec)) {
      return annotate_one(nb_or_dir, config, loaded, out, err);
    }
    // batch mode: one failure does not abort the rest
    std::vector<std::string> notebooks;
    for (const auto& entry : fs::directory_iterator(nb_or_dir)) {
      if (entry.path().extension() == ".ipynb") {
        notebooks.push_back(entry.path().string());
      }
    }
    std::sort(notebooks.begin(), notebooks.end());
    int failures = 0;
    for (const auto& nb_path : notebooks) {
      try {
        RunConfig one = config;
        if (config.mode == OutputMode::OutPath) {
          one.out_path =
              (fs::path(config.out_path) / fs::path(nb_path).filename()).string();
        }
        annotate_one(nb_path, one, loaded, out, err);
      } catch (const Error& e) {
        err << nb_path << ": " << e.what() << "\n";
        ++failures;
      }
    }
    return failures == 0 ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_eval(const std::string& report_path, const std::string& truth_path, std::ostream& out,
             std::ostream& err) {
  try {
    Json report_doc =
        parse_json_checked(read_file(report_path), report_path, ErrorKind::TruthFormat);
    Json truth_doc =
        parse_json_checked(read_file(truth_path), truth_path, ErrorKind::TruthFormat);
    CallSiteReport found = CallSiteReport::from_json(report_doc, report_path);
    CallSiteReport truth = CallSiteReport::from_json(truth_doc, truth_path);
    out << score(found, truth).to_json().dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_bench(const std::string& suite_dir, const RunConfig& config, std::ostream& out,
              std::ostream& err) {
  try {
    LoadedConfig loaded = load_config(config);
    BenchSummary summary = run_bench_suite(suite_dir, loaded.stubs, loaded.taxonomy);
    if (config.json_output) {
      out << summary.to_json().dump(2) << "\n";
    } else {
      out << summary.to_table();
    }
    return 0; // reporting tool: failures are data, not errors
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

} // namespace headergen
