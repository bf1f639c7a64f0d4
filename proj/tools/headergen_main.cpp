// Command-line driver: analyze / annotate / eval / bench.

#include <iostream>

#include "CLI11.hpp"
#include "headergen/cli.hpp"
#include "headergen/notebook.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Static notebook annotator: flow-sensitive callsite analysis, "
               "ML-operation classification, and markdown annotation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", headergen::kToolVersion);

  headergen::RunConfig config;
  std::string input;
  std::string truth;
  bool inplace = false;
  bool report_only = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--stubs", config.stubs_dir, "Directory of .stub.json files")->required();
    cmd->add_option("--taxonomy", config.taxonomy_path, "Taxonomy JSON file")->required();
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Extract the callsite report");
  analyze->add_option("notebook", input, "Notebook (.ipynb)")->required();
  add_common(analyze);
  analyze->add_option("--report", config.report_path, "Write the report here instead of stdout");
  analyze->add_option("--dump-eag", config.dump_eag_path, "Dump the assignment graph as DOT");

  CLI::App* annotate = app.add_subcommand("annotate", "Write an annotated notebook");
  annotate->add_option("notebook", input, "Notebook (.ipynb) or a directory of notebooks")
      ->required();
  add_common(annotate);
  annotate->add_option("--out", config.out_path, "Output notebook path (or directory in batch mode)");
  annotate->add_flag("--inplace", inplace, "Rewrite the input notebook in place");
  annotate->add_flag("--report-only", report_only, "Print the callsite report; write nothing");
  annotate->add_option("--dump-eag", config.dump_eag_path, "Dump the assignment graph as DOT");

  CLI::App* eval = app.add_subcommand("eval", "Score a report against ground truth");
  eval->add_option("report", input, "Callsite report JSON")->required();
  eval->add_option("truth", truth, "Ground-truth JSON")->required();

  CLI::App* bench = app.add_subcommand("bench", "Run a benchmark suite directory");
  bench->add_option("suite", input, "Directory of case subdirectories")->required();
  add_common(bench);
  bench->add_flag("--json", config.json_output, "Machine-readable output");

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) {
    config.mode = headergen::OutputMode::ReportOnly;
    return headergen::cmd_analyze(input, config, std::cout, std::cerr);
  }
  if (annotate->parsed()) {
    const int modes = (inplace ? 1 : 0) + (report_only ? 1 : 0) + (config.out_path.empty() ? 0 : 1);
    if (modes != 1) {
      std::cerr << "error: choose exactly one of --out, --inplace, --report-only\n";
      return 2;
    }
    config.mode = inplace      ? headergen::OutputMode::Inplace
                  : report_only ? headergen::OutputMode::ReportOnly
                                : headergen::OutputMode::OutPath;
    return headergen::cmd_annotate(input, config, std::cout, std::cerr);
  }
  if (eval->parsed()) {
    return headergen::cmd_eval(input, truth, std::cout, std::cerr);
  }
  return headergen::cmd_bench(input, config, std::cout, std::cerr);
}
