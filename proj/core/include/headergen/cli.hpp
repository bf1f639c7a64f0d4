#pragma once

#include <iosfwd>
#include <string>

namespace headergen {

enum class OutputMode { Inplace, OutPath, ReportOnly };

struct RunConfig {
  std::string stubs_dir;
  std::string taxonomy_path;
  OutputMode mode = OutputMode::ReportOnly;
  std::string out_path;     // OutputMode::OutPath
  std::string report_path;  // analyze: write report here instead of stdout
  std::string dump_eag_path;
  bool json_output = false; // bench: machine-readable
};

// Exit codes: 0 success, 2 input error (notebook/stubs/taxonomy/truth),
// 1 internal failure.
int cmd_analyze(const std::string& nb_path, const RunConfig& config, std::ostream& out,
                std::ostream& err);
int cmd_annotate(const std::string& nb_or_dir, const RunConfig& config, std::ostream& out,
                 std::ostream& err);
int cmd_eval(const std::string& report_path, const std::string& truth_path, std::ostream& out,
             std::ostream& err);
int cmd_bench(const std::string& suite_dir, const RunConfig& config, std::ostream& out,
              std::ostream& err);

} // namespace headergen
