#include "headergen/evaluate.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "headergen/error.hpp"

namespace fs = std::filesystem;

namespace headergen {

Json CaseResult::to_json() const {
  Json doc;
  doc["name"] = name;
  doc["sound"] = sound;
  doc["complete"] = complete;
  doc["metrics"] = pr.to_json();
  if (!expected_unsound.empty()) {
    doc["expected_unsound"] = expected_unsound;
  }
  if (!expected_incomplete.empty()) {
    doc["expected_incomplete"] = expected_incomplete;
  }
  return doc;
}

Json BenchSummary::to_json() const {
  Json doc;
  Json case_list = Json::array();
  for (const auto& c : cases) {
    case_list.push_back(c.to_json());
  }
  doc["cases"] = std::move(case_list);
  doc["total"] = cases.size();
  doc["sound"] = sound_count;
  doc["complete"] = complete_count;
  return doc;
}

std::string BenchSummary::to_table() const {
  std::ostringstream out;
  size_t width = 4;
  for (const auto& c : cases) {
    width = std::max(width, c.name.size());
  }
  out << std::left << std::setw(static_cast<int>(width)) << "case"
      << "  sound  complete  fp  fn\n";
  for (const auto& c : cases) {
    out << std::left << std::setw(static_cast<int>(width)) << c.name << "  "
        << (c.sound ? "yes  " : "NO   ") << "  " << (c.complete ? "yes     " : "NO      ")
        << "  " << std::setw(2) << c.pr.fp << "  " << std::setw(2) << c.pr.fn;
    if (!c.sound && !c.expected_unsound.empty()) {
      out << "  [unsound: " << c.expected_unsound << "]";
    }
    if (!c.complete && !c.expected_incomplete.empty()) {
      out << "  [incomplete: " << c.expected_incomplete << "]";
    }
    out << "\n";
  }
  out << "total: " << cases.size() << ", sound: " << sound_count
      << ", complete: " << complete_count << "\n";
  return out.str();
}

PrecisionRecall evaluate_notebook(const std::string& nb_path, const std::string& truth_path,
                                  const TypeStubDB& stubs, const TaxonomyDB& taxonomy) {
  auto result = run_analysis(load_notebook(nb_path), stubs, taxonomy);
  Json truth_doc = parse_json_checked(read_file(truth_path), truth_path, ErrorKind::TruthFormat);
  CallSiteReport truth = CallSiteReport::from_json(truth_doc, truth_path);
  return score(result->report, truth);
}

BenchSummary run_bench_suite(const std::string& suite_dir, const TypeStubDB& stubs,
                             const TaxonomyDB& taxonomy) {
  std::error_code ec;
  if (!fs::is_directory(suite_dir, ec)) {
    fail(ErrorKind::Io, "benchmark suite directory not found: " + suite_dir);
  }
  std::vector<std::string> case_dirs;
  for (const auto& entry : fs::directory_iterator(suite_dir)) {
    if (entry.is_directory()) {
      case_dirs.push_back(entry.path().string());
    }
  }
  std::sort(case_dirs.begin(), case_dirs.end());

  BenchSummary summary;
  for (const auto& dir : case_dirs) {
    CaseResult result;
    result.name = fs::path(dir).filename().string();

    std::string nb_path;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".ipynb") {
        nb_path = entry.path().string();
        break;
      }
    }
    const std::string truth_path = (fs::path(dir) / "truth.json").string();
    if (nb_path.empty() || !fs::exists(truth_path)) {
      fail(ErrorKind::Io, "case " + result.name + " needs a notebook and truth.json");
    }

    const fs::path meta_path = fs::path(dir) / "meta.json";
    if (fs::exists(meta_path)) {
      Json meta = parse_json_checked(read_file(meta_path.string()), meta_path.string(),
                                     ErrorKind::TruthFormat);
      if (meta.contains("expected_unsound")) {
        result.expected_unsound = meta["expected_unsound"].get<std::string>();
      }
      if (meta.contains("expected_incomplete")) {
        result.expected_incomplete = meta["expected_incomplete"].get<std::string>();
      }
    }

    result.pr = evaluate_notebook(nb_path, truth_path, stubs, taxonomy);
    result.sound = result.pr.fn == 0;
    result.complete = result.pr.fp == 0;
    summary.sound_count += result.sound ? 1 : 0;
    summary.complete_count += result.complete ? 1 : 0;
    summary.cases.push_back(std::move(result));
  }
  return summary;
}

} // namespace headergen
