#pragma once

#include <string>
#include <vector>

#include "headergen/pipeline.hpp"

namespace headergen {

// One micro-benchmark case: a notebook plus its (location, fqn) truth.
// Sound: no false negatives. Complete: no false positives.
struct CaseResult {
  std::string name;
  bool sound = false;
  bool complete = false;
  PrecisionRecall pr;
  std::string expected_unsound;    // documented reason, from meta.json
  std::string expected_incomplete; // documented reason, from meta.json

  Json to_json() const;
};

struct BenchSummary {
  std::vector<CaseResult> cases;
  int sound_count = 0;
  int complete_count = 0;

  Json to_json() const;
  std::string to_table() const;
};

// Analyzes one notebook and scores it against a truth report file.
PrecisionRecall evaluate_notebook(const std::string& nb_path, const std::string& truth_path,
                                  const TypeStubDB& stubs, const TaxonomyDB& taxonomy);

// Runs every case subdirectory (notebook + truth.json [+ meta.json]).
BenchSummary run_bench_suite(const std::string& suite_dir, const TypeStubDB& stubs,
                             const TaxonomyDB& taxonomy);

} // namespace headergen
