#pragma once

#include <memory>

#include "headergen/annotate.hpp"
#include "headergen/callsites.hpp"
#include "headergen/classify.hpp"
#include "headergen/defuse.hpp"
#include "headergen/eag.hpp"
#include "headergen/notebook.hpp"
#include "headergen/parser.hpp"
#include "headergen/stubdb.hpp"

namespace headergen {

// Everything produced by one notebook analysis. Heap-bound and pinned: the
// EAG keeps pointers into ir/duc/imports/stubs.
struct AnalysisResult {
  AnalysisResult() = default;
  AnalysisResult(const AnalysisResult&) = delete;
  AnalysisResult& operator=(const AnalysisResult&) = delete;

  NotebookDoc nb;
  CompositeScript script;
  ModuleIR ir;
  ImportTable imports;
  DefUseChains duc;
  LocationMap locations;
  ExtendedAssignmentGraph eag;
  CallSiteReport report; // transitive attribution applied
  std::vector<PatternHit> pattern_hits;
  CellClassification classification;
};

std::unique_ptr<AnalysisResult> run_analysis(NotebookDoc nb, const TypeStubDB& stubs,
                                             const TaxonomyDB& taxonomy);

AnnotationSet build_annotations(const AnalysisResult& result, const TaxonomyDB& taxonomy,
                                const std::map<std::string, std::string>& docstrings);

NotebookDoc annotate_notebook(const AnalysisResult& result, const TaxonomyDB& taxonomy,
                              const std::map<std::string, std::string>& docstrings);

} // namespace headergen
