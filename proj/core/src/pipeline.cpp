#include "headergen/pipeline.hpp"

namespace headergen {

std::unique_ptr<AnalysisResult> run_analysis(NotebookDoc nb, const TypeStubDB& stubs,
                                             const TaxonomyDB& taxonomy) {
  auto result = std::make_unique<AnalysisResult>();
  result->nb = std::move(nb);
  result->script = flatten(result->nb);
  result->ir = parse_script(result->script);
  result->imports = build_import_table(result->ir);
  result->duc = build_duc(result->ir);
  result->locations = location_map(result->duc);
  result->eag = build_eag(result->ir, result->duc, result->imports, stubs);
  // re-pin: build_eag wires pointers to its own arguments, which live here
  result->eag.ir = &result->ir;
  result->eag.duc = &result->duc;
  result->eag.imports = &result->imports;
  result->eag.stubs = &stubs;

  CallSiteReport direct = extract_callsites(result->ir, result->eag, result->script);
  result->report = attribute_transitive(direct, result->eag);
  result->pattern_hits = match_patterns(result->ir, result->eag, result->script, taxonomy);
  result->classification =
      classify_cell(result->report, result->pattern_hits, taxonomy,
                    cells_with_imports(result->ir, result->script));
  return result;
}

AnnotationSet build_annotations(const AnalysisResult& result, const TaxonomyDB& taxonomy,
                                const std::map<std::string, std::string>& docstrings) {
  AnnotationSet ann = build_headers(result.classification, taxonomy);
  build_index(ann, result.classification, result.report, taxonomy, docstrings);
  build_toc(ann);
  return ann;
}

NotebookDoc annotate_notebook(const AnalysisResult& result, const TaxonomyDB& taxonomy,
                              const std::map<std::string, std::string>& docstrings) {
  return apply(result.nb, build_annotations(result, taxonomy, docstrings));
}

} // namespace headergen
