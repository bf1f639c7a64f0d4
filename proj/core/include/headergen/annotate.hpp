#pragma once

#include <map>
#include <string>

#include "headergen/classify.hpp"
#include "headergen/notebook.hpp"

namespace headergen {

struct AnnotationSet {
  std::string index_cell; // empty: no index emitted
  std::map<int, std::string> header_cells;   // code_index -> markdown source
  std::map<int, std::string> header_anchors; // code_index -> anchor id
  std::string toc_cell;   // empty: no TOC emitted

  bool empty() const {
    return index_cell.empty() && header_cells.empty() && toc_cell.empty();
  }
};

std::string slugify(const std::string& title);

// Per-cell headers listing every top-level category, each with a unique
// anchor (duplicate titles get -2, -3, ... suffixes).
AnnotationSet build_headers(const CellClassification& classification, const TaxonomyDB& db);

// Navigable index: top category -> cells -> per-library call lists; empty
// categories are struck out. Extends `ann` in place.
void build_index(AnnotationSet& ann, const CellClassification& classification,
                 const CallSiteReport& report, const TaxonomyDB& db,
                 const std::map<std::string, std::string>& docstrings);

// One linked entry per header, in cell order.
void build_toc(AnnotationSet& ann);

// Removes previously generated cells (marker metadata), then splices the
// index, TOC, and headers. Idempotent for equal analyses.
NotebookDoc apply(const NotebookDoc& nb, const AnnotationSet& ann);

} // namespace headergen
