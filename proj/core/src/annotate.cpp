#include "headergen/annotate.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace headergen {

namespace {

constexpr const char* kIndexAnchor = "headergen-index";

std::string html_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    default:
      out.push_back(c);
    }
  }
  return out;
}

std::string library_of(const std::string& fqn) {
  size_t dot = fqn.find('.');
  if (dot == std::string::npos) {
    return "(notebook)";
  }
  return fqn.substr(0, dot);
}

Json markdown_cell(const std::string& source, const std::string& kind) {
  Json cell;
  cell["cell_type"] = "markdown";
  cell["metadata"] = Json::object();
  cell["metadata"][kMarkerKey] = {{"kind", kind}, {"version", kToolVersion}};
  Json lines = Json::array();
  const auto split = split_lines(source);
  for (size_t i = 0; i < split.size(); ++i) {
    lines.push_back(i + 1 < split.size() ? split[i] + "\n" : split[i]);
  }
  cell["source"] = std::move(lines);
  return cell;
}

} // namespace

std::string slugify(const std::string& title) {
  std::string slug;
  bool dash = false;
  for (char c : title) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      slug.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      dash = false;
    } else if (!slug.empty() && !dash) {
      slug.push_back('-');
      dash = true;
    }
  }
  while (!slug.empty() && slug.back() == '-') {
    slug.pop_back();
  }
  return slug.empty() ? "section" : slug;
}

AnnotationSet build_headers(const CellClassification& classification, const TaxonomyDB& db) {
  AnnotationSet ann;
  std::map<std::string, int> used;
  for (const auto& [ci, subs] : classification.subs) {
    std::set<std::string> top_set = classification.tops(ci, db.taxonomy());
    if (top_set.empty()) {
      continue;
    }
    // keep taxonomy order, not alphabetical
    std::string title;
    for (const auto& top : db.taxonomy().top_categories()) {
      if (top_set.count(top)) {
        title += (title.empty() ? "" : " | ") + top;
      }
    }
    std::string anchor = slugify(title);
    int n = ++used[anchor];
    if (n > 1) {
      anchor += "-" + std::to_string(n);
    }
    ann.header_anchors[ci] = anchor;
    ann.header_cells[ci] =
        "### <a id=\"" + anchor + "\"></a>" + title + "\n";
  }
  return ann;
}

void build_index(AnnotationSet& ann, const CellClassification& classification,
                 const CallSiteReport& report, const TaxonomyDB& db,
                 const std::map<std::string, std::string>& docstrings) {
  // fqns per cell (deduplicated, unresolved dropped)
  std::map<int, std::set<std::string>> cell_fqns;
  for (const auto& [ci, lines] : report.cells()) {
    for (const auto& [line, fqns] : lines) {
      for (const auto& fqn : fqns) {
        if (fqn != kUnresolved) {
          cell_fqns[ci].insert(fqn);
        }
      }
    }
  }

  std::ostringstream out;
  out << "<a id=\"" << kIndexAnchor << "\"></a>\n";
  out << "## Index of ML Operations\n\n";

  for (const auto& top : db.taxonomy().top_categories()) {
    std::vector<int> cells;
    for (const auto& [ci, subs] : classification.subs) {
      if (classification.tops(ci, db.taxonomy()).count(top)) {
        cells.push_back(ci);
      }
    }
    if (cells.empty()) {
      out << "<p><s>" << html_escape(top) << "</s></p>\n";
      continue;
    }
    out << "<details open><summary><strong>" << html_escape(top) << "</strong></summary>\n";
    for (int ci : cells) {
      out << "<ul><li><details><summary>Cell # " << ci;
      auto anchor = ann.header_anchors.find(ci);
      if (anchor != ann.header_anchors.end()) {
        out << " &mdash; <a href=\"#" << anchor->second << "\">goto cell # " << ci << "</a>";
      }
      out << " &middot; <a href=\"#" << kIndexAnchor << "\">back to top</a></summary>\n";

      std::map<std::string, std::vector<std::string>> by_library;
      auto fqns = cell_fqns.find(ci);
      if (fqns != cell_fqns.end()) {
        for (const auto& fqn : fqns->second) {
          by_library[library_of(fqn)].push_back(fqn);
        }
      }
      for (const auto& [lib, lib_fqns] : by_library) {
        out << "<ul><li><details><summary><code>" << html_escape(lib)
            << "</code></summary><ul>\n";
        for (const auto& fqn : lib_fqns) {
          std::string display = fqn;
          auto args = report.call_args.find({ci, fqn});
          if (args != report.call_args.end()) {
            display += args->second;
          }
          auto doc = docstrings.find(fqn);
          if (doc != docstrings.end()) {
            out << "<li><details><summary><code>" << html_escape(display)
                << "</code></summary><pre>" << html_escape(doc->second)
                << "</pre></details></li>\n";
          } else {
            out << "<li><code>" << html_escape(display) << "</code></li>\n";
          }
        }
        out << "</ul></details></li></ul>\n";
      }
      out << "</details></li></ul>\n";
    }
    out << "</details>\n";
  }
  ann.index_cell = out.str();
}

void build_toc(AnnotationSet& ann) {
  if (ann.header_cells.empty()) {
    ann.toc_cell.clear();
    return;
  }
  std::ostringstream out;
  out << "## Table of Contents\n\n";
  for (const auto& [ci, source] : ann.header_cells) {
    // title text sits after the anchor markup
    std::string title = source;
    size_t close = title.find("</a>");
    if (close != std::string::npos) {
      title = title.substr(close + 4);
    }
    while (!title.empty() && (title.back() == '\n' || title.back() == ' ')) {
      title.pop_back();
    }
    out << "- [Cell " << ci << ": " << title << "](#" << ann.header_anchors.at(ci) << ")\n";
  }
  ann.toc_cell = out.str();
}

NotebookDoc apply(const NotebookDoc& nb, const AnnotationSet& ann) {
  NotebookDoc out;
  out.nbformat_major = nb.nbformat_major;
  out.raw = nb.raw;

  std::vector<Json> cells;
  if (!ann.index_cell.empty()) {
    cells.push_back(markdown_cell(ann.index_cell, "index"));
  }
  if (!ann.toc_cell.empty()) {
    cells.push_back(markdown_cell(ann.toc_cell, "toc"));
  }
  int code_index = 0;
  for (const auto& cell : nb.cells) {
    if (cell.annotation_marker) {
      continue; // previously generated cell
    }
    if (cell.is_code()) {
      ++code_index;
      auto header = ann.header_cells.find(code_index);
      if (header != ann.header_cells.end()) {
        cells.push_back(markdown_cell(header->second, "header"));
      }
    }
    cells.push_back(cell.raw);
  }

  Json doc = nb.raw;
  Json cells_json = Json::array();
  for (auto& c : cells) {
    cells_json.push_back(std::move(c));
  }
  doc["cells"] = std::move(cells_json);
  return parse_notebook_json(doc, "<annotated>");
}

} // namespace headergen
