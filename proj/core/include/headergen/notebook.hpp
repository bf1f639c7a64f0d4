#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "headergen/json_util.hpp"

namespace headergen {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kMarkerKey = "headergen";

enum class CellKind { Code, Markdown, Raw };

struct Cell {
  CellKind kind = CellKind::Code;
  std::string source;     // joined source text
  int index = 0;          // 0-based position among all cells
  int code_index = 0;     // 1-based among code cells; 0 for non-code cells
  Json raw;               // original cell JSON, re-emitted verbatim on write
  std::optional<Json> annotation_marker; // metadata[kMarkerKey] when present

  bool is_code() const { return kind == CellKind::Code; }
};

struct NotebookDoc {
  int nbformat_major = 4;
  std::vector<Cell> cells;
  Json raw; // full document; "cells" is rebuilt from `cells` on write
};

struct CellLocation {
  int code_index = 0; // 1-based
  int cell_line = 0;  // 1-based

  auto operator<=>(const CellLocation&) const = default;
};

// Bijection script line <-> (code_index, cell_line). Script lines are
// 1-based and contiguous.
class CellLineMap {
public:
  void append(int code_index, int cell_line);

  int line_count() const { return static_cast<int>(entries_.size()); }
  bool contains(int script_line) const {
    return script_line >= 1 && script_line <= line_count();
  }
  CellLocation location(int script_line) const;
  std::optional<int> script_line(CellLocation loc) const;

private:
  std::vector<CellLocation> entries_;
  std::map<std::pair<int, int>, int> inverse_;
};

struct CompositeScript {
  std::string text;
  CellLineMap map;
};

// Splits on '\n'; "" yields no lines, a trailing newline yields a final
// empty line. This is the single line-counting convention used everywhere.
std::vector<std::string> split_lines(const std::string& text);

NotebookDoc load_notebook(const std::string& path);
NotebookDoc parse_notebook_json(const Json& doc, const std::string& context);
CompositeScript flatten(const NotebookDoc& nb);
void write_notebook(const NotebookDoc& nb, const std::string& path);
std::string notebook_to_string(const NotebookDoc& nb);

} // namespace headergen
