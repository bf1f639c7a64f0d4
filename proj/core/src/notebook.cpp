#include "headergen/notebook.hpp"

#include <algorithm>

#include "headergen/error.hpp"

namespace headergen {

namespace {

bool valid_utf8(const std::string& s) {
  size_t i = 0;
  const auto* b = reinterpret_cast<const unsigned char*>(s.data());
  while (i < s.size()) {
    unsigned char c = b[i];
    size_t n;
    if (c < 0x80) {
      n = 0;
    } else if ((c & 0xE0) == 0xC0) {
      n = 1;
    } else if ((c & 0xF0) == 0xE0) {
      n = 2;
    } else if ((c & 0xF8) == 0xF0) {
      n = 3;
    } else {
      return false;
    }
    if (n > 0 && i + n >= s.size()) {
      return false;
    }
    for (size_t k = 1; k <= n; ++k) {
      if ((b[i + k] & 0xC0) != 0x80) {
        return false;
      }
    }
    i += n + 1;
  }
  return true;
}

std::string join_source(const Json& src, const std::string& context) {
  if (src.is_string()) {
    return src.get<std::string>();
  }
  if (src.is_array()) {
    std::string joined;
    for (const auto& part : src) {
      if (!part.is_string()) {
        fail(ErrorKind::MalformedNotebook, context + ": cell source fragments must be strings");
      }
      joined += part.get<std::string>();
    }
    return joined;
  }
  fail(ErrorKind::MalformedNotebook, context + ": cell source must be a string or string array");
}

} // namespace

void CellLineMap::append(int code_index, int cell_line) {
  entries_.push_back({code_index, cell_line});
  inverse_[{code_index, cell_line}] = static_cast<int>(entries_.size());
}

CellLocation CellLineMap::location(int script_line) const {
  if (!contains(script_line)) {
    fail(ErrorKind::Internal, "script line " + std::to_string(script_line) + " outside line map");
  }
  return entries_[static_cast<size_t>(script_line) - 1];
}

std::optional<int> CellLineMap::script_line(CellLocation loc) const {
  auto it = inverse_.find({loc.code_index, loc.cell_line});
  if (it == inverse_.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  if (text.empty()) {
    return lines;
  }
  size_t start = 0;
  while (true) {
    size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
    if (start == text.size()) {
      lines.emplace_back();
      break;
    }
  }
  return lines;
}

NotebookDoc parse_notebook_json(const Json& doc, const std::string& context) {
  if (!doc.is_object()) {
    fail(ErrorKind::MalformedNotebook, context + ": notebook root must be an object");
  }
  if (!doc.contains("nbformat") || !doc["nbformat"].is_number_integer()) {
    fail(ErrorKind::MalformedNotebook, context + ": missing integer nbformat");
  }
  int major = doc["nbformat"].get<int>();
  if (major != 4) {
    fail(ErrorKind::UnsupportedVersion,
         context + ": unsupported nbformat " + std::to_string(major) + " (only 4 is supported)");
  }
  if (!doc.contains("cells") || !doc["cells"].is_array()) {
    fail(ErrorKind::MalformedNotebook, context + ": missing cells array");
  }

  NotebookDoc nb;
  nb.nbformat_major = major;
  nb.raw = doc;
  int index = 0;
  int code_index = 0;
  for (const auto& raw_cell : doc["cells"]) {
    if (!raw_cell.is_object() || !raw_cell.contains("cell_type")) {
      fail(ErrorKind::MalformedNotebook, context + ": cell " + std::to_string(index) + " malformed");
    }
    Cell cell;
    cell.raw = raw_cell;
    cell.index = index++;
    const std::string type = raw_cell["cell_type"].get<std::string>();
    if (type == "code") {
      cell.kind = CellKind::Code;
      cell.code_index = ++code_index;
    } else if (type == "markdown") {
      cell.kind = CellKind::Markdown;
    } else if (type == "raw") {
      cell.kind = CellKind::Raw;
    } else {
      fail(ErrorKind::MalformedNotebook, context + ": unknown cell_type \"" + type + "\"");
    }
    if (!raw_cell.contains("source")) {
      fail(ErrorKind::MalformedNotebook, context + ": cell " + std::to_string(cell.index) + " has no source");
    }
    cell.source = join_source(raw_cell["source"], context);
    if (!valid_utf8(cell.source)) {
      fail(ErrorKind::MalformedNotebook,
           context + ": cell " + std::to_string(cell.index) + " is not valid UTF-8");
    }
    if (raw_cell.contains("metadata") && raw_cell["metadata"].is_object() &&
        raw_cell["metadata"].contains(kMarkerKey)) {
      cell.annotation_marker = raw_cell["metadata"][kMarkerKey];
    }
    nb.cells.push_back(std::move(cell));
  }
  return nb;
}

NotebookDoc load_notebook(const std::string& path) {
  const std::string text = read_file(path);
  Json doc = parse_json_checked(text, path, ErrorKind::MalformedNotebook);
  return parse_notebook_json(doc, path);
}

CompositeScript flatten(const NotebookDoc& nb) {
  CompositeScript script;
  std::vector<std::string> out_lines;
  for (const auto& cell : nb.cells) {
    if (!cell.is_code() || cell.source.empty()) {
      continue;
    }
    const auto lines = split_lines(cell.source);
    for (size_t i = 0; i < lines.size(); ++i) {
      std::string line = lines[i];
      const size_t first = line.find_first_not_of(" \t");
      if (first != std::string::npos && (line[first] == '%' || line[first] == '!')) {
        // notebook-shell/magic line: keep the line count, drop the content
        line = line.substr(0, first) + "pass";
      }
      out_lines.push_back(line);
      script.map.append(cell.code_index, static_cast<int>(i) + 1);
    }
  }
  for (size_t i = 0; i < out_lines.size(); ++i) {
    if (i) {
      script.text += '\n';
    }
    script.text += out_lines[i];
  }
  return script;
}

std::string notebook_to_string(const NotebookDoc& nb) {
  Json doc = nb.raw;
  Json cells = Json::array();
  for (const auto& cell : nb.cells) {
    cells.push_back(cell.raw);
  }
  doc["cells"] = std::move(cells);
  return doc.dump(1) + "\n";
}

void write_notebook(const NotebookDoc& nb, const std::string& path) {
  write_file(path, notebook_to_string(nb));
}

} // namespace headergen
