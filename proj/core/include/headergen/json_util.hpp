#pragma once

#include <string>

#include "headergen/error.hpp"
#include "json.hpp"

namespace headergen {

// Key-order-preserving JSON is used everywhere so that outputs are
// byte-stable across runs.
using Json = nlohmann::ordered_json;

// Parses `text`, rejecting duplicate object keys anywhere in the document.
// `context` names the input (file path) for diagnostics; `kind` selects the
// error category thrown on failure.
Json parse_json_checked(const std::string& text, const std::string& context,
                        ErrorKind kind);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace headergen
