#pragma once

#include <string>

#include "headergen/ast.hpp"
#include "headergen/notebook.hpp"

namespace headergen {

// Parses plain script text. Syntax errors carry "line N" positions.
ModuleIR parse_module(const std::string& source);

// Parses a flattened notebook script; syntax errors are re-labelled with
// (cell, line) through the script's line map.
ModuleIR parse_script(const CompositeScript& script);

} // namespace headergen
