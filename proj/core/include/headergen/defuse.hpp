#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "headergen/ast.hpp"

namespace headergen {

// Local alias -> imported dotted path, per scope. `import seaborn as sns`
// yields (scope, "sns") -> "seaborn"; `from keras.models import Sequential`
// yields (scope, "Sequential") -> "keras.models.Sequential".
struct ImportTable {
  std::map<std::pair<int, std::string>, std::string> aliases;
  std::vector<std::pair<int, std::string>> star_imports; // (scope, module)

  // Walks the scope chain from `scope_id` to the module scope.
  std::optional<std::string> lookup(const ModuleIR& ir, int scope_id,
                                    const std::string& name) const;
};

enum class DefKind {
  Assign,
  AugAssign,
  AnnAssign,
  Import,
  FunctionDef,
  ClassDef,
  Param,
  LoopTarget,
  WithTarget,
  ExceptName,
  CompTarget,
  Walrus,
  Phi, // synthetic join of branch definitions
};

// One definition site of one name plus all uses reached before any
// redefinition.
struct Chain {
  int id = -1;
  int scope_id = 0;
  std::string name;
  int def_line = 0;
  DefKind kind = DefKind::Assign;
  bool conditional = false; // definition sits under a branch/loop/handler
  int prior_chain = -1;     // chain visible just before this definition
  std::set<int> use_lines;
  std::vector<int> phi_inputs; // Phi chains only: joined definitions

  // the defining AST node; used by the EAG builder to attach values
  const void* def_node = nullptr;
};

struct DefUseChains {
  std::vector<Chain> chains;

  // (line, name) -> chains whose use set contains that line
  std::map<std::pair<int, std::string>, std::set<int>> use_index;
  // (defining node, name) -> chain
  std::map<std::pair<const void*, std::string>, int> def_by_node;

  const Chain& chain(int id) const { return chains[static_cast<size_t>(id)]; }

  // Latest chain for a name visible at `line` (used for def-line queries,
  // e.g. "what does x point to right after this assignment").
  std::optional<int> governing_def(const std::string& name, int line) const;
};

// line -> set of (name, chain id): which definition governs each name used
// at that line.
struct LocationMap {
  std::map<int, std::set<std::pair<std::string, int>>> at;
};

ImportTable build_import_table(const ModuleIR& ir);
DefUseChains build_duc(const ModuleIR& ir);
LocationMap location_map(const DefUseChains& duc);

} // namespace headergen
