#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "headergen/eag.hpp"
#include "headergen/notebook.hpp"

namespace headergen {

inline constexpr const char* kUnresolved = "<unresolved>";

struct CallSite {
  enum class Origin { Direct, Transitive };

  CellLocation location;
  std::set<std::string> fqns; // non-empty; may contain kUnresolved
  Origin origin = Origin::Direct;

  // internal bookkeeping for the transitive closure
  int enclosing_symbol = -1;       // -1: cell-level statement
  std::vector<int> user_callees;   // resolved user-function/class symbols
};

struct CallSiteReport {
  std::vector<CallSite> sites;

  // (code_index, fqn) -> example argument text, for the index renderer
  std::map<std::pair<int, std::string>, std::string> call_args;

  // canonical per-cell view: cell -> line -> sorted fqns
  std::map<int, std::map<int, std::set<std::string>>> cells() const;

  Json to_json() const;
  static CallSiteReport from_json(const Json& doc, const std::string& context);
};

struct PrecisionRecall {
  double precision = 1.0;
  double recall = 1.0;
  long tp = 0;
  long fp = 0;
  long fn = 0;

  Json to_json() const;
};

CallSiteReport extract_callsites(const ModuleIR& ir, const ExtendedAssignmentGraph& eag,
                                 const CompositeScript& script);

// Charges callsites inside user-defined functions to every cell-level call
// of those functions (full closure, cycle-safe).
CallSiteReport attribute_transitive(const CallSiteReport& report,
                                    const ExtendedAssignmentGraph& eag);

// Exact (location, fqn) matching; kUnresolved entries are reported but do
// not participate in the counts.
PrecisionRecall score(const CallSiteReport& found, const CallSiteReport& truth);

} // namespace headergen
