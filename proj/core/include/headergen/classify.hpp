#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "headergen/callsites.hpp"
#include "headergen/eag.hpp"

namespace headergen {

// Receiver type that gates the dataframe usage patterns.
inline constexpr const char* kDataFrameFqn = "pandas.core.frame.DataFrame";

struct Taxonomy {
  // insertion order preserved: rendering follows the file's category order
  std::vector<std::pair<std::string, std::vector<std::string>>> categories;

  bool has_sub(const std::string& sub) const;
  // parent top-level category of a sub-category ("" if unknown)
  std::string parent(const std::string& sub) const;
  std::vector<std::string> top_categories() const;
};

class TaxonomyDB {
public:
  static TaxonomyDB load_file(const std::string& path);
  static TaxonomyDB from_json(const Json& doc, const std::string& context);

  const Taxonomy& taxonomy() const { return taxonomy_; }

  // exact match first, else longest matching `prefix.*` rule, else empty
  std::set<std::string> classify(const std::string& fqn) const;

  const std::string& feature_engineering_sub() const { return table2_feature_engineering_; }
  const std::string& data_preparation_sub() const { return table2_data_preparation_; }

private:
  Taxonomy taxonomy_;
  std::map<std::string, std::set<std::string>> exact_rules_;
  std::map<std::string, std::set<std::string>> prefix_rules_; // key without ".*"
  std::string table2_feature_engineering_;
  std::string table2_data_preparation_;
};

std::set<std::string> classify_callsite(const TaxonomyDB& db, const std::string& fqn);

struct PatternHit {
  int pattern_id = 0; // 1..5
  CellLocation location;
  std::set<std::string> categories;
};

std::vector<PatternHit> match_patterns(const ModuleIR& ir, const ExtendedAssignmentGraph& eag,
                                       const CompositeScript& script, const TaxonomyDB& db);

struct CellClassification {
  std::map<int, std::set<std::string>> subs; // code_index -> sub-category ids

  std::set<std::string> tops(int code_index, const Taxonomy& taxonomy) const;
};

CellClassification classify_cell(const CallSiteReport& report,
                                 const std::vector<PatternHit>& hits, const TaxonomyDB& db,
                                 const std::set<int>& import_cells);

// cells containing import statements (Library Loading rule)
std::set<int> cells_with_imports(const ModuleIR& ir, const CompositeScript& script);

} // namespace headergen
