#include "headergen/classify.hpp"

#include <algorithm>

#include "headergen/error.hpp"

namespace headergen {

namespace {

bool is_scalar_literal(const Expr& e) {
  switch (e.kind) {
  case Expr::Kind::Number:
  case Expr::Kind::Str:
  case Expr::Kind::BoolLit:
  case Expr::Kind::NoneLit:
    return true;
  case Expr::Kind::UnaryOp: {
    const auto& u = static_cast<const UnaryOpExpr&>(e);
    return (u.op == "-" || u.op == "+") && u.operand && is_scalar_literal(*u.operand);
  }
  default:
    return false;
  }
}

// df / df.x / df['x'] — returns the base variable name or empty
const NameExpr* column_access_base(const Expr& e) {
  if (e.kind == Expr::Kind::Name) {
    return &static_cast<const NameExpr&>(e);
  }
  if (e.kind == Expr::Kind::Attribute) {
    const auto& attr = static_cast<const AttributeExpr&>(e);
    if (attr.value->kind == Expr::Kind::Name) {
      return &static_cast<const NameExpr&>(*attr.value);
    }
    return nullptr;
  }
  if (e.kind == Expr::Kind::Subscript) {
    const auto& sub = static_cast<const SubscriptExpr&>(e);
    if (sub.value->kind == Expr::Kind::Name && sub.index->kind == Expr::Kind::Str) {
      return &static_cast<const NameExpr&>(*sub.value);
    }
    return nullptr;
  }
  return nullptr;
}

// strictly a column (df.x or df['x']), not the bare frame
const NameExpr* strict_column_base(const Expr& e) {
  if (e.kind == Expr::Kind::Name) {
    return nullptr;
  }
  return column_access_base(e);
}

bool contains_compare(const Expr& e) {
  switch (e.kind) {
  case Expr::Kind::Compare:
    return true;
  case Expr::Kind::BoolOp: {
    const auto& b = static_cast<const BoolOpExpr&>(e);
    return std::any_of(b.values.begin(), b.values.end(),
                       [](const ExprPtr& v) { return contains_compare(*v); });
  }
  case Expr::Kind::BinOp: {
    const auto& b = static_cast<const BinOpExpr&>(e);
    return contains_compare(*b.lhs) || contains_compare(*b.rhs);
  }
  case Expr::Kind::UnaryOp: {
    const auto& u = static_cast<const UnaryOpExpr&>(e);
    return u.operand && contains_compare(*u.operand);
  }
  default:
    return false;
  }
}

} // namespace

bool Taxonomy::has_sub(const std::string& sub) const {
  for (const auto& [top, subs] : categories) {
    if (std::find(subs.begin(), subs.end(), sub) != subs.end()) {
      return true;
    }
  }
  return false;
}

std::string Taxonomy::parent(const std::string& sub) const {
  for (const auto& [top, subs] : categories) {
    if (std::find(subs.begin(), subs.end(), sub) != subs.end()) {
      return top;
    }
  }
  return "";
}

std::vector<std::string> Taxonomy::top_categories() const {
  std::vector<std::string> tops;
  for (const auto& [top, subs] : categories) {
    tops.push_back(top);
  }
  return tops;
}

TaxonomyDB TaxonomyDB::load_file(const std::string& path) {
  Json doc = parse_json_checked(read_file(path), path, ErrorKind::TaxonomyFormat);
  return from_json(doc, path);
}

TaxonomyDB TaxonomyDB::from_json(const Json& doc, const std::string& context) {
  if (!doc.is_object()) {
    fail(ErrorKind::TaxonomyFormat, context + ": taxonomy root must be an object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key != "categories" && key != "rules" && key != "table2_mapping") {
      fail(ErrorKind::TaxonomyFormat, context + ": unknown key \"" + key + "\"");
    }
  }
  if (!doc.contains("categories") || !doc["categories"].is_object()) {
    fail(ErrorKind::TaxonomyFormat, context + ": missing categories object");
  }

  TaxonomyDB db;
  std::set<std::string> seen_subs;
  for (const auto& [top, subs] : doc["categories"].items()) {
    if (!subs.is_array()) {
      fail(ErrorKind::TaxonomyFormat, context + ": categories/" + top + " must be an array");
    }
    std::vector<std::string> sub_list;
    for (const auto& sub : subs) {
      if (!sub.is_string()) {
        fail(ErrorKind::TaxonomyFormat, context + ": sub-categories must be strings");
      }
      const std::string name = sub.get<std::string>();
      if (!seen_subs.insert(name).second) {
        fail(ErrorKind::TaxonomyFormat,
             context + ": sub-category \"" + name + "\" appears under two parents");
      }
      sub_list.push_back(name);
    }
    db.taxonomy_.categories.emplace_back(top, std::move(sub_list));
  }

  if (doc.contains("rules")) {
    if (!doc["rules"].is_object()) {
      fail(ErrorKind::TaxonomyFormat, context + ": rules must be an object");
    }
    for (const auto& [pattern, subs] : doc["rules"].items()) {
      if (!subs.is_array() || subs.empty()) {
        fail(ErrorKind::TaxonomyFormat,
             context + ": rule \"" + pattern + "\" needs a non-empty category array");
      }
      std::set<std::string> cats;
      for (const auto& sub : subs) {
        const std::string name = sub.is_string() ? sub.get<std::string>() : "";
        if (!db.taxonomy_.has_sub(name)) {
          fail(ErrorKind::TaxonomyFormat,
               context + ": rule \"" + pattern + "\" names unknown sub-category \"" + name + "\"");
        }
        cats.insert(name);
      }
      if (pattern.size() > 2 && pattern.substr(pattern.size() - 2) == ".*") {
        db.prefix_rules_[pattern.substr(0, pattern.size() - 2)] = std::move(cats);
      } else {
        db.exact_rules_[pattern] = std::move(cats);
      }
    }
  }

  if (doc.contains("table2_mapping")) {
    const Json& map = doc["table2_mapping"];
    if (!map.is_object()) {
      fail(ErrorKind::TaxonomyFormat, context + ": table2_mapping must be an object");
    }
    for (const auto& [label, sub] : map.items()) {
      const std::string name = sub.is_string() ? sub.get<std::string>() : "";
      if (!db.taxonomy_.has_sub(name)) {
        fail(ErrorKind::TaxonomyFormat,
             context + ": table2_mapping \"" + label + "\" names unknown sub-category");
      }
      if (label == "Feature Engineering") {
        db.table2_feature_engineering_ = name;
      } else if (label == "Data Preparation") {
        db.table2_data_preparation_ = name;
      } else {
        fail(ErrorKind::TaxonomyFormat, context + ": unknown table2_mapping label \"" + label + "\"");
      }
    }
  }
  if (db.table2_feature_engineering_.empty()) {
    db.table2_feature_engineering_ = "Feature Transformation";
  }
  if (db.table2_data_preparation_.empty()) {
    db.table2_data_preparation_ = "Data Cleaning Filtering";
  }
  return db;
}

std::set<std::string> TaxonomyDB::classify(const std::string& fqn) const {
  auto exact = exact_rules_.find(fqn);
  if (exact != exact_rules_.end()) {
    return exact->second;
  }
  size_t best_len = 0;
  const std::set<std::string>* best = nullptr;
  for (const auto& [prefix, cats] : prefix_rules_) {
    if (fqn.size() > prefix.size() + 1 && fqn.compare(0, prefix.size(), prefix) == 0 &&
        fqn[prefix.size()] == '.' && prefix.size() > best_len) {
      best_len = prefix.size();
      best = &cats;
    }
  }
  return best ? *best : std::set<std::string>{};
}

std::set<std::string> classify_callsite(const TaxonomyDB& db, const std::string& fqn) {
  return db.classify(fqn);
}

namespace {

class PatternMatcher {
public:
  PatternMatcher(const ModuleIR& ir, const ExtendedAssignmentGraph& eag,
                 const CompositeScript& script, const TaxonomyDB& db)
      : ir_(ir), eag_(eag), script_(script), db_(db) {}

  std::vector<PatternHit> run() {
    walk_block(ir_.body);
    return std::move(hits_);
  }

private:
  bool dataframe_typed(const NameExpr& name) const {
    for (const auto& v : eag_.values_at(name.id, name.line)) {
      if (v.kind == Value::Kind::ExternalInstance && v.fqn == kDataFrameFqn) {
        return true;
      }
    }
    return false;
  }

  void add_hit(int id, int line, std::set<std::string> cats) {
    if (!script_.map.contains(line)) {
      return;
    }
    // drop categories the loaded taxonomy does not know
    for (auto it = cats.begin(); it != cats.end();) {
      it = db_.taxonomy().has_sub(*it) ? std::next(it) : cats.erase(it);
    }
    if (cats.empty()) {
      return;
    }
    hits_.push_back({id, script_.map.location(line), std::move(cats)});
  }

  void match_assign(const AssignStmt& s) {
    if (s.targets.size() != 1) {
      return;
    }
    const Expr& target = *s.targets.front();

    // pattern 1: new column from a binary op over column accesses
    if (target.kind == Expr::Kind::Subscript) {
      const auto& sub = static_cast<const SubscriptExpr&>(target);
      if (sub.value->kind == Expr::Kind::Name && sub.index->kind == Expr::Kind::Str &&
          s.value->kind == Expr::Kind::BinOp) {
        const auto& base = static_cast<const NameExpr&>(*sub.value);
        const auto& bin = static_cast<const BinOpExpr&>(*s.value);
        const NameExpr* lhs = strict_column_base(*bin.lhs);
        const NameExpr* rhs = strict_column_base(*bin.rhs);
        if (lhs && rhs && dataframe_typed(base) && dataframe_typed(*lhs) &&
            dataframe_typed(*rhs)) {
          add_hit(1, s.line, {db_.feature_engineering_sub()});
          return;
        }
      }
    }

    // pattern 3: masked assignment to a column
    if (target.kind == Expr::Kind::Subscript) {
      const auto& sub = static_cast<const SubscriptExpr&>(target);
      const NameExpr* base = strict_column_base(*sub.value);
      if (base && contains_compare(*sub.index) && dataframe_typed(*base)) {
        add_hit(3, s.line, {"Feature Transformation", db_.data_preparation_sub()});
        return;
      }
    }

    // pattern 2: scalar assignment to a column
    if (const NameExpr* base = strict_column_base(target)) {
      if (is_scalar_literal(*s.value) && dataframe_typed(*base)) {
        add_hit(2, s.line, {"Feature Transformation", db_.data_preparation_sub()});
        return;
      }
    }

    // pattern 4: column-subset projection
    if (s.value->kind == Expr::Kind::Subscript) {
      const auto& sub = static_cast<const SubscriptExpr&>(*s.value);
      const NameExpr* base = column_access_base(*sub.value);
      if (base && sub.index->kind == Expr::Kind::List && dataframe_typed(*base)) {
        add_hit(4, s.line, {"Feature Selection"});
        return;
      }
    }
  }

  void match_expr_stmt(const ExprStmt& s) {
    // pattern 5: sliced print/display
    if (s.value->kind != Expr::Kind::Call) {
      return;
    }
    const auto& call = static_cast<const CallExpr&>(*s.value);
    if (call.func->kind != Expr::Kind::Name || call.args.empty()) {
      return;
    }
    const std::string& fn = static_cast<const NameExpr&>(*call.func).id;
    if (fn != "print" && fn != "display") {
      return;
    }
    const Expr& arg = *call.args.front().value;
    if (arg.kind != Expr::Kind::Subscript) {
      return;
    }
    const auto& sub = static_cast<const SubscriptExpr&>(arg);
    const NameExpr* base = column_access_base(*sub.value);
    if (base && sub.index->kind == Expr::Kind::Slice && dataframe_typed(*base)) {
      add_hit(5, s.line, {"Exploratory Data Analysis"});
    }
  }

  void walk_block(const Block& block) {
    for (const auto& stmt : block) {
      walk_stmt(*stmt);
    }
  }

  void walk_stmt(const Stmt& stmt) {
    switch (stmt.kind) {
    case Stmt::Kind::Assign:
      match_assign(static_cast<const AssignStmt&>(stmt));
      return;
    case Stmt::Kind::Expr:
      match_expr_stmt(static_cast<const ExprStmt&>(stmt));
      return;
    case Stmt::Kind::FunctionDef:
      walk_block(static_cast<const FunctionDefStmt&>(stmt).body);
      return;
    case Stmt::Kind::ClassDef:
      walk_block(static_cast<const ClassDefStmt&>(stmt).body);
      return;
    case Stmt::Kind::If: {
      const auto& s = static_cast<const IfStmt&>(stmt);
      walk_block(s.body);
      walk_block(s.orelse);
      return;
    }
    case Stmt::Kind::While: {
      const auto& s = static_cast<const WhileStmt&>(stmt);
      walk_block(s.body);
      walk_block(s.orelse);
      return;
    }
    case Stmt::Kind::For: {
      const auto& s = static_cast<const ForStmt&>(stmt);
      walk_block(s.body);
      walk_block(s.orelse);
      return;
    }
    case Stmt::Kind::Try: {
      const auto& s = static_cast<const TryStmt&>(stmt);
      walk_block(s.body);
      for (const auto& h : s.handlers) {
        walk_block(h.body);
      }
      walk_block(s.orelse);
      walk_block(s.finally);
      return;
    }
    case Stmt::Kind::With:
      walk_block(static_cast<const WithStmt&>(stmt).body);
      return;
    default:
      return;
    }
  }

  const ModuleIR& ir_;
  const ExtendedAssignmentGraph& eag_;
  const CompositeScript& script_;
  const TaxonomyDB& db_;
  std::vector<PatternHit> hits_;
};

} // namespace

std::vector<PatternHit> match_patterns(const ModuleIR& ir, const ExtendedAssignmentGraph& eag,
                                       const CompositeScript& script, const TaxonomyDB& db) {
  return PatternMatcher(ir, eag, script, db).run();
}

std::set<std::string> CellClassification::tops(int code_index, const Taxonomy& taxonomy) const {
  std::set<std::string> out;
  auto it = subs.find(code_index);
  if (it == subs.end()) {
    return out;
  }
  for (const auto& sub : it->second) {
    std::string top = taxonomy.parent(sub);
    if (!top.empty()) {
      out.insert(top);
    }
  }
  return out;
}

CellClassification classify_cell(const CallSiteReport& report,
                                 const std::vector<PatternHit>& hits, const TaxonomyDB& db,
                                 const std::set<int>& import_cells) {
  CellClassification out;
  for (const auto& [ci, lines] : report.cells()) {
    for (const auto& [line, fqns] : lines) {
      for (const auto& fqn : fqns) {
        std::set<std::string> cats = db.classify(fqn);
        out.subs[ci].insert(cats.begin(), cats.end());
      }
    }
  }
  for (const auto& hit : hits) {
    out.subs[hit.location.code_index].insert(hit.categories.begin(), hit.categories.end());
  }
  if (db.taxonomy().has_sub("Library Loading")) {
    for (int ci : import_cells) {
      out.subs[ci].insert("Library Loading");
    }
  }
  // drop empty cells created by unmatched fqns
  for (auto it = out.subs.begin(); it != out.subs.end();) {
    it = it->second.empty() ? out.subs.erase(it) : std::next(it);
  }
  return out;
}

std::set<int> cells_with_imports(const ModuleIR& ir, const CompositeScript& script) {
  std::set<int> cells;
  std::function<void(const Block&)> walk = [&](const Block& block) {
    for (const auto& stmt : block) {
      if (stmt->kind == Stmt::Kind::Import || stmt->kind == Stmt::Kind::ImportFrom) {
        if (script.map.contains(stmt->line)) {
          cells.insert(script.map.location(stmt->line).code_index);
        }
      } else if (stmt->kind == Stmt::Kind::If) {
        const auto& s = static_cast<const IfStmt&>(*stmt);
        walk(s.body);
        walk(s.orelse);
      } else if (stmt->kind == Stmt::Kind::Try) {
        const auto& s = static_cast<const TryStmt&>(*stmt);
        walk(s.body);
        for (const auto& h : s.handlers) {
          walk(h.body);
        }
        walk(s.orelse);
        walk(s.finally);
      } else if (stmt->kind == Stmt::Kind::FunctionDef) {
        walk(static_cast<const FunctionDefStmt&>(*stmt).body);
      }
    }
  };
  walk(ir.body);
  return cells;
}

} // namespace headergen
