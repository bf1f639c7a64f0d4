#include "headergen/callsites.hpp"

#include <algorithm>
#include <functional>

#include "headergen/error.hpp"

namespace headergen {

namespace {

class CallCollector {
public:
  CallCollector(const ModuleIR& ir, const ExtendedAssignmentGraph& eag,
                const CompositeScript& script)
      : ir_(ir), eag_(eag), script_(script) {}

  CallSiteReport run() {
    walk_block(ir_.body, -1);
    return std::move(report_);
  }

private:
  void add_call(const CallExpr& call, int fn_sym) {
    if (!script_.map.contains(call.call_line)) {
      return;
    }
    CallSite site;
    site.location = script_.map.location(call.call_line);
    site.enclosing_symbol = fn_sym;

    for (const auto& v : eag_.eval(*call.func)) {
      switch (v.kind) {
      case Value::Kind::UserFunction:
      case Value::Kind::UserBoundMethod:
        site.fqns.insert(eag_.symbols()[static_cast<size_t>(v.id)].fqn);
        site.user_callees.push_back(v.id);
        break;
      case Value::Kind::UserClass: {
        site.fqns.insert(eag_.symbols()[static_cast<size_t>(v.id)].fqn);
        site.user_callees.push_back(v.id);
        break;
      }
      case Value::Kind::ExternalFunction:
      case Value::Kind::ExternalClass:
        site.fqns.insert(v.fqn);
        break;
      case Value::Kind::BoundMethod:
        site.fqns.insert(v.fqn + "." + v.member);
        break;
      default:
        break;
      }
    }
    if (site.fqns.empty()) {
      site.fqns.insert(kUnresolved);
    }
    // first argument snippet per (cell, fqn) feeds the index renderer
    if (call.end > call.func->end && call.func->end < script_.text.size()) {
      std::string args = script_.text.substr(call.func->end, call.end - call.func->end);
      for (const auto& fqn : site.fqns) {
        report_.call_args.emplace(std::make_pair(site.location.code_index, fqn), args);
      }
    }
    report_.sites.push_back(std::move(site));
  }

  void walk_block(const Block& block, int fn_sym) {
    for (const auto& stmt : block) {
      walk_stmt(*stmt, fn_sym);
    }
  }

  void walk_stmt(const Stmt& stmt, int fn_sym) {
    switch (stmt.kind) {
    case Stmt::Kind::Expr:
      walk_expr(*static_cast<const ExprStmt&>(stmt).value, fn_sym);
      return;
    case Stmt::Kind::Assign: {
      const auto& s = static_cast<const AssignStmt&>(stmt);
      walk_expr(*s.value, fn_sym);
      for (const auto& t : s.targets) {
        walk_expr(*t, fn_sym);
      }
      return;
    }
    case Stmt::Kind::AugAssign: {
      const auto& s = static_cast<const AugAssignStmt&>(stmt);
      walk_expr(*s.value, fn_sym);
      walk_expr(*s.target, fn_sym);
      return;
    }
    case Stmt::Kind::AnnAssign: {
      const auto& s = static_cast<const AnnAssignStmt&>(stmt);
      if (s.value) {
        walk_expr(*s.value, fn_sym);
      }
      return;
    }
    case Stmt::Kind::FunctionDef: {
      const auto& fn = static_cast<const FunctionDefStmt&>(stmt);
      const UserSymbol* sym = eag_.symbol_of(fn);
      for (const auto& p : fn.params) {
        if (p.default_value) {
          walk_expr(*p.default_value, fn_sym);
        }
      }
      // decorator expressions are parsed but not analyzed as callsites
      walk_block(fn.body, sym ? sym->id : fn_sym);
      return;
    }
    case Stmt::Kind::ClassDef: {
      const auto& cls = static_cast<const ClassDefStmt&>(stmt);
      for (const auto& base : cls.bases) {
        walk_expr(*base, fn_sym);
      }
      walk_block(cls.body, fn_sym);
      return;
    }
    case Stmt::Kind::Return: {
      const auto& s = static_cast<const ReturnStmt&>(stmt);
      if (s.value) {
        walk_expr(*s.value, fn_sym);
      }
      return;
    }
    case Stmt::Kind::If: {
      const auto& s = static_cast<const IfStmt&>(stmt);
      walk_expr(*s.test, fn_sym);
      walk_block(s.body, fn_sym);
      walk_block(s.orelse, fn_sym);
      return;
    }
    case Stmt::Kind::While: {
      const auto& s = static_cast<const WhileStmt&>(stmt);
      walk_expr(*s.test, fn_sym);
      walk_block(s.body, fn_sym);
      walk_block(s.orelse, fn_sym);
      return;
    }
    case Stmt::Kind::For: {
      const auto& s = static_cast<const ForStmt&>(stmt);
      walk_expr(*s.iter, fn_sym);
      walk_block(s.body, fn_sym);
      walk_block(s.orelse, fn_sym);
      return;
    }
    case Stmt::Kind::Try: {
      const auto& s = static_cast<const TryStmt&>(stmt);
      walk_block(s.body, fn_sym);
      for (const auto& h : s.handlers) {
        if (h.type) {
          walk_expr(*h.type, fn_sym);
        }
        walk_block(h.body, fn_sym);
      }
      walk_block(s.orelse, fn_sym);
      walk_block(s.finally, fn_sym);
      return;
    }
    case Stmt::Kind::With: {
      const auto& s = static_cast<const WithStmt&>(stmt);
      for (const auto& item : s.items) {
        walk_expr(*item.context, fn_sym);
      }
      walk_block(s.body, fn_sym);
      return;
    }
    case Stmt::Kind::Delete:
    case Stmt::Kind::Assert:
    case Stmt::Kind::Raise:
      for (const auto& v : static_cast<const ExprListStmt&>(stmt).values) {
        walk_expr(*v, fn_sym);
      }
      return;
    default:
      return;
    }
  }

  void walk_expr(const Expr& expr, int fn_sym) {
    switch (expr.kind) {
    case Expr::Kind::Call: {
      const auto& c = static_cast<const CallExpr&>(expr);
      walk_expr(*c.func, fn_sym);
      for (const auto& arg : c.args) {
        walk_expr(*arg.value, fn_sym);
      }
      add_call(c, fn_sym);
      return;
    }
    case Expr::Kind::Attribute:
      walk_expr(*static_cast<const AttributeExpr&>(expr).value, fn_sym);
      return;
    case Expr::Kind::Subscript: {
      const auto& s = static_cast<const SubscriptExpr&>(expr);
      walk_expr(*s.value, fn_sym);
      walk_expr(*s.index, fn_sym);
      return;
    }
    case Expr::Kind::Tuple:
    case Expr::Kind::List:
    case Expr::Kind::Set:
      for (const auto& el : static_cast<const SequenceExpr&>(expr).elements) {
        walk_expr(*el, fn_sym);
      }
      return;
    case Expr::Kind::Dict: {
      const auto& d = static_cast<const DictExpr&>(expr);
      for (const auto& k : d.keys) {
        if (k) {
          walk_expr(*k, fn_sym);
        }
      }
      for (const auto& v : d.values) {
        walk_expr(*v, fn_sym);
      }
      return;
    }
    case Expr::Kind::BinOp: {
      const auto& b = static_cast<const BinOpExpr&>(expr);
      walk_expr(*b.lhs, fn_sym);
      walk_expr(*b.rhs, fn_sym);
      return;
    }
    case Expr::Kind::UnaryOp: {
      const auto& u = static_cast<const UnaryOpExpr&>(expr);
      if (u.operand) {
        walk_expr(*u.operand, fn_sym);
      }
      return;
    }
    case Expr::Kind::BoolOp:
      for (const auto& v : static_cast<const BoolOpExpr&>(expr).values) {
        walk_expr(*v, fn_sym);
      }
      return;
    case Expr::Kind::Compare: {
      const auto& c = static_cast<const CompareExpr&>(expr);
      walk_expr(*c.first, fn_sym);
      for (const auto& r : c.rest) {
        walk_expr(*r, fn_sym);
      }
      return;
    }
    case Expr::Kind::IfExp: {
      const auto& i = static_cast<const IfExpExpr&>(expr);
      walk_expr(*i.body, fn_sym);
      walk_expr(*i.test, fn_sym);
      walk_expr(*i.orelse, fn_sym);
      return;
    }
    case Expr::Kind::Lambda: {
      const auto& lam = static_cast<const LambdaExpr&>(expr);
      int lam_sym = fn_sym;
      for (const auto& sym : eag_.symbols()) {
        if (sym.lambda == &lam) {
          lam_sym = sym.id;
          break;
        }
      }
      for (const auto& p : lam.params) {
        if (p.default_value) {
          walk_expr(*p.default_value, fn_sym);
        }
      }
      walk_expr(*lam.body, lam_sym);
      return;
    }
    case Expr::Kind::Comprehension: {
      const auto& comp = static_cast<const ComprehensionExpr&>(expr);
      for (const auto& clause : comp.clauses) {
        walk_expr(*clause.iter, fn_sym);
        for (const auto& cond : clause.conditions) {
          walk_expr(*cond, fn_sym);
        }
      }
      walk_expr(*comp.element, fn_sym);
      if (comp.value) {
        walk_expr(*comp.value, fn_sym);
      }
      return;
    }
    case Expr::Kind::Starred:
      walk_expr(*static_cast<const StarredExpr&>(expr).value, fn_sym);
      return;
    case Expr::Kind::Slice: {
      const auto& s = static_cast<const SliceExpr&>(expr);
      if (s.lower) {
        walk_expr(*s.lower, fn_sym);
      }
      if (s.upper) {
        walk_expr(*s.upper, fn_sym);
      }
      if (s.step) {
        walk_expr(*s.step, fn_sym);
      }
      return;
    }
    default:
      return;
    }
  }

  const ModuleIR& ir_;
  const ExtendedAssignmentGraph& eag_;
  const CompositeScript& script_;
  CallSiteReport report_;
};

} // namespace

std::map<int, std::map<int, std::set<std::string>>> CallSiteReport::cells() const {
  std::map<int, std::map<int, std::set<std::string>>> out;
  for (const auto& site : sites) {
    auto& line_fqns = out[site.location.code_index][site.location.cell_line];
    line_fqns.insert(site.fqns.begin(), site.fqns.end());
  }
  return out;
}

Json CallSiteReport::to_json() const {
  Json doc;
  Json cells_json = Json::object();
  for (const auto& [ci, lines] : cells()) {
    Json cell = Json::object();
    for (const auto& [line, fqns] : lines) {
      cell[std::to_string(line)] = std::vector<std::string>(fqns.begin(), fqns.end());
    }
    cells_json[std::to_string(ci)] = std::move(cell);
  }
  doc["cells"] = std::move(cells_json);
  return doc;
}

CallSiteReport CallSiteReport::from_json(const Json& doc, const std::string& context) {
  if (!doc.is_object() || !doc.contains("cells") || !doc["cells"].is_object()) {
    fail(ErrorKind::TruthFormat, context + ": expected {\"cells\": {...}}");
  }
  CallSiteReport report;
  for (const auto& [ci_str, lines] : doc["cells"].items()) {
    if (!lines.is_object()) {
      fail(ErrorKind::TruthFormat, context + ": cell " + ci_str + " must map lines to fqn lists");
    }
    int ci = 0;
    try {
      ci = std::stoi(ci_str);
    } catch (...) {
      fail(ErrorKind::TruthFormat, context + ": non-numeric cell index \"" + ci_str + "\"");
    }
    for (const auto& [line_str, fqns] : lines.items()) {
      int line = 0;
      try {
        line = std::stoi(line_str);
      } catch (...) {
        fail(ErrorKind::TruthFormat, context + ": non-numeric line \"" + line_str + "\"");
      }
      if (!fqns.is_array()) {
        fail(ErrorKind::TruthFormat, context + ": fqns must be an array");
      }
      CallSite site;
      site.location = {ci, line};
      for (const auto& fqn : fqns) {
        if (!fqn.is_string()) {
          fail(ErrorKind::TruthFormat, context + ": fqn entries must be strings");
        }
        site.fqns.insert(fqn.get<std::string>());
      }
      if (!site.fqns.empty()) {
        report.sites.push_back(std::move(site));
      }
    }
  }
  return report;
}

CallSiteReport extract_callsites(const ModuleIR& ir, const ExtendedAssignmentGraph& eag,
                                 const CompositeScript& script) {
  return CallCollector(ir, eag, script).run();
}

CallSiteReport attribute_transitive(const CallSiteReport& report,
                                    const ExtendedAssignmentGraph& eag) {
  // callsites per defining function body
  std::map<int, std::vector<const CallSite*>> body_sites;
  for (const auto& site : report.sites) {
    if (site.origin == CallSite::Origin::Direct && site.enclosing_symbol >= 0) {
      body_sites[site.enclosing_symbol].push_back(&site);
    }
  }

  // collects every fqn charged when `roots` are invoked: the body callsites
  // of each reachable user function (cycle-safe reachability walk)
  auto closure_fqns = [&](const std::vector<int>& roots) {
    std::set<std::string> fqns;
    std::set<int> visited;
    std::vector<int> stack(roots.begin(), roots.end());
    while (!stack.empty()) {
      int sym = stack.back();
      stack.pop_back();
      if (!visited.insert(sym).second) {
        continue;
      }
      auto it = body_sites.find(sym);
      if (it == body_sites.end()) {
        continue;
      }
      for (const CallSite* site : it->second) {
        fqns.insert(site->fqns.begin(), site->fqns.end());
        for (int callee : site->user_callees) {
          stack.push_back(callee);
        }
      }
    }
    return fqns;
  };

  CallSiteReport out = report;
  for (const auto& site : report.sites) {
    if (site.enclosing_symbol != -1 || site.user_callees.empty()) {
      continue;
    }
    std::set<std::string> gained = closure_fqns(site.user_callees);
    gained.erase(kUnresolved);
    if (gained.empty()) {
      continue;
    }
    CallSite transitive;
    transitive.location = site.location;
    transitive.fqns = std::move(gained);
    transitive.origin = CallSite::Origin::Transitive;
    out.sites.push_back(std::move(transitive));
  }
  return out;
}

PrecisionRecall score(const CallSiteReport& found, const CallSiteReport& truth) {
  auto pair_set = [](const CallSiteReport& report, bool drop_unresolved) {
    std::set<std::tuple<int, int, std::string>> pairs;
    for (const auto& [ci, lines] : report.cells()) {
      for (const auto& [line, fqns] : lines) {
        for (const auto& fqn : fqns) {
          if (drop_unresolved && fqn == kUnresolved) {
            continue;
          }
          pairs.insert({ci, line, fqn});
        }
      }
    }
    return pairs;
  };

  const auto found_pairs = pair_set(found, true);
  const auto truth_pairs = pair_set(truth, true);

  PrecisionRecall pr;
  for (const auto& p : found_pairs) {
    if (truth_pairs.count(p)) {
      ++pr.tp;
    } else {
      ++pr.fp;
    }
  }
  for (const auto& p : truth_pairs) {
    if (!found_pairs.count(p)) {
      ++pr.fn;
    }
  }
  pr.precision = (pr.tp + pr.fp) == 0 ? 1.0 : static_cast<double>(pr.tp) / (pr.tp + pr.fp);
  pr.recall = (pr.tp + pr.fn) == 0 ? 1.0 : static_cast<double>(pr.tp) / (pr.tp + pr.fn);
  return pr;
}

Json PrecisionRecall::to_json() const {
  Json doc;
  doc["precision"] = precision;
  doc["recall"] = recall;
  doc["tp"] = tp;
  doc["fp"] = fp;
  doc["fn"] = fn;
  return doc;
}

} // namespace headergen
