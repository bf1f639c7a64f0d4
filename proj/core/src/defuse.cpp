#include "headergen/defuse.hpp"

#include <algorithm>
#include <functional>

#include "headergen/error.hpp"

namespace headergen {

std::optional<std::string> ImportTable::lookup(const ModuleIR& ir, int scope_id,
                                               const std::string& name) const {
  for (int s = scope_id;; s = ir.scope(s).parent) {
    auto it = aliases.find({s, name});
    if (it != aliases.end()) {
      return it->second;
    }
    if (s == 0) {
      break;
    }
  }
  return std::nullopt;
}

namespace {

class ImportCollector {
public:
  explicit ImportCollector(const ModuleIR& ir) : ir_(ir) {}

  ImportTable run() {
    walk(ir_.body, 0);
    return std::move(table_);
  }

private:
  void walk(const Block& block, int scope_id) {
    for (const auto& stmt : block) {
      switch (stmt->kind) {
      case Stmt::Kind::Import:
        for (const auto& item : static_cast<const ImportStmt&>(*stmt).items) {
          // `import a.b` binds `a` to module a; `import a.b as c` binds c
          // to the full path.
          if (item.alias == item.module.substr(0, item.module.find('.'))) {
            table_.aliases[{scope_id, item.alias}] = item.alias;
          } else {
            table_.aliases[{scope_id, item.alias}] = item.module;
          }
        }
        break;
      case Stmt::Kind::ImportFrom: {
        const auto& from = static_cast<const ImportFromStmt&>(*stmt);
        if (from.level > 0) {
          break; // relative imports have no resolvable package root here
        }
        if (from.star) {
          table_.star_imports.emplace_back(scope_id, from.module);
          break;
        }
        for (const auto& item : from.names) {
          table_.aliases[{scope_id, item.alias}] = from.module + "." + item.module;
        }
        break;
      }
      case Stmt::Kind::FunctionDef: {
        const auto& fn = static_cast<const FunctionDefStmt&>(*stmt);
        walk(fn.body, fn.scope_id);
        break;
      }
      case Stmt::Kind::ClassDef: {
        const auto& cls = static_cast<const ClassDefStmt&>(*stmt);
        walk(cls.body, cls.scope_id);
        break;
      }
      case Stmt::Kind::If: {
        const auto& s = static_cast<const IfStmt&>(*stmt);
        walk(s.body, scope_id);
        walk(s.orelse, scope_id);
        break;
      }
      case Stmt::Kind::For: {
        const auto& s = static_cast<const ForStmt&>(*stmt);
        walk(s.body, scope_id);
        walk(s.orelse, scope_id);
        break;
      }
      case Stmt::Kind::While: {
        const auto& s = static_cast<const WhileStmt&>(*stmt);
        walk(s.body, scope_id);
        walk(s.orelse, scope_id);
        break;
      }
      case Stmt::Kind::Try: {
        const auto& s = static_cast<const TryStmt&>(*stmt);
        walk(s.body, scope_id);
        for (const auto& h : s.handlers) {
          walk(h.body, scope_id);
        }
        walk(s.orelse, scope_id);
        walk(s.finally, scope_id);
        break;
      }
      case Stmt::Kind::With:
        walk(static_cast<const WithStmt&>(*stmt).body, scope_id);
        break;
      default:
        break;
      }
    }
  }

  const ModuleIR& ir_;
  ImportTable table_;
};

// ---------------------------------------------------------------------------

class DucBuilder {
public:
  explicit DucBuilder(const ModuleIR& ir) : ir_(ir) {}

  DefUseChains run() {
    walk_block(ir_.body, 0, 0);
    resolve_deferred();
    for (const auto& chain : duc_.chains) {
      for (int line : chain.use_lines) {
        duc_.use_index[{line, chain.name}].insert(chain.id);
      }
    }
    return std::move(duc_);
  }

private:
  using Env = std::map<std::pair<int, std::string>, int>; // (scope,name)->chain

  // Which scope owns a binding of `name` as seen from `scope_id`.
  // Returns -1 when no scope binds it (builtins / genuinely undefined).
  int binding_scope(int scope_id, const std::string& name) const {
    const Scope& s = ir_.scope(scope_id);
    if (s.globals.count(name)) {
      return 0;
    }
    for (int p = scope_id;; p = ir_.scope(p).parent) {
      const Scope& ps = ir_.scope(p);
      // class scopes are skipped for lookups from nested function scopes
      bool skip = ps.kind == Scope::Kind::Class && p != scope_id;
      if (!skip && ps.bindings.count(name)) {
        return p;
      }
      if (p == 0) {
        return -1;
      }
    }
  }

  int new_chain(int scope_id, const std::string& name, int line, DefKind kind,
                const void* node) {
    Chain c;
    c.id = static_cast<int>(duc_.chains.size());
    c.scope_id = scope_id;
    c.name = name;
    c.def_line = line;
    c.kind = kind;
    c.conditional = branch_depth_ > 0;
    auto it = env_.find({scope_id, name});
    c.prior_chain = it == env_.end() ? -1 : it->second;
    c.def_node = node;
    env_[{scope_id, name}] = c.id;
    duc_.def_by_node[{node, name}] = c.id;
    duc_.chains.push_back(std::move(c));
    return duc_.chains.back().id;
  }

  void define(int scope_id, const std::string& name, int line, DefKind kind,
              const void* node) {
    int target_scope = scope_id;
    const Scope& s = ir_.scope(scope_id);
    if (s.globals.count(name)) {
      target_scope = 0;
    } else if (s.nonlocals.count(name)) {
      for (int p = s.parent; p >= 0; p = ir_.scope(p).parent) {
        if (ir_.scope(p).bindings.count(name)) {
          target_scope = p;
          break;
        }
      }
    }
    new_chain(target_scope, name, line, kind, node);
  }

  void use(int scope_id, const std::string& name, int line) {
    int owner = binding_scope(scope_id, name);
    if (owner < 0) {
      return; // unbound; builtins fallback happens at callsite resolution
    }
    // A use inside a function body that refers to an enclosing scope sees
    // the value at call time; approximate with the last definition.
    for (int p = scope_id; p != owner && p >= 0; p = ir_.scope(p).parent) {
      auto k = ir_.scope(p).kind;
      if (k == Scope::Kind::Function || k == Scope::Kind::Lambda) {
        deferred_.push_back({owner, name, line});
        return;
      }
    }
    auto it = env_.find({owner, name});
    if (it != env_.end()) {
      duc_.chains[static_cast<size_t>(it->second)].use_lines.insert(line);
      return;
    }
    // use before any definition reached so far (loop back-edges): defer
    deferred_.push_back({owner, name, line});
  }

  void resolve_deferred() {
    for (const auto& [owner, name, line] : deferred_) {
      int last = -1;
      for (const auto& chain : duc_.chains) {
        if (chain.scope_id == owner && chain.name == name) {
          last = chain.id;
        }
      }
      if (last >= 0) {
        duc_.chains[static_cast<size_t>(last)].use_lines.insert(line);
      }
    }
  }

  void bind_target(const Expr& target, int scope_id, DefKind kind, const void* node) {
    switch (target.kind) {
    case Expr::Kind::Name:
      define(scope_id, static_cast<const NameExpr&>(target).id, target.line, kind, node);
      return;
    case Expr::Kind::Tuple:
    case Expr::Kind::List:
      for (const auto& el : static_cast<const SequenceExpr&>(target).elements) {
        bind_target(*el, scope_id, kind, node);
      }
      return;
    case Expr::Kind::Starred:
      bind_target(*static_cast<const StarredExpr&>(target).value, scope_id, kind, node);
      return;
    case Expr::Kind::Attribute:
      // obj.attr = v reads obj
      walk_expr(*static_cast<const AttributeExpr&>(target).value, scope_id);
      return;
    case Expr::Kind::Subscript: {
      const auto& sub = static_cast<const SubscriptExpr&>(target);
      walk_expr(*sub.value, scope_id);
      walk_expr(*sub.index, scope_id);
      return;
    }
    default:
      return;
    }
  }

  void walk_block(const Block& block, int scope_id, int depth) {
    for (const auto& stmt : block) {
      walk_stmt(*stmt, scope_id, depth);
    }
  }

  // Saves the environment, walks a conditional block, and returns names
  // (scope,name) defined inside it with their final chains.
  Env walk_branch(const Block& block, int scope_id) {
    Env saved = env_;
    ++branch_depth_;
    walk_block(block, scope_id, branch_depth_);
    --branch_depth_;
    Env result = env_;
    env_ = std::move(saved);
    return result;
  }

  // Joins branch environments. Branch envs are full snapshots taken from the
  // same base; when they disagree about a name, a synthetic phi chain unions
  // the possible definitions, so uses after the join see every branch.
  void merge_branches(const Stmt* node, const std::vector<Env>& branch_envs) {
    std::set<std::pair<int, std::string>> changed;
    for (const auto& benv : branch_envs) {
      for (const auto& [key, chain] : benv) {
        auto it = env_.find(key);
        if (it == env_.end() || it->second != chain) {
          changed.insert(key);
        }
      }
    }
    for (const auto& key : changed) {
      std::set<int> inputs;
      bool defined_everywhere = true;
      for (const auto& benv : branch_envs) {
        auto it = benv.find(key);
        if (it != benv.end()) {
          inputs.insert(it->second);
        } else {
          defined_everywhere = false;
        }
      }
      if (!defined_everywhere) {
        auto base = env_.find(key);
        if (base != env_.end()) {
          inputs.insert(base->second);
        }
      }
      if (inputs.empty()) {
        continue;
      }
      if (inputs.size() == 1) {
        env_[key] = *inputs.begin();
        continue;
      }
      Chain phi;
      phi.id = static_cast<int>(duc_.chains.size());
      phi.scope_id = key.first;
      phi.name = key.second;
      phi.def_line = node->line;
      phi.kind = DefKind::Phi;
      phi.conditional = branch_depth_ > 0;
      phi.phi_inputs.assign(inputs.begin(), inputs.end());
      phi.def_node = node;
      duc_.def_by_node[{node, key.second}] = phi.id;
      env_[key] = phi.id;
      duc_.chains.push_back(std::move(phi));
    }
  }

  void walk_stmt(const Stmt& stmt, int scope_id, int depth) {
    switch (stmt.kind) {
    case Stmt::Kind::Expr:
      walk_expr(*static_cast<const ExprStmt&>(stmt).value, scope_id);
      return;
    case Stmt::Kind::Assign: {
      const auto& s = static_cast<const AssignStmt&>(stmt);
      walk_expr(*s.value, scope_id);
      for (const auto& target : s.targets) {
        bind_target(*target, scope_id, DefKind::Assign, &stmt);
      }
      return;
    }
    case Stmt::Kind::AugAssign: {
      const auto& s = static_cast<const AugAssignStmt&>(stmt);
      walk_expr(*s.value, scope_id);
      // target is read, then redefined
      walk_expr(*s.target, scope_id);
      bind_target(*s.target, scope_id, DefKind::AugAssign, &stmt);
      return;
    }
    case Stmt::Kind::AnnAssign: {
      const auto& s = static_cast<const AnnAssignStmt&>(stmt);
      if (s.value) {
        walk_expr(*s.value, scope_id);
        bind_target(*s.target, scope_id, DefKind::AnnAssign, &stmt);
      }
      return;
    }
    case Stmt::Kind::Import: {
      const auto& s = static_cast<const ImportStmt&>(stmt);
      for (const auto& item : s.items) {
        define(scope_id, item.alias, stmt.line, DefKind::Import, &stmt);
      }
      return;
    }
    case Stmt::Kind::ImportFrom: {
      const auto& s = static_cast<const ImportFromStmt&>(stmt);
      for (const auto& item : s.names) {
        define(scope_id, item.alias, stmt.line, DefKind::Import, &stmt);
      }
      return;
    }
    case Stmt::Kind::FunctionDef: {
      const auto& fn = static_cast<const FunctionDefStmt&>(stmt);
      for (const auto& dec : fn.decorators) {
        walk_expr(*dec, scope_id);
      }
      for (const auto& p : fn.params) {
        if (p.default_value) {
          walk_expr(*p.default_value, scope_id);
        }
      }
      define(scope_id, fn.name, stmt.line, DefKind::FunctionDef, &stmt);
      for (const auto& p : fn.params) {
        if (!p.name.empty()) {
          define(fn.scope_id, p.name, stmt.line, DefKind::Param, &p);
        }
      }
      walk_block(fn.body, fn.scope_id, depth);
      // local chains of the function stay in env_ harmlessly; they are
      // keyed by the function scope and unreachable from outside
      return;
    }
    case Stmt::Kind::ClassDef: {
      const auto& cls = static_cast<const ClassDefStmt&>(stmt);
      for (const auto& dec : cls.decorators) {
        walk_expr(*dec, scope_id);
      }
      for (const auto& base : cls.bases) {
        walk_expr(*base, scope_id);
      }
      define(scope_id, cls.name, stmt.line, DefKind::ClassDef, &stmt);
      walk_block(cls.body, cls.scope_id, depth);
      return;
    }
    case Stmt::Kind::Return: {
      const auto& s = static_cast<const ReturnStmt&>(stmt);
      if (s.value) {
        walk_expr(*s.value, scope_id);
      }
      return;
    }
    case Stmt::Kind::If: {
      const auto& s = static_cast<const IfStmt&>(stmt);
      walk_expr(*s.test, scope_id);
      std::vector<Env> envs;
      envs.push_back(walk_branch(s.body, scope_id));
      envs.push_back(walk_branch(s.orelse, scope_id));
      merge_branches(&stmt, envs);
      return;
    }
    case Stmt::Kind::While: {
      const auto& s = static_cast<const WhileStmt&>(stmt);
      walk_expr(*s.test, scope_id);
      std::vector<Env> envs;
      envs.push_back(walk_branch(s.body, scope_id));
      envs.push_back(walk_branch(s.orelse, scope_id));
      merge_branches(&stmt, envs);
      return;
    }
    case Stmt::Kind::For: {
      const auto& s = static_cast<const ForStmt&>(stmt);
      walk_expr(*s.iter, scope_id);
      ++branch_depth_;
      bind_target(*s.target, scope_id, DefKind::LoopTarget, &stmt);
      --branch_depth_;
      std::vector<Env> envs;
      envs.push_back(walk_branch(s.body, scope_id));
      envs.push_back(walk_branch(s.orelse, scope_id));
      merge_branches(&stmt, envs);
      return;
    }
    case Stmt::Kind::Try: {
      const auto& s = static_cast<const TryStmt&>(stmt);
      std::vector<Env> envs;
      envs.push_back(walk_branch(s.body, scope_id));
      for (const auto& h : s.handlers) {
        Env saved = env_;
        ++branch_depth_;
        if (h.type) {
          walk_expr(*h.type, scope_id);
        }
        if (!h.name.empty()) {
          define(scope_id, h.name, h.line, DefKind::ExceptName, &h);
        }
        walk_block(h.body, scope_id, branch_depth_);
        --branch_depth_;
        envs.push_back(env_);
        env_ = std::move(saved);
      }
      merge_branches(&stmt, envs);
      walk_block(s.orelse, scope_id, depth);
      walk_block(s.finally, scope_id, depth);
      return;
    }
    case Stmt::Kind::With: {
      const auto& s = static_cast<const WithStmt&>(stmt);
      for (const auto& item : s.items) {
        walk_expr(*item.context, scope_id);
        if (item.target) {
          bind_target(*item.target, scope_id, DefKind::WithTarget, &item);
        }
      }
      walk_block(s.body, scope_id, depth);
      return;
    }
    case Stmt::Kind::Delete:
    case Stmt::Kind::Assert:
    case Stmt::Kind::Raise:
      for (const auto& v : static_cast<const ExprListStmt&>(stmt).values) {
        walk_expr(*v, scope_id);
      }
      return;
    default:
      return;
    }
  }

  void walk_expr(const Expr& expr, int scope_id) {
    switch (expr.kind) {
    case Expr::Kind::Name:
      use(scope_id, static_cast<const NameExpr&>(expr).id, expr.line);
      return;
    case Expr::Kind::Attribute:
      walk_expr(*static_cast<const AttributeExpr&>(expr).value, scope_id);
      return;
    case Expr::Kind::Subscript: {
      const auto& s = static_cast<const SubscriptExpr&>(expr);
      walk_expr(*s.value, scope_id);
      walk_expr(*s.index, scope_id);
      return;
    }
    case Expr::Kind::Call: {
      const auto& c = static_cast<const CallExpr&>(expr);
      walk_expr(*c.func, scope_id);
      for (const auto& arg : c.args) {
        walk_expr(*arg.value, scope_id);
      }
      return;
    }
    case Expr::Kind::Tuple:
    case Expr::Kind::List:
    case Expr::Kind::Set:
      for (const auto& el : static_cast<const SequenceExpr&>(expr).elements) {
        walk_expr(*el, scope_id);
      }
      return;
    case Expr::Kind::Dict: {
      const auto& d = static_cast<const DictExpr&>(expr);
      for (const auto& k : d.keys) {
        if (k) {
          walk_expr(*k, scope_id);
        }
      }
      for (const auto& v : d.values) {
        walk_expr(*v, scope_id);
      }
      return;
    }
    case Expr::Kind::BinOp: {
      const auto& b = static_cast<const BinOpExpr&>(expr);
      if (b.op == ":=") {
        walk_expr(*b.rhs, scope_id);
        define(scope_id, static_cast<const NameExpr&>(*b.lhs).id, b.line,
               DefKind::Walrus, &b);
        return;
      }
      walk_expr(*b.lhs, scope_id);
      walk_expr(*b.rhs, scope_id);
      return;
    }
    case Expr::Kind::UnaryOp: {
      const auto& u = static_cast<const UnaryOpExpr&>(expr);
      if (u.operand) {
        walk_expr(*u.operand, scope_id);
      }
      return;
    }
    case Expr::Kind::BoolOp:
      for (const auto& v : static_cast<const BoolOpExpr&>(expr).values) {
        walk_expr(*v, scope_id);
      }
      return;
    case Expr::Kind::Compare: {
      const auto& c = static_cast<const CompareExpr&>(expr);
      walk_expr(*c.first, scope_id);
      for (const auto& r : c.rest) {
        walk_expr(*r, scope_id);
      }
      return;
    }
    case Expr::Kind::IfExp: {
      const auto& i = static_cast<const IfExpExpr&>(expr);
      walk_expr(*i.body, scope_id);
      walk_expr(*i.test, scope_id);
      walk_expr(*i.orelse, scope_id);
      return;
    }
    case Expr::Kind::Lambda: {
      const auto& lam = static_cast<const LambdaExpr&>(expr);
      for (const auto& p : lam.params) {
        if (p.default_value) {
          walk_expr(*p.default_value, scope_id);
        }
        if (!p.name.empty()) {
          define(lam.scope_id, p.name, lam.line, DefKind::Param, &p);
        }
      }
      walk_expr(*lam.body, lam.scope_id);
      return;
    }
    case Expr::Kind::Comprehension: {
      const auto& comp = static_cast<const ComprehensionExpr&>(expr);
      for (const auto& clause : comp.clauses) {
        walk_expr(*clause.iter, scope_id); // first iterable evaluates outside
        bind_target(*clause.target, comp.scope_id, DefKind::CompTarget, &clause);
        for (const auto& cond : clause.conditions) {
          walk_expr(*cond, comp.scope_id);
        }
      }
      walk_expr(*comp.element, comp.scope_id);
      if (comp.value) {
        walk_expr(*comp.value, comp.scope_id);
      }
      return;
    }
    case Expr::Kind::Starred:
      walk_expr(*static_cast<const StarredExpr&>(expr).value, scope_id);
      return;
    case Expr::Kind::Slice: {
      const auto& s = static_cast<const SliceExpr&>(expr);
      if (s.lower) {
        walk_expr(*s.lower, scope_id);
      }
      if (s.upper) {
        walk_expr(*s.upper, scope_id);
      }
      if (s.step) {
        walk_expr(*s.step, scope_id);
      }
      return;
    }
    default:
      return;
    }
  }

  struct Deferred {
    int owner_scope;
    std::string name;
    int line;
  };

  const ModuleIR& ir_;
  DefUseChains duc_;
  Env env_;
  std::vector<Deferred> deferred_;
  int branch_depth_ = 0;
};

} // namespace

std::optional<int> DefUseChains::governing_def(const std::string& name, int line) const {
  int best = -1;
  int best_line = -1;
  for (const auto& chain : chains) {
    if (chain.name == name && chain.def_line <= line && chain.def_line >= best_line) {
      best = chain.id;
      best_line = chain.def_line;
    }
  }
  if (best < 0) {
    return std::nullopt;
  }
  return best;
}

ImportTable build_import_table(const ModuleIR& ir) {
  return ImportCollector(ir).run();
}

DefUseChains build_duc(const ModuleIR& ir) {
  return DucBuilder(ir).run();
}

LocationMap location_map(const DefUseChains& duc) {
  LocationMap map;
  for (const auto& [key, chain_ids] : duc.use_index) {
    for (int id : chain_ids) {
      map.at[key.first].insert({key.second, id});
    }
  }
  return map;
}

} // namespace headergen
