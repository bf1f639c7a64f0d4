#include "headergen/eag.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "headergen/error.hpp"

namespace headergen {

namespace {

Value user_fn(int sym) { return {Value::Kind::UserFunction, "", "", sym}; }
Value user_cls(int sym) { return {Value::Kind::UserClass, "", "", sym}; }
Value user_inst(int sym) { return {Value::Kind::UserInstance, "", "", sym}; }
Value user_bound(int method_sym, int class_sym) {
  return {Value::Kind::UserBoundMethod, "", "", method_sym, class_sym};
}
Value ext_fn(std::string fqn) { return {Value::Kind::ExternalFunction, std::move(fqn)}; }
Value ext_cls(std::string fqn) { return {Value::Kind::ExternalClass, std::move(fqn)}; }
Value ext_inst(std::string fqn) { return {Value::Kind::ExternalInstance, std::move(fqn)}; }
Value bound(std::string cls, std::string member) {
  return {Value::Kind::BoundMethod, std::move(cls), std::move(member)};
}
Value module_val(std::string path) { return {Value::Kind::Module, std::move(path)}; }
Value container_val(int id) { return {Value::Kind::Container, "", "", id}; }

bool grow(ValueSet& dst, const ValueSet& src) {
  bool changed = false;
  for (const auto& v : src) {
    changed |= dst.insert(v).second;
  }
  return changed;
}

int dot_count(const std::string& s) {
  return static_cast<int>(std::count(s.begin(), s.end(), '.'));
}

constexpr int kMaxEvalDepth = 32;

} // namespace

// ---------------------------------------------------------------------------

class EagBuilder {
public:
  EagBuilder(const ModuleIR& ir, const DefUseChains& duc, const ImportTable& imports,
             const TypeStubDB& stubs, ExtendedAssignmentGraph& eag)
      : ir_(ir), duc_(duc), imports_(imports), stubs_(stubs), eag_(eag) {}

  void run() {
    eag_.ir = &ir_;
    eag_.duc = &duc_;
    eag_.imports = &imports_;
    eag_.stubs = &stubs_;
    eag_.chain_values_.assign(duc_.chains.size(), ValueSet{});

    collect_symbols_block(ir_.body, 0);
    collect_class_namespaces();

    for (int round = 0; round < 64; ++round) {
      changed_ = false;
      walk_block(ir_.body, -1);
      sync_generators();
      if (!changed_) {
        break;
      }
    }
  }

  // expression evaluation against the current state; `mutate` enables
  // param binding / container growth / yield collection
  ValueSet eval(const Expr& expr, int fn_sym, bool mutate, int depth = 0);

private:
  friend class ExtendedAssignmentGraph;

  // --- symbol discovery ----------------------------------------------------

  int add_symbol(UserSymbol sym, const void* node) {
    sym.id = static_cast<int>(eag_.symbols_.size());
    eag_.symbols_.push_back(sym);
    eag_.returns_.emplace_back();
    eag_.yields_.emplace_back();
    eag_.symbol_by_node_[node] = sym.id;
    return sym.id;
  }

  int container_for(const void* node) {
    auto it = eag_.container_by_node_.find(node);
    if (it != eag_.container_by_node_.end()) {
      return it->second;
    }
    int id = static_cast<int>(eag_.containers_.size());
    eag_.containers_.emplace_back();
    eag_.container_by_node_[node] = id;
    return id;
  }

  static bool block_has_yield(const Block& block);
  static bool expr_has_yield(const Expr& expr);

  void collect_symbols_block(const Block& block, int scope_id) {
    for (const auto& stmt : block) {
      collect_symbols_stmt(*stmt, scope_id);
    }
  }

  void collect_symbols_stmt(const Stmt& stmt, int scope_id) {
    switch (stmt.kind) {
    case Stmt::Kind::FunctionDef: {
      const auto& fn = static_cast<const FunctionDefStmt&>(stmt);
      UserSymbol sym;
      sym.kind = UserSymbol::Kind::Function;
      sym.fqn = ir_.scope_path(fn.scope_id);
      sym.body_scope = fn.scope_id;
      sym.fn = &fn;
      sym.is_generator = block_has_yield(fn.body);
      int id = add_symbol(sym, &fn);
      if (eag_.symbols_[static_cast<size_t>(id)].is_generator) {
        eag_.generator_container_[id] = container_for(&fn);
      }
      for (const auto& p : fn.params) {
        if (p.default_value) {
          collect_symbols_expr(*p.default_value, scope_id);
        }
      }
      for (const auto& dec : fn.decorators) {
        collect_symbols_expr(*dec, scope_id);
      }
      collect_symbols_block(fn.body, fn.scope_id);
      return;
    }
    case Stmt::Kind::ClassDef: {
      const auto& cls = static_cast<const ClassDefStmt&>(stmt);
      UserSymbol sym;
      sym.kind = UserSymbol::Kind::Class;
      sym.fqn = ir_.scope_path(cls.scope_id);
      sym.body_scope = cls.scope_id;
      sym.cls = &cls;
      add_symbol(sym, &cls);
      for (const auto& base : cls.bases) {
        collect_symbols_expr(*base, scope_id);
      }
      collect_symbols_block(cls.body, cls.scope_id);
      return;
    }
    case Stmt::Kind::Expr:
      collect_symbols_expr(*static_cast<const ExprStmt&>(stmt).value, scope_id);
      return;
    case Stmt::Kind::Assign: {
      const auto& s = static_cast<const AssignStmt&>(stmt);
      collect_symbols_expr(*s.value, scope_id);
      for (const auto& t : s.targets) {
        collect_symbols_expr(*t, scope_id);
      }
      return;
    }
    case Stmt::Kind::AugAssign:
      collect_symbols_expr(*static_cast<const AugAssignStmt&>(stmt).value, scope_id);
      return;
    case Stmt::Kind::AnnAssign: {
      const auto& s = static_cast<const AnnAssignStmt&>(stmt);
      if (s.value) {
        collect_symbols_expr(*s.value, scope_id);
      }
      return;
    }
    case Stmt::Kind::Return: {
      const auto& s = static_cast<const ReturnStmt&>(stmt);
      if (s.value) {
        collect_symbols_expr(*s.value, scope_id);
      }
      return;
    }
    case Stmt::Kind::If: {
      const auto& s = static_cast<const IfStmt&>(stmt);
      collect_symbols_expr(*s.test, scope_id);
      collect_symbols_block(s.body, scope_id);
      collect_symbols_block(s.orelse, scope_id);
      return;
    }
    case Stmt::Kind::While: {
      const auto& s = static_cast<const WhileStmt&>(stmt);
      collect_symbols_expr(*s.test, scope_id);
      collect_symbols_block(s.body, scope_id);
      collect_symbols_block(s.orelse, scope_id);
      return;
    }
    case Stmt::Kind::For: {
      const auto& s = static_cast<const ForStmt&>(stmt);
      collect_symbols_expr(*s.iter, scope_id);
      collect_symbols_block(s.body, scope_id);
      collect_symbols_block(s.orelse, scope_id);
      return;
    }
    case Stmt::Kind::Try: {
      const auto& s = static_cast<const TryStmt&>(stmt);
      collect_symbols_block(s.body, scope_id);
      for (const auto& h : s.handlers) {
        if (h.type) {
          collect_symbols_expr(*h.type, scope_id);
        }
        collect_symbols_block(h.body, scope_id);
      }
      collect_symbols_block(s.orelse, scope_id);
      collect_symbols_block(s.finally, scope_id);
      return;
    }
    case Stmt::Kind::With: {
      const auto& s = static_cast<const WithStmt&>(stmt);
      for (const auto& item : s.items) {
        collect_symbols_expr(*item.context, scope_id);
      }
      collect_symbols_block(s.body, scope_id);
      return;
    }
    case Stmt::Kind::Delete:
    case Stmt::Kind::Assert:
    case Stmt::Kind::Raise:
      for (const auto& v : static_cast<const ExprListStmt&>(stmt).values) {
        collect_symbols_expr(*v, scope_id);
      }
      return;
    default:
      return;
    }
  }

  void collect_symbols_expr(const Expr& expr, int scope_id) {
    switch (expr.kind) {
    case Expr::Kind::Lambda: {
      const auto& lam = static_cast<const LambdaExpr&>(expr);
      UserSymbol sym;
      sym.kind = UserSymbol::Kind::Lambda;
      sym.fqn = ir_.scope_path(lam.scope_id);
      sym.body_scope = lam.scope_id;
      sym.lambda = &lam;
      add_symbol(sym, &lam);
      for (const auto& p : lam.params) {
        if (p.default_value) {
          collect_symbols_expr(*p.default_value, scope_id);
        }
      }
      collect_symbols_expr(*lam.body, lam.scope_id);
      return;
    }
    case Expr::Kind::Comprehension: {
      const auto& comp = static_cast<const ComprehensionExpr&>(expr);
      container_for(&comp);
      for (const auto& clause : comp.clauses) {
        collect_symbols_expr(*clause.iter, scope_id);
        for (const auto& cond : clause.conditions) {
          collect_symbols_expr(*cond, comp.scope_id);
        }
      }
      collect_symbols_expr(*comp.element, comp.scope_id);
      if (comp.value) {
        collect_symbols_expr(*comp.value, comp.scope_id);
      }
      return;
    }
    case Expr::Kind::Attribute:
      collect_symbols_expr(*static_cast<const AttributeExpr&>(expr).value, scope_id);
      return;
    case Expr::Kind::Subscript: {
      const auto& s = static_cast<const SubscriptExpr&>(expr);
      collect_symbols_expr(*s.value, scope_id);
      collect_symbols_expr(*s.index, scope_id);
      return;
    }
    case Expr::Kind::Call: {
      const auto& c = static_cast<const CallExpr&>(expr);
      collect_symbols_expr(*c.func, scope_id);
      for (const auto& arg : c.args) {
        collect_symbols_expr(*arg.value, scope_id);
      }
      return;
    }
    case Expr::Kind::Tuple:
    case Expr::Kind::List:
    case Expr::Kind::Set: {
      const auto& seq = static_cast<const SequenceExpr&>(expr);
      container_for(&seq);
      for (const auto& el : seq.elements) {
        collect_symbols_expr(*el, scope_id);
      }
      return;
    }
    case Expr::Kind::Dict: {
      const auto& d = static_cast<const DictExpr&>(expr);
      container_for(&d);
      for (const auto& k : d.keys) {
        if (k) {
          collect_symbols_expr(*k, scope_id);
        }
      }
      for (const auto& v : d.values) {
        collect_symbols_expr(*v, scope_id);
      }
      return;
    }
    case Expr::Kind::BinOp: {
      const auto& b = static_cast<const BinOpExpr&>(expr);
      collect_symbols_expr(*b.lhs, scope_id);
      collect_symbols_expr(*b.rhs, scope_id);
      return;
    }
    case Expr::Kind::UnaryOp: {
      const auto& u = static_cast<const UnaryOpExpr&>(expr);
      if (u.operand) {
        collect_symbols_expr(*u.operand, scope_id);
      }
      return;
    }
    case Expr::Kind::BoolOp:
      for (const auto& v : static_cast<const BoolOpExpr&>(expr).values) {
        collect_symbols_expr(*v, scope_id);
      }
      return;
    case Expr::Kind::Compare: {
      const auto& c = static_cast<const CompareExpr&>(expr);
      collect_symbols_expr(*c.first, scope_id);
      for (const auto& r : c.rest) {
        collect_symbols_expr(*r, scope_id);
      }
      return;
    }
    case Expr::Kind::IfExp: {
      const auto& i = static_cast<const IfExpExpr&>(expr);
      collect_symbols_expr(*i.body, scope_id);
      collect_symbols_expr(*i.test, scope_id);
      collect_symbols_expr(*i.orelse, scope_id);
      return;
    }
    case Expr::Kind::Starred:
      collect_symbols_expr(*static_cast<const StarredExpr&>(expr).value, scope_id);
      return;
    case Expr::Kind::Slice: {
      const auto& s = static_cast<const SliceExpr&>(expr);
      if (s.lower) {
        collect_symbols_expr(*s.lower, scope_id);
      }
      if (s.upper) {
        collect_symbols_expr(*s.upper, scope_id);
      }
      if (s.step) {
        collect_symbols_expr(*s.step, scope_id);
      }
      return;
    }
    default:
      return;
    }
  }

  void collect_class_namespaces() {
    std::map<int, int> scope_to_class;
    for (const auto& sym : eag_.symbols_) {
      if (sym.kind == UserSymbol::Kind::Class) {
        scope_to_class[sym.body_scope] = sym.id;
      }
    }
    for (const auto& chain : duc_.chains) {
      auto it = scope_to_class.find(chain.scope_id);
      if (it == scope_to_class.end()) {
        continue;
      }
      auto key = std::make_pair(it->second, chain.name);
      auto existing = eag_.class_ns_.find(key);
      if (existing == eag_.class_ns_.end() || existing->second < chain.id) {
        eag_.class_ns_[key] = chain.id;
      }
    }
  }

  // --- fixed-point walk -----------------------------------------------------

  void sync_generators() {
    for (const auto& [sym, container] : eag_.generator_container_) {
      changed_ |= grow(eag_.containers_[static_cast<size_t>(container)],
                       eag_.yields_[static_cast<size_t>(sym)]);
    }
  }

  ValueSet chain_value(int chain_id, int depth = 0) const {
    if (depth > kMaxEvalDepth) {
      return {Value::unknown()};
    }
    const Chain& chain = duc_.chain(chain_id);
    if (chain.kind == DefKind::Phi) {
      ValueSet out;
      for (int input : chain.phi_inputs) {
        ValueSet in = chain_value(input, depth + 1);
        out.insert(in.begin(), in.end());
      }
      return out;
    }
    return eag_.chain_values_[static_cast<size_t>(chain_id)];
  }

  void set_chain(int chain_id, ValueSet vals) {
    if (vals.empty()) {
      vals.insert(Value::unknown());
    }
    if (eag_.chain_values_[static_cast<size_t>(chain_id)] != vals) {
      eag_.chain_values_[static_cast<size_t>(chain_id)] = std::move(vals);
      changed_ = true;
    }
  }

  void add_chain(int chain_id, const ValueSet& vals) {
    changed_ |= grow(eag_.chain_values_[static_cast<size_t>(chain_id)], vals);
  }

  int chain_of(const void* node, const std::string& name) const {
    auto it = duc_.def_by_node.find({node, name});
    return it == duc_.def_by_node.end() ? -1 : it->second;
  }

  ValueSet element_values(const ValueSet& vals) const {
    ValueSet out;
    for (const auto& v : vals) {
      if (v.kind == Value::Kind::Container && v.id >= 0) {
        const auto& elems = eag_.containers_[static_cast<size_t>(v.id)];
        out.insert(elems.begin(), elems.end());
      } else {
        out.insert(Value::unknown());
      }
    }
    if (out.empty()) {
      out.insert(Value::unknown());
    }
    return out;
  }

  void assign_target(const Expr& target, const ValueSet& vals, const void* node,
                     int fn_sym) {
    switch (target.kind) {
    case Expr::Kind::Name: {
      int cid = chain_of(node, static_cast<const NameExpr&>(target).id);
      if (cid >= 0) {
        set_chain(cid, vals);
      }
      return;
    }
    case Expr::Kind::Tuple:
    case Expr::Kind::List: {
      ValueSet smashed = element_values(vals);
      for (const auto& el : static_cast<const SequenceExpr&>(target).elements) {
        assign_target(*el, smashed, node, fn_sym);
      }
      return;
    }
    case Expr::Kind::Starred:
      assign_target(*static_cast<const StarredExpr&>(target).value, vals, node, fn_sym);
      return;
    case Expr::Kind::Attribute: {
      const auto& attr = static_cast<const AttributeExpr&>(target);
      ValueSet base = eval(*attr.value, fn_sym, true);
      for (const auto& v : base) {
        if (v.kind == Value::Kind::UserInstance || v.kind == Value::Kind::UserClass) {
          changed_ |= grow(eag_.instance_attrs_[{v.id, attr.attr}], vals);
        }
      }
      return;
    }
    case Expr::Kind::Subscript: {
      const auto& sub = static_cast<const SubscriptExpr&>(target);
      ValueSet base = eval(*sub.value, fn_sym, true);
      eval(*sub.index, fn_sym, true);
      for (const auto& v : base) {
        if (v.kind == Value::Kind::Container && v.id >= 0) {
          changed_ |= grow(eag_.containers_[static_cast<size_t>(v.id)], vals);
        }
      }
      return;
    }
    default:
      return;
    }
  }

  Value import_value(const ImportItem& item) const {
    if (item.alias == item.module.substr(0, item.module.find('.'))) {
      return module_val(item.alias);
    }
    return module_val(item.module);
  }

  Value from_import_value(const std::string& module, const std::string& name) const {
    const std::string full = module + "." + name;
    if (auto resolved = stubs_.resolve_export(full)) {
      if (stubs_.cls(*resolved)) {
        return ext_cls(*resolved);
      }
      return ext_fn(*resolved);
    }
    return module_val(full);
  }

  void walk_block(const Block& block, int fn_sym) {
    for (const auto& stmt : block) {
      walk_stmt(*stmt, fn_sym);
    }
  }

  void walk_stmt(const Stmt& stmt, int fn_sym) {
    switch (stmt.kind) {
    case Stmt::Kind::Expr:
      eval(*static_cast<const ExprStmt&>(stmt).value, fn_sym, true);
      return;
    case Stmt::Kind::Assign: {
      const auto& s = static_cast<const AssignStmt&>(stmt);
      ValueSet vals = eval(*s.value, fn_sym, true);
      for (const auto& target : s.targets) {
        assign_target(*target, vals, &stmt, fn_sym);
      }
      return;
    }
    case Stmt::Kind::AugAssign: {
      const auto& s = static_cast<const AugAssignStmt&>(stmt);
      ValueSet rhs = eval(*s.value, fn_sym, true);
      if (s.target->kind == Expr::Kind::Name) {
        int cid = chain_of(&stmt, static_cast<const NameExpr&>(*s.target).id);
        if (cid >= 0) {
          int prior = duc_.chain(cid).prior_chain;
          ValueSet vals = prior >= 0 ? chain_value(prior) : ValueSet{};
          vals.insert(rhs.begin(), rhs.end());
          set_chain(cid, std::move(vals));
        }
      } else {
        assign_target(*s.target, rhs, &stmt, fn_sym);
      }
      return;
    }
    case Stmt::Kind::AnnAssign: {
      const auto& s = static_cast<const AnnAssignStmt&>(stmt);
      if (s.value) {
        assign_target(*s.target, eval(*s.value, fn_sym, true), &stmt, fn_sym);
      }
      return;
    }
    case Stmt::Kind::Import: {
      const auto& s = static_cast<const ImportStmt&>(stmt);
      for (const auto& item : s.items) {
        int cid = chain_of(&stmt, item.alias);
        if (cid >= 0) {
          set_chain(cid, {import_value(item)});
        }
      }
      return;
    }
    case Stmt::Kind::ImportFrom: {
      const auto& s = static_cast<const ImportFromStmt&>(stmt);
      for (const auto& item : s.names) {
        int cid = chain_of(&stmt, item.alias);
        if (cid >= 0) {
          if (s.level > 0) {
            set_chain(cid, {Value::unknown()});
          } else {
            set_chain(cid, {from_import_value(s.module, item.module)});
          }
        }
      }
      return;
    }
    case Stmt::Kind::FunctionDef: {
      const auto& fn = static_cast<const FunctionDefStmt&>(stmt);
      int sym = eag_.symbol_by_node_.at(&fn);
      int cid = chain_of(&fn, fn.name);
      if (cid >= 0) {
        set_chain(cid, {user_fn(sym)});
      }
      for (const auto& p : fn.params) {
        if (p.default_value) {
          int pc = chain_of(&p, p.name);
          if (pc >= 0) {
            add_chain(pc, eval(*p.default_value, fn_sym, true));
          }
        }
      }
      for (const auto& dec : fn.decorators) {
        eval(*dec, fn_sym, true);
      }
      walk_block(fn.body, sym);
      return;
    }
    case Stmt::Kind::ClassDef: {
      const auto& cls = static_cast<const ClassDefStmt&>(stmt);
      int sym = eag_.symbol_by_node_.at(&cls);
      int cid = chain_of(&cls, cls.name);
      if (cid >= 0) {
        set_chain(cid, {user_cls(sym)});
      }
      std::vector<int> user_bases;
      std::vector<std::string> external_bases;
      for (const auto& base : cls.bases) {
        for (const auto& v : eval(*base, fn_sym, true)) {
          if (v.kind == Value::Kind::UserClass) {
            user_bases.push_back(v.id);
          } else if (v.kind == Value::Kind::ExternalClass) {
            external_bases.push_back(v.fqn);
          }
        }
      }
      if (eag_.user_bases_[sym] != user_bases) {
        eag_.user_bases_[sym] = user_bases;
        changed_ = true;
      }
      if (eag_.external_bases_[sym] != external_bases) {
        eag_.external_bases_[sym] = external_bases;
        changed_ = true;
      }
      walk_block(cls.body, fn_sym);
      return;
    }
    case Stmt::Kind::Return: {
      const auto& s = static_cast<const ReturnStmt&>(stmt);
      ValueSet vals = s.value ? eval(*s.value, fn_sym, true) : ValueSet{Value::unknown()};
      if (fn_sym >= 0) {
        changed_ |= grow(eag_.returns_[static_cast<size_t>(fn_sym)], vals);
      }
      return;
    }
    case Stmt::Kind::If: {
      const auto& s = static_cast<const IfStmt&>(stmt);
      eval(*s.test, fn_sym, true);
      walk_block(s.body, fn_sym);
      walk_block(s.orelse, fn_sym);
      return;
    }
    case Stmt::Kind::While: {
      const auto& s = static_cast<const WhileStmt&>(stmt);
      eval(*s.test, fn_sym, true);
      walk_block(s.body, fn_sym);
      walk_block(s.orelse, fn_sym);
      return;
    }
    case Stmt::Kind::For: {
      const auto& s = static_cast<const ForStmt&>(stmt);
      ValueSet elems = element_values(eval(*s.iter, fn_sym, true));
      assign_target(*s.target, elems, &stmt, fn_sym);
      walk_block(s.body, fn_sym);
      walk_block(s.orelse, fn_sym);
      return;
    }
    case Stmt::Kind::Try: {
      const auto& s = static_cast<const TryStmt&>(stmt);
      walk_block(s.body, fn_sym);
      for (const auto& h : s.handlers) {
        ValueSet exc{Value::unknown()};
        if (h.type) {
          for (const auto& v : eval(*h.type, fn_sym, true)) {
            if (v.kind == Value::Kind::ExternalClass) {
              exc.insert(ext_inst(v.fqn));
            } else if (v.kind == Value::Kind::UserClass) {
              exc.insert(user_inst(v.id));
            }
          }
        }
        if (!h.name.empty()) {
          int cid = chain_of(&h, h.name);
          if (cid >= 0) {
            set_chain(cid, exc);
          }
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
        ValueSet ctx = eval(*item.context, fn_sym, true);
        if (item.target) {
          ValueSet entered;
          for (const auto& v : ctx) {
            if (v.kind == Value::Kind::ExternalInstance) {
              MemberType member = member_type(stubs_, v.fqn, "__enter__");
              if (const FunctionStub* const* fn = std::get_if<const FunctionStub*>(&member)) {
                for (const auto& r : (*fn)->returns) {
                  entered.insert(ext_inst(r));
                }
                continue;
              }
            }
            entered.insert(v);
          }
          assign_target(*item.target, entered, &item, fn_sym);
        }
      }
      walk_block(s.body, fn_sym);
      return;
    }
    case Stmt::Kind::Delete:
    case Stmt::Kind::Assert:
    case Stmt::Kind::Raise:
      for (const auto& v : static_cast<const ExprListStmt&>(stmt).values) {
        eval(*v, fn_sym, true);
      }
      return;
    default:
      return;
    }
  }

  // --- expression evaluation -------------------------------------------------

  ValueSet eval_name(const NameExpr& name) const {
    auto it = duc_.use_index.find({name.line, name.id});
    if (it != duc_.use_index.end() && !it->second.empty()) {
      // a chain exists; an empty union just means "no value yet" during
      // earlier fixed-point rounds and must not degrade to unknown
      ValueSet out;
      for (int cid : it->second) {
        ValueSet vals = chain_value(cid);
        out.insert(vals.begin(), vals.end());
      }
      return out;
    }
    // unbound name: star imports, then a builtins stub entry
    ValueSet out;
    for (const auto& [scope, module] : imports_.star_imports) {
      if (auto target = stubs_.star_target(module, name.id)) {
        out.insert(stubs_.cls(*target) ? ext_cls(*target) : ext_fn(*target));
      }
    }
    if (out.empty()) {
      if (auto builtin = stubs_.resolve_export("builtins." + name.id)) {
        out.insert(stubs_.cls(*builtin) ? ext_cls(*builtin) : ext_fn(*builtin));
      }
    }
    if (out.empty()) {
      out.insert(Value::unknown());
    }
    return out;
  }

  ValueSet member_values(const Value& v, const std::string& attr, int depth) {
    ValueSet out;
    switch (v.kind) {
    case Value::Kind::Module: {
      if (dot_count(v.fqn) > 12) {
        out.insert(Value::unknown());
        break;
      }
      const std::string full = v.fqn + "." + attr;
      if (auto resolved = stubs_.resolve_export(full)) {
        out.insert(stubs_.cls(*resolved) ? ext_cls(*resolved) : ext_fn(*resolved));
      } else {
        out.insert(module_val(full));
      }
      break;
    }
    case Value::Kind::ExternalInstance: {
      MemberType member = member_type(stubs_, v.fqn, attr);
      if (const std::string* type = std::get_if<std::string>(&member)) {
        out.insert(ext_inst(*type));
      } else if (std::get_if<const FunctionStub*>(&member)) {
        out.insert(bound(v.fqn, attr));
      } else {
        // declarative catch-all for dynamic attributes (dataframe columns)
        MemberType fallback = member_type(stubs_, v.fqn, kGetAttrFallback);
        if (const std::string* type = std::get_if<std::string>(&fallback)) {
          out.insert(ext_inst(*type));
        } else {
          out.insert(Value::unknown());
        }
      }
      break;
    }
    case Value::Kind::ExternalClass: {
      MemberType member = member_type(stubs_, v.fqn, attr);
      if (const std::string* type = std::get_if<std::string>(&member)) {
        out.insert(ext_inst(*type));
      } else if (std::get_if<const FunctionStub*>(&member)) {
        out.insert(ext_fn(v.fqn + "." + attr));
      } else {
        out.insert(Value::unknown());
      }
      break;
    }
    case Value::Kind::UserInstance:
    case Value::Kind::UserClass: {
      auto attr_it = eag_.instance_attrs_.find({v.id, attr});
      if (attr_it != eag_.instance_attrs_.end()) {
        out.insert(attr_it->second.begin(), attr_it->second.end());
      }
      ValueSet members = eag_.user_member_impl(*this, v.id, attr, depth);
      for (const auto& m : members) {
        if (m.kind == Value::Kind::UserFunction && v.kind == Value::Kind::UserInstance) {
          out.insert(user_bound(m.id, v.id));
        } else {
          out.insert(m);
        }
      }
      if (out.empty()) {
        // inherited external behaviour (user class deriving a stubbed class)
        auto ext = eag_.external_bases_.find(v.id);
        if (ext != eag_.external_bases_.end()) {
          for (const auto& base_fqn : ext->second) {
            Value as_ext = v.kind == Value::Kind::UserInstance ? ext_inst(base_fqn)
                                                               : ext_cls(base_fqn);
            ValueSet inherited = member_values(as_ext, attr, depth + 1);
            out.insert(inherited.begin(), inherited.end());
          }
        }
      }
      if (out.empty()) {
        out.insert(Value::unknown());
      }
      break;
    }
    default:
      out.insert(Value::unknown());
      break;
    }
    return out;
  }

  enum class IndexForm { Scalar, List, Slice, Mask };

  static IndexForm index_form(const Expr& index) {
    switch (index.kind) {
    case Expr::Kind::List:
      return IndexForm::List;
    case Expr::Kind::Slice:
      return IndexForm::Slice;
    case Expr::Kind::Compare:
    case Expr::Kind::BoolOp:
      return IndexForm::Mask;
    case Expr::Kind::Tuple: {
      for (const auto& el : static_cast<const SequenceExpr&>(index).elements) {
        if (el->kind == Expr::Kind::Slice) {
          return IndexForm::Slice;
        }
      }
      return IndexForm::Scalar;
    }
    default:
      return IndexForm::Scalar;
    }
  }

  ValueSet subscript_values(const Value& v, const Expr& index, int depth) {
    ValueSet out;
    switch (v.kind) {
    case Value::Kind::Container:
      if (v.id >= 0) {
        const auto& elems = eag_.containers_[static_cast<size_t>(v.id)];
        out.insert(elems.begin(), elems.end());
      }
      if (out.empty()) {
        out.insert(Value::unknown());
      }
      break;
    case Value::Kind::ExternalInstance: {
      const char* preferred = kGetItemScalar;
      switch (index_form(index)) {
      case IndexForm::List:
        preferred = kGetItemList;
        break;
      case IndexForm::Slice:
        preferred = kGetItemSlice;
        break;
      case IndexForm::Mask:
        preferred = kGetItemMask;
        break;
      default:
        break;
      }
      const FunctionStub* method = nullptr;
      MemberType m = member_type(stubs_, v.fqn, preferred);
      if (const FunctionStub* const* fn = std::get_if<const FunctionStub*>(&m)) {
        method = *fn;
      } else {
        MemberType plain = member_type(stubs_, v.fqn, kGetItem);
        if (const FunctionStub* const* fn = std::get_if<const FunctionStub*>(&plain)) {
          method = *fn;
        }
      }
      if (method) {
        for (const auto& r : method->returns) {
          out.insert(ext_inst(r));
        }
      } else {
        out.insert(Value::unknown());
      }
      break;
    }
    default:
      out.insert(Value::unknown());
      break;
    }
    return out;
  }

  void bind_user_params(int sym, const CallExpr& call, bool skip_self,
                        const ValueSet& self_vals, int fn_sym, int depth) {
    const UserSymbol& symbol = eag_.symbols_[static_cast<size_t>(sym)];
    const std::vector<Param>* params = nullptr;
    if (symbol.fn) {
      params = &symbol.fn->params;
    } else if (symbol.lambda) {
      params = &symbol.lambda->params;
    }
    if (!params) {
      return;
    }
    auto param_chain = [&](size_t i) -> int {
      const Param& p = (*params)[i];
      return p.name.empty() ? -1 : chain_of(&p, p.name);
    };
    size_t pi = 0;
    if (skip_self && !params->empty()) {
      int cid = param_chain(0);
      if (cid >= 0) {
        add_chain(cid, self_vals);
      }
      pi = 1;
    }
    for (const auto& arg : call.args) {
      ValueSet vals = eval(*arg.value, fn_sym, true, depth + 1);
      switch (arg.kind) {
      case CallArg::Kind::Positional: {
        while (pi < params->size() && (*params)[pi].kind != Param::Kind::Normal) {
          ++pi;
        }
        if (pi < params->size()) {
          int cid = param_chain(pi);
          if (cid >= 0) {
            add_chain(cid, vals);
          }
          ++pi;
        } else {
          // overflow goes to *args if present
          for (size_t i = 0; i < params->size(); ++i) {
            if ((*params)[i].kind == Param::Kind::Star) {
              int cid = param_chain(i);
              if (cid >= 0) {
                add_chain(cid, vals);
              }
            }
          }
        }
        break;
      }
      case CallArg::Kind::Keyword: {
        for (size_t i = 0; i < params->size(); ++i) {
          if ((*params)[i].name == arg.name) {
            int cid = param_chain(i);
            if (cid >= 0) {
              add_chain(cid, vals);
            }
            break;
          }
        }
        break;
      }
      case CallArg::Kind::Star: {
        ValueSet elems = element_values(vals);
        for (size_t i = pi; i < params->size(); ++i) {
          int cid = param_chain(i);
          if (cid >= 0) {
            add_chain(cid, elems);
          }
        }
        break;
      }
      case CallArg::Kind::DoubleStar:
        for (size_t i = pi; i < params->size(); ++i) {
          int cid = param_chain(i);
          if (cid >= 0) {
            add_chain(cid, {Value::unknown()});
          }
        }
        break;
      }
    }
  }

  ValueSet returns_of(int sym, int depth) {
    const UserSymbol& symbol = eag_.symbols_[static_cast<size_t>(sym)];
    if (symbol.is_generator) {
      auto it = eag_.generator_container_.find(sym);
      if (it != eag_.generator_container_.end()) {
        return {container_val(it->second)};
      }
    }
    if (symbol.lambda) {
      return eval(*symbol.lambda->body, sym, false, depth + 1);
    }
    const ValueSet& r = eag_.returns_[static_cast<size_t>(sym)];
    if (r.empty()) {
      return {Value::unknown()};
    }
    return r;
  }

  ValueSet eval_call(const CallExpr& call, int fn_sym, bool mutate, int depth) {
    ValueSet callee = eval(*call.func, fn_sym, mutate, depth + 1);
    ValueSet out;
    for (const auto& v : callee) {
      switch (v.kind) {
      case Value::Kind::UserFunction: {
        if (mutate) {
          bind_user_params(v.id, call, false, {}, fn_sym, depth);
        }
        ValueSet r = returns_of(v.id, depth);
        out.insert(r.begin(), r.end());
        break;
      }
      case Value::Kind::UserBoundMethod: {
        if (mutate) {
          bind_user_params(v.id, call, true, {user_inst(v.aux)}, fn_sym, depth);
        }
        ValueSet r = returns_of(v.id, depth);
        out.insert(r.begin(), r.end());
        break;
      }
      case Value::Kind::UserClass: {
        if (mutate) {
          ValueSet ctor = eag_.user_member_impl(*this, v.id, "__init__", depth);
          for (const auto& c : ctor) {
            if (c.kind == Value::Kind::UserFunction) {
              bind_user_params(c.id, call, true, {user_inst(v.id)}, fn_sym, depth);
            }
          }
        }
        out.insert(user_inst(v.id));
        break;
      }
      case Value::Kind::ExternalClass:
        out.insert(ext_inst(v.fqn));
        break;
      case Value::Kind::ExternalFunction: {
        if (auto returns = return_type(stubs_, v.fqn)) {
          for (const auto& r : *returns) {
            out.insert(ext_inst(r));
          }
        } else {
          out.insert(Value::unknown());
        }
        break;
      }
      case Value::Kind::BoundMethod: {
        if (auto returns = return_type(stubs_, v.fqn + "." + v.member)) {
          for (const auto& r : *returns) {
            out.insert(ext_inst(r));
          }
        } else {
          out.insert(Value::unknown());
        }
        break;
      }
      default:
        out.insert(Value::unknown());
        break;
      }
    }
    // evaluate arguments for their side effects (nested calls, containers)
    if (mutate) {
      for (const auto& arg : call.args) {
        eval(*arg.value, fn_sym, true, depth + 1);
      }
    }
    return out;
  }

  const ModuleIR& ir_;
  const DefUseChains& duc_;
  const ImportTable& imports_;
  const TypeStubDB& stubs_;
  ExtendedAssignmentGraph& eag_;
  bool changed_ = false;
};

bool EagBuilder::block_has_yield(const Block& block) {
  for (const auto& stmt : block) {
    switch (stmt->kind) {
    case Stmt::Kind::Expr:
      if (expr_has_yield(*static_cast<const ExprStmt&>(*stmt).value)) {
        return true;
      }
      break;
    case Stmt::Kind::Assign:
      if (expr_has_yield(*static_cast<const AssignStmt&>(*stmt).value)) {
        return true;
      }
      break;
    case Stmt::Kind::If: {
      const auto& s = static_cast<const IfStmt&>(*stmt);
      if (block_has_yield(s.body) || block_has_yield(s.orelse)) {
        return true;
      }
      break;
    }
    case Stmt::Kind::While: {
      const auto& s = static_cast<const WhileStmt&>(*stmt);
      if (block_has_yield(s.body) || block_has_yield(s.orelse)) {
        return true;
      }
      break;
    }
    case Stmt::Kind::For: {
      const auto& s = static_cast<const ForStmt&>(*stmt);
      if (block_has_yield(s.body) || block_has_yield(s.orelse)) {
        return true;
      }
      break;
    }
    case Stmt::Kind::Try: {
      const auto& s = static_cast<const TryStmt&>(*stmt);
      if (block_has_yield(s.body) || block_has_yield(s.orelse) ||
          block_has_yield(s.finally)) {
        return true;
      }
      for (const auto& h : s.handlers) {
        if (block_has_yield(h.body)) {
          return true;
        }
      }
      break;
    }
    case Stmt::Kind::With:
      if (block_has_yield(static_cast<const WithStmt&>(*stmt).body)) {
        return true;
      }
      break;
    default:
      break;
    }
  }
  return false;
}

bool EagBuilder::expr_has_yield(const Expr& expr) {
  if (expr.kind == Expr::Kind::UnaryOp) {
    const auto& u = static_cast<const UnaryOpExpr&>(expr);
    if (u.op.rfind("yield", 0) == 0) {
      return true;
    }
    return u.operand && expr_has_yield(*u.operand);
  }
  if (expr.kind == Expr::Kind::BinOp) {
    const auto& b = static_cast<const BinOpExpr&>(expr);
    return expr_has_yield(*b.lhs) || expr_has_yield(*b.rhs);
  }
  return false;
}

ValueSet EagBuilder::eval(const Expr& expr, int fn_sym, bool mutate, int depth) {
  if (depth > kMaxEvalDepth) {
    return {Value::unknown()};
  }
  switch (expr.kind) {
  case Expr::Kind::Name:
    return eval_name(static_cast<const NameExpr&>(expr));
  case Expr::Kind::Attribute: {
    const auto& attr = static_cast<const AttributeExpr&>(expr);
    ValueSet base = eval(*attr.value, fn_sym, mutate, depth + 1);
    ValueSet out;
    for (const auto& v : base) {
      ValueSet vals = member_values(v, attr.attr, depth + 1);
      out.insert(vals.begin(), vals.end());
    }
    return out;
  }
  case Expr::Kind::Subscript: {
    const auto& sub = static_cast<const SubscriptExpr&>(expr);
    ValueSet base = eval(*sub.value, fn_sym, mutate, depth + 1);
    eval(*sub.index, fn_sym, mutate, depth + 1);
    ValueSet out;
    for (const auto& v : base) {
      ValueSet vals = subscript_values(v, *sub.index, depth + 1);
      out.insert(vals.begin(), vals.end());
    }
    return out;
  }
  case Expr::Kind::Call:
    return eval_call(static_cast<const CallExpr&>(expr), fn_sym, mutate, depth);
  case Expr::Kind::Lambda: {
    auto it = eag_.symbol_by_node_.find(&expr);
    if (it != eag_.symbol_by_node_.end()) {
      return {user_fn(it->second)};
    }
    return {Value::unknown()};
  }
  case Expr::Kind::Tuple:
  case Expr::Kind::List:
  case Expr::Kind::Set: {
    const auto& seq = static_cast<const SequenceExpr&>(expr);
    auto it = eag_.container_by_node_.find(&seq);
    if (it == eag_.container_by_node_.end()) {
      return {Value::unknown()};
    }
    if (mutate) {
      ValueSet elems;
      for (const auto& el : seq.elements) {
        if (el->kind == Expr::Kind::Starred) {
          ValueSet inner =
              eval(*static_cast<const StarredExpr&>(*el).value, fn_sym, mutate, depth + 1);
          ValueSet flattened = element_values(inner);
          elems.insert(flattened.begin(), flattened.end());
        } else {
          ValueSet vals = eval(*el, fn_sym, mutate, depth + 1);
          elems.insert(vals.begin(), vals.end());
        }
      }
      changed_ |= grow(eag_.containers_[static_cast<size_t>(it->second)], elems);
    }
    return {container_val(it->second)};
  }
  case Expr::Kind::Dict: {
    const auto& d = static_cast<const DictExpr&>(expr);
    auto it = eag_.container_by_node_.find(&d);
    if (it == eag_.container_by_node_.end()) {
      return {Value::unknown()};
    }
    if (mutate) {
      ValueSet elems;
      for (size_t i = 0; i < d.values.size(); ++i) {
        if (d.keys[i]) {
          eval(*d.keys[i], fn_sym, mutate, depth + 1);
        }
        ValueSet vals = eval(*d.values[i], fn_sym, mutate, depth + 1);
        if (d.keys[i]) {
          elems.insert(vals.begin(), vals.end());
        } else {
          ValueSet flattened = element_values(vals); // **spread
          elems.insert(flattened.begin(), flattened.end());
        }
      }
      changed_ |= grow(eag_.containers_[static_cast<size_t>(it->second)], elems);
    }
    return {container_val(it->second)};
  }
  case Expr::Kind::Comprehension: {
    const auto& comp = static_cast<const ComprehensionExpr&>(expr);
    auto it = eag_.container_by_node_.find(&comp);
    if (it == eag_.container_by_node_.end()) {
      return {Value::unknown()};
    }
    if (mutate) {
      for (const auto& clause : comp.clauses) {
        ValueSet iter_vals = eval(*clause.iter, fn_sym, mutate, depth + 1);
        assign_target(*clause.target, element_values(iter_vals), &clause, fn_sym);
        for (const auto& cond : clause.conditions) {
          eval(*cond, fn_sym, mutate, depth + 1);
        }
      }
      ValueSet elems = eval(*comp.element, fn_sym, mutate, depth + 1);
      if (comp.value) {
        ValueSet vals = eval(*comp.value, fn_sym, mutate, depth + 1);
        elems = comp.flavor == ComprehensionExpr::Flavor::Dict ? vals : elems;
      }
      changed_ |= grow(eag_.containers_[static_cast<size_t>(it->second)], elems);
    }
    return {container_val(it->second)};
  }
  case Expr::Kind::BinOp: {
    const auto& b = static_cast<const BinOpExpr&>(expr);
    if (b.op == ":=") {
      ValueSet vals = eval(*b.rhs, fn_sym, mutate, depth + 1);
      if (mutate && b.lhs->kind == Expr::Kind::Name) {
        int cid = chain_of(&b, static_cast<const NameExpr&>(*b.lhs).id);
        if (cid >= 0) {
          set_chain(cid, vals);
        }
      }
      return vals;
    }
    ValueSet lhs = eval(*b.lhs, fn_sym, mutate, depth + 1);
    ValueSet rhs = eval(*b.rhs, fn_sym, mutate, depth + 1);
    // arithmetic on library types is approximated as type-preserving
    ValueSet out;
    for (const auto& v : lhs) {
      if (v.kind == Value::Kind::ExternalInstance) {
        out.insert(v);
      }
    }
    for (const auto& v : rhs) {
      if (v.kind == Value::Kind::ExternalInstance) {
        out.insert(v);
      }
    }
    if (out.empty()) {
      out.insert(Value::unknown());
    }
    return out;
  }
  case Expr::Kind::UnaryOp: {
    const auto& u = static_cast<const UnaryOpExpr&>(expr);
    if (u.op.rfind("yield", 0) == 0) {
      if (u.operand) {
        ValueSet vals = eval(*u.operand, fn_sym, mutate, depth + 1);
        if (mutate && fn_sym >= 0) {
          if (u.op == "yield from") {
            changed_ |= grow(eag_.yields_[static_cast<size_t>(fn_sym)], element_values(vals));
          } else {
            changed_ |= grow(eag_.yields_[static_cast<size_t>(fn_sym)], vals);
          }
        }
      }
      return {Value::unknown()};
    }
    if (!u.operand) {
      return {Value::unknown()};
    }
    if (u.op == "not") {
      eval(*u.operand, fn_sym, mutate, depth + 1);
      return {Value::unknown()};
    }
    return eval(*u.operand, fn_sym, mutate, depth + 1);
  }
  case Expr::Kind::BoolOp: {
    const auto& b = static_cast<const BoolOpExpr&>(expr);
    ValueSet out;
    for (const auto& v : b.values) {
      ValueSet vals = eval(*v, fn_sym, mutate, depth + 1);
      out.insert(vals.begin(), vals.end());
    }
    return out;
  }
  case Expr::Kind::Compare: {
    const auto& c = static_cast<const CompareExpr&>(expr);
    eval(*c.first, fn_sym, mutate, depth + 1);
    for (const auto& r : c.rest) {
      eval(*r, fn_sym, mutate, depth + 1);
    }
    return {Value::unknown()};
  }
  case Expr::Kind::IfExp: {
    const auto& i = static_cast<const IfExpExpr&>(expr);
    eval(*i.test, fn_sym, mutate, depth + 1);
    ValueSet out = eval(*i.body, fn_sym, mutate, depth + 1);
    ValueSet orelse = eval(*i.orelse, fn_sym, mutate, depth + 1);
    out.insert(orelse.begin(), orelse.end());
    return out;
  }
  case Expr::Kind::Starred:
    return eval(*static_cast<const StarredExpr&>(expr).value, fn_sym, mutate, depth + 1);
  case Expr::Kind::Str: {
    if (stubs_.cls("builtins.str")) {
      return {ext_inst("builtins.str")};
    }
    return {Value::unknown()};
  }
  case Expr::Kind::Number: {
    const auto& n = static_cast<const NumberExpr&>(expr);
    const bool is_float = n.literal.find('.') != std::string::npos ||
                          n.literal.find('e') != std::string::npos ||
                          n.literal.find('E') != std::string::npos;
    const std::string type = is_float ? "builtins.float" : "builtins.int";
    if (stubs_.cls(type)) {
      return {ext_inst(type)};
    }
    return {Value::unknown()};
  }
  default:
    return {Value::unknown()};
  }
}

// ---------------------------------------------------------------------------

ValueSet ExtendedAssignmentGraph::user_member_impl(EagBuilder& builder, int class_symbol,
                                                   const std::string& name,
                                                   int depth) const {
  ValueSet out;
  if (depth > kMaxEvalDepth) {
    return out;
  }
  std::vector<int> queue{class_symbol};
  std::set<int> visited;
  while (!queue.empty()) {
    int sym = queue.front();
    queue.erase(queue.begin());
    if (!visited.insert(sym).second) {
      continue;
    }
    auto it = class_ns_.find({sym, name});
    if (it != class_ns_.end()) {
      ValueSet vals = builder.chain_value(it->second);
      out.insert(vals.begin(), vals.end());
      continue; // overriding definition shadows bases
    }
    auto bases = user_bases_.find(sym);
    if (bases != user_bases_.end()) {
      for (int b : bases->second) {
        queue.push_back(b);
      }
    }
  }
  return out;
}

ValueSet ExtendedAssignmentGraph::user_member(int class_symbol, const std::string& name) const {
  EagBuilder builder(*ir, *duc, *imports, *stubs,
                     const_cast<ExtendedAssignmentGraph&>(*this));
  return user_member_impl(builder, class_symbol, name, 0);
}

ValueSet ExtendedAssignmentGraph::chain_values(int chain_id) const {
  EagBuilder builder(*ir, *duc, *imports, *stubs,
                     const_cast<ExtendedAssignmentGraph&>(*this));
  return builder.chain_value(chain_id);
}

ValueSet ExtendedAssignmentGraph::eval(const Expr& expr) const {
  EagBuilder builder(*ir, *duc, *imports, *stubs,
                     const_cast<ExtendedAssignmentGraph&>(*this));
  return builder.eval(expr, -1, false);
}

ValueSet ExtendedAssignmentGraph::values_at(const std::string& name, int line) const {
  EagBuilder builder(*ir, *duc, *imports, *stubs,
                     const_cast<ExtendedAssignmentGraph&>(*this));
  ValueSet out;
  auto it = duc->use_index.find({line, name});
  if (it != duc->use_index.end()) {
    for (int cid : it->second) {
      ValueSet vals = builder.chain_value(cid);
      out.insert(vals.begin(), vals.end());
    }
    return out;
  }
  if (auto cid = duc->governing_def(name, line)) {
    return builder.chain_value(*cid);
  }
  return out;
}

ValueNode ExtendedAssignmentGraph::project(const Value& v,
                                           const ExtendedAssignmentGraph& eag) {
  switch (v.kind) {
  case Value::Kind::UserFunction:
    return {ValueNode::Kind::user_function, eag.symbols_[static_cast<size_t>(v.id)].fqn};
  case Value::Kind::UserBoundMethod:
    return {ValueNode::Kind::user_function, eag.symbols_[static_cast<size_t>(v.id)].fqn};
  case Value::Kind::UserClass:
  case Value::Kind::UserInstance:
    return {ValueNode::Kind::user_class, eag.symbols_[static_cast<size_t>(v.id)].fqn};
  case Value::Kind::ExternalInstance:
    return {ValueNode::Kind::external_type, v.fqn};
  case Value::Kind::ExternalFunction:
  case Value::Kind::ExternalClass:
    return {ValueNode::Kind::external_function, v.fqn};
  case Value::Kind::BoundMethod:
    return {ValueNode::Kind::external_function, v.fqn + "." + v.member};
  case Value::Kind::Module:
    return {ValueNode::Kind::external_type, v.fqn};
  default:
    return {ValueNode::Kind::unknown, ""};
  }
}

std::set<ValueNode> ExtendedAssignmentGraph::points_to(const std::string& name,
                                                       int line) const {
  std::set<ValueNode> out;
  for (const auto& v : values_at(name, line)) {
    out.insert(project(v, *this));
  }
  if (out.empty()) {
    out.insert({ValueNode::Kind::unknown, ""});
  }
  return out;
}

const UserSymbol* ExtendedAssignmentGraph::symbol_of(const FunctionDefStmt& fn) const {
  auto it = symbol_by_node_.find(&fn);
  return it == symbol_by_node_.end() ? nullptr : &symbols_[static_cast<size_t>(it->second)];
}

const UserSymbol* ExtendedAssignmentGraph::symbol_of(const ClassDefStmt& cls) const {
  auto it = symbol_by_node_.find(&cls);
  return it == symbol_by_node_.end() ? nullptr : &symbols_[static_cast<size_t>(it->second)];
}

std::string ExtendedAssignmentGraph::dump_dot() const {
  std::ostringstream out;
  out << "digraph eag {\n  rankdir=LR;\n  node [shape=box, fontsize=10];\n";
  auto value_label = [&](const Value& v) {
    ValueNode node = project(v, *this);
    switch (node.kind) {
    case ValueNode::Kind::user_function:
      return "fn " + node.fqn;
    case ValueNode::Kind::user_class:
      return "class " + node.fqn;
    case ValueNode::Kind::external_type:
      return "type " + node.fqn;
    case ValueNode::Kind::external_function:
      return "extfn " + node.fqn;
    default:
      return std::string("unknown");
    }
  };
  for (const auto& chain : duc->chains) {
    std::string label = chain.name + "@" + std::to_string(chain.def_line);
    out << "  c" << chain.id << " [label=\"" << label << "\"];\n";
    if (chain.kind == DefKind::Phi) {
      for (int input : chain.phi_inputs) {
        out << "  c" << chain.id << " -> c" << input << " [style=dashed];\n";
      }
      continue;
    }
    for (const auto& v : chain_values(chain.id)) {
      if (v.kind == Value::Kind::Unknown || v.kind == Value::Kind::Container) {
        continue;
      }
      out << "  c" << chain.id << " -> \"" << value_label(v) << "\";\n";
    }
  }
  out << "}\n";
  return out.str();
}

ExtendedAssignmentGraph build_eag(const ModuleIR& ir, const DefUseChains& duc,
                                  const ImportTable& imports, const TypeStubDB& stubs) {
  ExtendedAssignmentGraph eag;
  EagBuilder builder(ir, duc, imports, stubs, eag);
  builder.run();
  return eag;
}

} // namespace headergen
