#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "headergen/defuse.hpp"
#include "headergen/stubdb.hpp"

namespace headergen {

// Spec-facing points-to result.
struct ValueNode {
  enum class Kind {
    user_function,
    user_class,
    external_type,
    external_function,
    unknown,
  };
  Kind kind = Kind::unknown;
  std::string fqn; // empty iff unknown

  auto operator<=>(const ValueNode&) const = default;
};

// Internal value lattice element; richer than the reported ValueNode.
struct Value {
  enum class Kind {
    UserFunction,
    UserClass,    // reference to the class object
    UserInstance, // instance of a user class
    ExternalFunction,
    ExternalClass,    // reference to a stubbed class object
    ExternalInstance, // instance of a stubbed (or opaque) type
    BoundMethod,      // method reference on an external instance
    UserBoundMethod,  // method reference on a user-class instance
    Module,           // module/namespace path
    Container,        // smashed list/tuple/set/dict/generator contents
    Unknown,
  };
  Kind kind = Kind::Unknown;
  std::string fqn;    // external fqn, module path, or bound-method class
  std::string member; // bound-method name
  int id = -1;        // user symbol id or container id
  int aux = -1;       // UserBoundMethod: receiver class symbol

  auto operator<=>(const Value&) const = default;

  static Value unknown() { return {}; }
};

using ValueSet = std::set<Value>;

class EagBuilder;

struct UserSymbol {
  enum class Kind { Function, Class, Lambda };
  Kind kind = Kind::Function;
  int id = -1;
  std::string fqn; // dotted scope path, e.g. "prep" or "Model.fit"
  int body_scope = -1;
  const FunctionDefStmt* fn = nullptr;
  const LambdaExpr* lambda = nullptr;
  const ClassDefStmt* cls = nullptr;
  bool is_generator = false;
};

class ExtendedAssignmentGraph {
public:
  // points-to at a location; {unknown} for names without a chain
  std::set<ValueNode> points_to(const std::string& name, int line) const;

  // internal variant used by the callsite extractor and pattern matcher
  ValueSet values_at(const std::string& name, int line) const;

  // re-evaluates an expression against the converged graph
  ValueSet eval(const Expr& expr) const;

  ValueSet chain_values(int chain_id) const;

  const std::vector<UserSymbol>& symbols() const { return symbols_; }
  const UserSymbol* symbol_of(const FunctionDefStmt& fn) const;
  const UserSymbol* symbol_of(const ClassDefStmt& cls) const;

  // user-class member lookup through base classes (left-to-right DFS)
  ValueSet user_member(int class_symbol, const std::string& name) const;

  static ValueNode project(const Value& v, const ExtendedAssignmentGraph& eag);

  std::string dump_dot() const;

  // wired by build_eag
  const ModuleIR* ir = nullptr;
  const DefUseChains* duc = nullptr;
  const ImportTable* imports = nullptr;
  const TypeStubDB* stubs = nullptr;

private:
  friend ExtendedAssignmentGraph build_eag(const ModuleIR&, const DefUseChains&,
                                           const ImportTable&, const TypeStubDB&);
  friend class EagBuilder;

  ValueSet user_member_impl(EagBuilder& builder, int class_symbol,
                            const std::string& name, int depth) const;

  std::vector<ValueSet> chain_values_;
  std::vector<ValueSet> containers_;
  std::vector<UserSymbol> symbols_;
  std::vector<ValueSet> returns_; // per symbol
  std::vector<ValueSet> yields_;  // per symbol
  std::map<std::pair<int, std::string>, ValueSet> instance_attrs_;
  std::map<std::pair<int, std::string>, int> class_ns_; // (class sym, name)->chain
  std::map<int, std::vector<int>> user_bases_;          // class sym -> base syms
  std::map<int, std::vector<std::string>> external_bases_; // class sym -> fqns
  std::map<int, int> generator_container_;              // fn sym -> container
  std::map<const void*, int> symbol_by_node_;
  std::map<const void*, int> container_by_node_;
};

ExtendedAssignmentGraph build_eag(const ModuleIR& ir, const DefUseChains& duc,
                                  const ImportTable& imports, const TypeStubDB& stubs);

} // namespace headergen
