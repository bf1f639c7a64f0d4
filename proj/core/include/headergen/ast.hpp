#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace headergen {

// Line-annotated IR for the analyzable statement surface. Anything outside
// it is preserved as an opaque statement that contributes no assignments or
// calls.

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  enum class Kind {
    Name,
    Attribute,
    Subscript,
    Call,
    Number,
    Str,
    Tuple,
    List,
    Set,
    Dict,
    BinOp,
    UnaryOp,
    BoolOp,
    Compare,
    IfExp,
    Lambda,
    Comprehension,
    Starred,
    Slice,
    NoneLit,
    BoolLit,
    EllipsisLit,
    Unknown, // yield/await payloads and anything deliberately untracked
  };

  Kind kind;
  int line = 0;      // script line of the node's start
  int col = 0;
  size_t begin = 0;  // byte span in the composite script
  size_t end = 0;

  explicit Expr(Kind k) : kind(k) {}
  virtual ~Expr() = default;
};

struct NameExpr : Expr {
  NameExpr() : Expr(Kind::Name) {}
  std::string id;
};

struct AttributeExpr : Expr {
  AttributeExpr() : Expr(Kind::Attribute) {}
  ExprPtr value;
  std::string attr;
  int attr_line = 0; // line of the attribute name token (chained calls)
};

struct SubscriptExpr : Expr {
  SubscriptExpr() : Expr(Kind::Subscript) {}
  ExprPtr value;
  ExprPtr index; // Slice, Tuple, or plain expression
};

struct CallArg {
  enum class Kind { Positional, Keyword, Star, DoubleStar };
  Kind kind = Kind::Positional;
  std::string name; // keyword arguments only
  ExprPtr value;
};

struct CallExpr : Expr {
  CallExpr() : Expr(Kind::Call) {}
  ExprPtr func;
  std::vector<CallArg> args;
  int call_line = 0; // line of the callee's final name token
};

struct NumberExpr : Expr {
  NumberExpr() : Expr(Kind::Number) {}
  std::string literal;
};

struct StrExpr : Expr {
  StrExpr() : Expr(Kind::Str) {}
  std::string value;    // decoded enough for pattern matching (no escapes)
  bool is_fstring = false;
};

struct SequenceExpr : Expr { // Tuple/List/Set
  SequenceExpr() : Expr(Kind::Tuple) {}
  explicit SequenceExpr(Kind k) : Expr(k) {}
  std::vector<ExprPtr> elements;
};

struct DictExpr : Expr {
  DictExpr() : Expr(Kind::Dict) {}
  std::vector<ExprPtr> keys; // null entry for `**spread`
  std::vector<ExprPtr> values;
};

struct BinOpExpr : Expr {
  BinOpExpr() : Expr(Kind::BinOp) {}
  std::string op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct UnaryOpExpr : Expr {
  UnaryOpExpr() : Expr(Kind::UnaryOp) {}
  std::string op;
  ExprPtr operand;
};

struct BoolOpExpr : Expr {
  BoolOpExpr() : Expr(Kind::BoolOp) {}
  std::string op; // "and" | "or"
  std::vector<ExprPtr> values;
};

struct CompareExpr : Expr {
  CompareExpr() : Expr(Kind::Compare) {}
  ExprPtr first;
  std::vector<std::string> ops;
  std::vector<ExprPtr> rest;
};

struct IfExpExpr : Expr {
  IfExpExpr() : Expr(Kind::IfExp) {}
  ExprPtr body;
  ExprPtr test;
  ExprPtr orelse;
};

struct Param {
  std::string name;
  ExprPtr default_value; // may be null
  enum class Kind { Normal, Star, DoubleStar } kind = Kind::Normal;
};

struct LambdaExpr : Expr {
  LambdaExpr() : Expr(Kind::Lambda) {}
  std::vector<Param> params;
  ExprPtr body;
  int scope_id = -1; // filled by the scope resolver
};

struct ComprehensionClause {
  ExprPtr target;
  ExprPtr iter;
  std::vector<ExprPtr> conditions;
};

struct ComprehensionExpr : Expr {
  ComprehensionExpr() : Expr(Kind::Comprehension) {}
  enum class Flavor { List, Set, Dict, Generator } flavor = Flavor::List;
  ExprPtr element;
  ExprPtr value; // dict comprehensions only
  std::vector<ComprehensionClause> clauses;
  int scope_id = -1;
};

struct StarredExpr : Expr {
  StarredExpr() : Expr(Kind::Starred) {}
  ExprPtr value;
};

struct SliceExpr : Expr {
  SliceExpr() : Expr(Kind::Slice) {}
  ExprPtr lower;
  ExprPtr upper;
  ExprPtr step;
};

struct LiteralExpr : Expr { // None/True/False/Ellipsis/Unknown
  explicit LiteralExpr(Kind k) : Expr(k) {}
  bool bool_value = false;
};

// ---------------------------------------------------------------------------

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct Stmt {
  enum class Kind {
    Expr,
    Assign,
    AugAssign,
    AnnAssign,
    Import,
    ImportFrom,
    FunctionDef,
    ClassDef,
    Return,
    If,
    For,
    While,
    Try,
    With,
    Global,
    Nonlocal,
    Pass,
    Break,
    Continue,
    Delete,
    Assert,
    Raise,
    Opaque,
  };

  Kind kind;
  int line = 0;
  size_t begin = 0;
  size_t end = 0;

  explicit Stmt(Kind k) : kind(k) {}
  virtual ~Stmt() = default;
};

struct ExprStmt : Stmt {
  ExprStmt() : Stmt(Kind::Expr) {}
  ExprPtr value;
};

struct AssignStmt : Stmt {
  AssignStmt() : Stmt(Kind::Assign) {}
  std::vector<ExprPtr> targets; // a = b = value has two targets
  ExprPtr value;
};

struct AugAssignStmt : Stmt {
  AugAssignStmt() : Stmt(Kind::AugAssign) {}
  ExprPtr target;
  std::string op;
  ExprPtr value;
};

struct AnnAssignStmt : Stmt {
  AnnAssignStmt() : Stmt(Kind::AnnAssign) {}
  ExprPtr target;
  ExprPtr annotation;
  ExprPtr value; // may be null
};

struct ImportItem {
  std::string module; // dotted path
  std::string alias;  // bound name (defaults to first path component)
};

struct ImportStmt : Stmt {
  ImportStmt() : Stmt(Kind::Import) {}
  std::vector<ImportItem> items;
};

struct ImportFromStmt : Stmt {
  ImportFromStmt() : Stmt(Kind::ImportFrom) {}
  std::string module; // empty for pure-relative imports
  int level = 0;      // leading dots
  bool star = false;
  std::vector<ImportItem> names; // item.module is the imported name here
};

struct FunctionDefStmt : Stmt {
  FunctionDefStmt() : Stmt(Kind::FunctionDef) {}
  std::string name;
  std::vector<Param> params;
  Block body;
  std::vector<ExprPtr> decorators;
  int scope_id = -1;
  int symbol_id = -1; // filled by the EAG builder
};

struct ClassDefStmt : Stmt {
  ClassDefStmt() : Stmt(Kind::ClassDef) {}
  std::string name;
  std::vector<ExprPtr> bases;
  Block body;
  std::vector<ExprPtr> decorators;
  int scope_id = -1;
  int symbol_id = -1;
};

struct ReturnStmt : Stmt {
  ReturnStmt() : Stmt(Kind::Return) {}
  ExprPtr value; // may be null
};

struct IfStmt : Stmt {
  IfStmt() : Stmt(Kind::If) {}
  ExprPtr test;
  Block body;
  Block orelse; // elif chains become a nested If here
};

struct ForStmt : Stmt {
  ForStmt() : Stmt(Kind::For) {}
  ExprPtr target;
  ExprPtr iter;
  Block body;
  Block orelse;
};

struct WhileStmt : Stmt {
  WhileStmt() : Stmt(Kind::While) {}
  ExprPtr test;
  Block body;
  Block orelse;
};

struct ExceptHandler {
  ExprPtr type;     // may be null
  std::string name; // may be empty
  Block body;
  int line = 0;
};

struct TryStmt : Stmt {
  TryStmt() : Stmt(Kind::Try) {}
  Block body;
  std::vector<ExceptHandler> handlers;
  Block orelse;
  Block finally;
};

struct WithItem {
  ExprPtr context;
  ExprPtr target; // may be null
};

struct WithStmt : Stmt {
  WithStmt() : Stmt(Kind::With) {}
  std::vector<WithItem> items;
  Block body;
};

struct ScopeDeclStmt : Stmt { // global / nonlocal
  explicit ScopeDeclStmt(Kind k) : Stmt(k) {}
  std::vector<std::string> names;
};

struct SimpleStmt : Stmt { // pass/break/continue
  explicit SimpleStmt(Kind k) : Stmt(k) {}
};

struct ExprListStmt : Stmt { // del/assert/raise carry expressions only
  explicit ExprListStmt(Kind k) : Stmt(k) {}
  std::vector<ExprPtr> values;
};

struct OpaqueStmt : Stmt {
  OpaqueStmt() : Stmt(Kind::Opaque) {}
  std::string text;
};

// ---------------------------------------------------------------------------

struct Scope {
  enum class Kind { Module, Function, Class, Lambda, Comprehension };
  Kind kind = Kind::Module;
  int id = 0;
  int parent = -1; // -1 for the module scope
  std::string name; // path component ("f", "C", "<lambda:12>", ...)
  std::set<std::string> bindings;
  std::set<std::string> globals;    // names declared global here
  std::set<std::string> nonlocals;  // names declared nonlocal here
};

struct ModuleIR {
  Block body;
  std::vector<Scope> scopes; // scopes[0] is the module scope

  const Scope& scope(int id) const { return scopes[static_cast<size_t>(id)]; }

  // dotted path of a scope, e.g. "outer.inner" or "C.m"
  std::string scope_path(int id) const;
};

} // namespace headergen
