#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "headergen/defuse.hpp"
#include "headergen/json_util.hpp"

namespace headergen {

struct FunctionStub {
  std::string fqn;
  std::vector<std::string> returns; // sorted, unique, non-empty
};

struct ClassStub {
  std::string fqn;
  std::map<std::string, std::string> attributes; // name -> type fqn
  std::map<std::string, FunctionStub> methods;   // name -> stub (fqn = class.name)
};

struct PackageStub {
  std::string package_name;
  std::map<std::string, std::string> exports; // public fqn -> defining fqn
  std::map<std::string, FunctionStub> functions;
  std::map<std::string, ClassStub> classes;
};

// Reserved method names interpreted structurally by the analysis: the
// result type of `obj[index]` is looked up by the syntactic form of the
// index, falling back to plain __getitem__.
inline constexpr const char* kGetItemScalar = "__getitem_scalar__";
inline constexpr const char* kGetItemList = "__getitem_list__";
inline constexpr const char* kGetItemSlice = "__getitem_slice__";
inline constexpr const char* kGetItemMask = "__getitem_mask__";
inline constexpr const char* kGetItem = "__getitem__";
// Optional catch-all attribute type (dataframe column access via dot).
inline constexpr const char* kGetAttrFallback = "__getattr__";

class TypeStubDB {
public:
  static TypeStubDB load_dir(const std::string& dir);
  // Parses one stub document and merges it (tests, load_dir).
  void add_package(const Json& doc, const std::string& context);
  // Validates export acyclicity/targets and builds indices.
  void finalize();

  bool empty() const { return packages_.empty(); }
  const std::map<std::string, PackageStub>& packages() const { return packages_; }

  const FunctionStub* function(const std::string& fqn) const;
  const ClassStub* cls(const std::string& fqn) const;
  bool has_package(const std::string& name) const { return packages_.count(name) > 0; }

  // Transitively resolves through export tables until a declared function
  // or class is reached; identity for already-declared fqns.
  std::optional<std::string> resolve_export(const std::string& fqn) const;

  // Public names offered by a package's export table (star imports).
  std::vector<std::string> public_names(const std::string& package) const;
  std::optional<std::string> star_target(const std::string& package,
                                         const std::string& name) const;

private:
  std::map<std::string, PackageStub> packages_;
  std::map<std::string, const FunctionStub*> function_index_;
  std::map<std::string, const ClassStub*> class_index_;
  std::map<std::string, std::string> export_index_;
};

// Alias expansion + transitive export resolution of a dotted call path.
// Returns the defining fqn or nullopt.
std::optional<std::string> resolve_fqn(const ImportTable& imports, const ModuleIR& ir,
                                       int scope_id, const std::string& dotted_call,
                                       const TypeStubDB& db);

// Declared return union of a function or method fqn; canonical order.
std::optional<std::vector<std::string>> return_type(const TypeStubDB& db,
                                                    const std::string& fqn);

struct MemberUnresolved {};
using MemberType = std::variant<MemberUnresolved, std::string, const FunctionStub*>;

// Direct lookup, no inheritance traversal: attribute type fqn, method stub,
// or unresolved.
MemberType member_type(const TypeStubDB& db, const std::string& class_fqn,
                       const std::string& member_name);

// Docstring sidecar (fqn -> text), optional file inside the stub directory.
std::map<std::string, std::string> load_docstrings(const std::string& dir);

} // namespace headergen
