#include "headergen/stubdb.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "headergen/error.hpp"

namespace fs = std::filesystem;

namespace headergen {

namespace {

void check_keys(const Json& obj, const std::set<std::string>& allowed,
                const std::string& context, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      fail(ErrorKind::StubFormat, context + ": unknown key \"" + key + "\" in " + where);
    }
  }
}

std::vector<std::string> parse_returns(const Json& obj, const std::string& context,
                                       const std::string& where) {
  check_keys(obj, {"returns"}, context, where);
  if (!obj.contains("returns") || !obj["returns"].is_array() || obj["returns"].empty()) {
    fail(ErrorKind::StubFormat, context + ": " + where + " needs a non-empty returns array");
  }
  std::vector<std::string> returns;
  for (const auto& r : obj["returns"]) {
    if (!r.is_string()) {
      fail(ErrorKind::StubFormat, context + ": " + where + " returns must be strings");
    }
    returns.push_back(r.get<std::string>());
  }
  std::sort(returns.begin(), returns.end());
  returns.erase(std::unique(returns.begin(), returns.end()), returns.end());
  return returns;
}

} // namespace

void TypeStubDB::add_package(const Json& doc, const std::string& context) {
  if (!doc.is_object()) {
    fail(ErrorKind::StubFormat, context + ": stub root must be an object");
  }
  check_keys(doc, {"package", "exports", "functions", "classes"}, context, "stub root");
  if (!doc.contains("package") || !doc["package"].is_string()) {
    fail(ErrorKind::StubFormat, context + ": missing string \"package\"");
  }
  PackageStub pkg;
  pkg.package_name = doc["package"].get<std::string>();
  if (packages_.count(pkg.package_name)) {
    fail(ErrorKind::DuplicateFqn, context + ": package \"" + pkg.package_name + "\" loaded twice");
  }

  if (doc.contains("exports")) {
    if (!doc["exports"].is_object()) {
      fail(ErrorKind::StubFormat, context + ": exports must be an object");
    }
    for (const auto& [pub, target] : doc["exports"].items()) {
      if (!target.is_string()) {
        fail(ErrorKind::StubFormat, context + ": export target for " + pub + " must be a string");
      }
      pkg.exports[pub] = target.get<std::string>();
    }
  }
  if (doc.contains("functions")) {
    if (!doc["functions"].is_object()) {
      fail(ErrorKind::StubFormat, context + ": functions must be an object");
    }
    for (const auto& [fqn, body] : doc["functions"].items()) {
      FunctionStub fn;
      fn.fqn = fqn;
      fn.returns = parse_returns(body, context, "function " + fqn);
      pkg.functions[fqn] = std::move(fn);
    }
  }
  if (doc.contains("classes")) {
    if (!doc["classes"].is_object()) {
      fail(ErrorKind::StubFormat, context + ": classes must be an object");
    }
    for (const auto& [fqn, body] : doc["classes"].items()) {
      check_keys(body, {"attributes", "methods"}, context, "class " + fqn);
      ClassStub cls;
      cls.fqn = fqn;
      if (body.contains("attributes")) {
        for (const auto& [name, type] : body["attributes"].items()) {
          if (!type.is_string()) {
            fail(ErrorKind::StubFormat,
                 context + ": attribute " + fqn + "." + name + " must map to a type fqn");
          }
          cls.attributes[name] = type.get<std::string>();
        }
      }
      if (body.contains("methods")) {
        for (const auto& [name, method] : body["methods"].items()) {
          FunctionStub fn;
          fn.fqn = fqn + "." + name;
          fn.returns = parse_returns(method, context, "method " + fqn + "." + name);
          cls.methods[name] = std::move(fn);
        }
      }
      pkg.classes[fqn] = std::move(cls);
    }
  }
  packages_[pkg.package_name] = std::move(pkg);
}

void TypeStubDB::finalize() {
  function_index_.clear();
  class_index_.clear();
  export_index_.clear();
  for (const auto& [pkg_name, pkg] : packages_) {
    for (const auto& [fqn, fn] : pkg.functions) {
      if (function_index_.count(fqn) || class_index_.count(fqn)) {
        fail(ErrorKind::DuplicateFqn, "duplicate fqn \"" + fqn + "\"");
      }
      function_index_[fqn] = &fn;
    }
    for (const auto& [fqn, cls] : pkg.classes) {
      if (function_index_.count(fqn) || class_index_.count(fqn)) {
        fail(ErrorKind::DuplicateFqn, "duplicate fqn \"" + fqn + "\"");
      }
      class_index_[fqn] = &cls;
    }
    for (const auto& [pub, target] : pkg.exports) {
      if (export_index_.count(pub)) {
        fail(ErrorKind::DuplicateFqn, "duplicate export \"" + pub + "\"");
      }
      export_index_[pub] = target;
    }
  }
  // every export chain must terminate in a declared function, class, or
  // class method
  auto is_declared = [this](const std::string& fqn) {
    if (function_index_.count(fqn) || class_index_.count(fqn)) {
      return true;
    }
    size_t dot = fqn.rfind('.');
    if (dot == std::string::npos) {
      return false;
    }
    auto cls = class_index_.find(fqn.substr(0, dot));
    return cls != class_index_.end() && cls->second->methods.count(fqn.substr(dot + 1)) > 0;
  };
  for (const auto& [pub, target] : export_index_) {
    std::set<std::string> seen = {pub};
    std::string current = target;
    while (true) {
      if (is_declared(current)) {
        break;
      }
      if (seen.count(current)) {
        std::string cycle;
        for (const auto& s : seen) {
          cycle += (cycle.empty() ? "" : " -> ") + s;
        }
        fail(ErrorKind::StubFormat, "export cycle: " + cycle + " -> " + current);
      }
      auto it = export_index_.find(current);
      if (it == export_index_.end()) {
        fail(ErrorKind::StubFormat,
             "export \"" + pub + "\" resolves to undeclared fqn \"" + current + "\"");
      }
      seen.insert(current);
      current = it->second;
    }
  }
}

TypeStubDB TypeStubDB::load_dir(const std::string& dir) {
  TypeStubDB db;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    fail(ErrorKind::Io, "stub directory not found: " + dir);
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 10 && name.substr(name.size() - 10) == ".stub.json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    Json doc = parse_json_checked(read_file(path), path, ErrorKind::StubFormat);
    db.add_package(doc, path);
  }
  db.finalize();
  return db;
}

const FunctionStub* TypeStubDB::function(const std::string& fqn) const {
  auto it = function_index_.find(fqn);
  return it == function_index_.end() ? nullptr : it->second;
}

const ClassStub* TypeStubDB::cls(const std::string& fqn) const {
  auto it = class_index_.find(fqn);
  return it == class_index_.end() ? nullptr : it->second;
}

std::optional<std::string> TypeStubDB::resolve_export(const std::string& fqn) const {
  std::string current = fqn;
  for (int hop = 0; hop < 64; ++hop) {
    if (function_index_.count(current) || class_index_.count(current)) {
      return current;
    }
    size_t dot = current.rfind('.');
    if (dot != std::string::npos) {
      auto cls = class_index_.find(current.substr(0, dot));
      if (cls != class_index_.end() && cls->second->methods.count(current.substr(dot + 1))) {
        return current;
      }
    }
    auto it = export_index_.find(current);
    if (it == export_index_.end()) {
      return std::nullopt;
    }
    current = it->second;
  }
  return std::nullopt; // unreachable for a finalized DB
}

std::vector<std::string> TypeStubDB::public_names(const std::string& package) const {
  std::vector<std::string> names;
  auto it = packages_.find(package);
  if (it == packages_.end()) {
    return names;
  }
  for (const auto& [pub, target] : it->second.exports) {
    size_t dot = pub.rfind('.');
    names.push_back(dot == std::string::npos ? pub : pub.substr(dot + 1));
  }
  return names;
}

std::optional<std::string> TypeStubDB::star_target(const std::string& package,
                                                   const std::string& name) const {
  auto it = packages_.find(package);
  if (it == packages_.end()) {
    return std::nullopt;
  }
  auto hit = it->second.exports.find(package + "." + name);
  if (hit == it->second.exports.end()) {
    return std::nullopt;
  }
  return resolve_export(package + "." + name);
}

std::optional<std::string> resolve_fqn(const ImportTable& imports, const ModuleIR& ir,
                                       int scope_id, const std::string& dotted_call,
                                       const TypeStubDB& db) {
  size_t dot = dotted_call.find('.');
  const std::string head = dot == std::string::npos ? dotted_call : dotted_call.substr(0, dot);
  const std::string rest = dot == std::string::npos ? "" : dotted_call.substr(dot);

  std::string expanded;
  if (auto alias = imports.lookup(ir, scope_id, head)) {
    expanded = *alias + rest;
  } else {
    // head may come from a star import
    for (const auto& [star_scope, module] : imports.star_imports) {
      if (auto target = db.star_target(module, head)) {
        expanded = *target + rest;
        break;
      }
    }
    if (expanded.empty()) {
      return std::nullopt;
    }
  }
  return db.resolve_export(expanded);
}

std::optional<std::vector<std::string>> return_type(const TypeStubDB& db,
                                                    const std::string& fqn) {
  if (const FunctionStub* fn = db.function(fqn)) {
    return fn->returns;
  }
  // class method written as <class fqn>.<name>
  size_t dot = fqn.rfind('.');
  if (dot != std::string::npos) {
    if (const ClassStub* cls = db.cls(fqn.substr(0, dot))) {
      auto it = cls->methods.find(fqn.substr(dot + 1));
      if (it != cls->methods.end()) {
        return it->second.returns;
      }
    }
  }
  return std::nullopt;
}

MemberType member_type(const TypeStubDB& db, const std::string& class_fqn,
                       const std::string& member_name) {
  const ClassStub* cls = db.cls(class_fqn);
  if (!cls) {
    return MemberUnresolved{};
  }
  auto attr = cls->attributes.find(member_name);
  if (attr != cls->attributes.end()) {
    return attr->second;
  }
  auto method = cls->methods.find(member_name);
  if (method != cls->methods.end()) {
    return &method->second;
  }
  return MemberUnresolved{};
}

std::map<std::string, std::string> load_docstrings(const std::string& dir) {
  std::map<std::string, std::string> docs;
  const fs::path path = fs::path(dir) / "docstrings.json";
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    return docs;
  }
  Json doc = parse_json_checked(read_file(path.string()), path.string(), ErrorKind::StubFormat);
  if (!doc.is_object()) {
    fail(ErrorKind::StubFormat, path.string() + ": docstring sidecar must be an object");
  }
  for (const auto& [fqn, text] : doc.items()) {
    if (!text.is_string()) {
      fail(ErrorKind::StubFormat, path.string() + ": docstring for " + fqn + " must be a string");
    }
    docs[fqn] = text.get<std::string>();
  }
  return docs;
}

} // namespace headergen
