#include "doctest.h"

#include "headergen/error.hpp"
#include "headergen/parser.hpp"
#include "headergen/stubdb.hpp"

using namespace headergen;

namespace {

TypeStubDB db_from(const std::string& text) {
  TypeStubDB db;
  db.add_package(parse_json_checked(text, "inline", ErrorKind::StubFormat), "inline");
  db.finalize();
  return db;
}

const char* kSeabornish = R"({
  "package": "seaborn",
  "exports": {"seaborn.load_dataset": "seaborn.utils.load_dataset"},
  "functions": {"seaborn.utils.load_dataset": {"returns": ["pandas.core.frame.DataFrame"]}},
  "classes": {}
})";

} // namespace

TEST_CASE("stub files load and resolve exports") {
  TypeStubDB db = db_from(kSeabornish);
  REQUIRE(db.function("seaborn.utils.load_dataset") != nullptr);
  auto resolved = db.resolve_export("seaborn.load_dataset");
  REQUIRE(resolved.has_value());
  CHECK(*resolved == "seaborn.utils.load_dataset");
}

TEST_CASE("empty stub dir yields an empty DB") {
  TypeStubDB db;
  db.finalize();
  CHECK(db.empty());
  CHECK_FALSE(db.resolve_export("anything").has_value());
}

TEST_CASE("duplicate fqns across packages are rejected") {
  TypeStubDB db;
  db.add_package(parse_json_checked(R"({"package":"a","functions":{"pandas.read_csv":{"returns":["x"]}}})",
                                    "a", ErrorKind::StubFormat),
                 "a");
  db.add_package(parse_json_checked(R"({"package":"b","functions":{"pandas.read_csv":{"returns":["y"]}}})",
                                    "b", ErrorKind::StubFormat),
                 "b");
  CHECK_THROWS_AS(db.finalize(), Error);
}

TEST_CASE("unknown stub keys are rejected") {
  CHECK_THROWS_WITH_AS(db_from(R"({"package":"p","bogus":{}})"),
                       doctest::Contains("unknown key"), Error);
  CHECK_THROWS_AS(db_from(R"({"package":"p","functions":{"p.f":{"returns":[],"extra":1}}})"),
                  Error);
}

TEST_CASE("export cycles are rejected with a diagnostic") {
  CHECK_THROWS_WITH_AS(
      db_from(R"({"package":"p","exports":{"p.a":"p.b","p.b":"p.a"}})"),
      doctest::Contains("cycle"), Error);
}

TEST_CASE("dangling export targets are rejected") {
  CHECK_THROWS_WITH_AS(db_from(R"({"package":"p","exports":{"p.a":"p.nowhere"}})"),
                       doctest::Contains("undeclared"), Error);
}

TEST_CASE("resolve_fqn expands aliases then walks export chains") {
  TypeStubDB db = db_from(kSeabornish);
  ModuleIR ir = parse_module("import seaborn as sns\n");
  ImportTable imports = build_import_table(ir);

  auto fqn = resolve_fqn(imports, ir, 0, "sns.load_dataset", db);
  REQUIRE(fqn.has_value());
  CHECK(*fqn == "seaborn.utils.load_dataset");

  CHECK_FALSE(resolve_fqn(imports, ir, 0, "np.reshape", db).has_value());
}

TEST_CASE("resolve_fqn follows two-hop export chains") {
  TypeStubDB db = db_from(R"({
    "package": "pkg",
    "exports": {"pkg.name": "pkg.api.name", "pkg.api.name": "pkg.impl.name"},
    "functions": {"pkg.impl.name": {"returns": ["pkg.T"]}},
    "classes": {"pkg.T": {}}
  })");
  ModuleIR ir = parse_module("import pkg\n");
  ImportTable imports = build_import_table(ir);
  auto fqn = resolve_fqn(imports, ir, 0, "pkg.name", db);
  REQUIRE(fqn.has_value());
  CHECK(*fqn == "pkg.impl.name");
}

TEST_CASE("identity resolution for declared fqns") {
  TypeStubDB db = db_from(R"({"package":"numpy","functions":{"numpy.reshape":{"returns":["numpy.ndarray"]}}})");
  ModuleIR ir = parse_module("import numpy\n");
  ImportTable imports = build_import_table(ir);
  auto fqn = resolve_fqn(imports, ir, 0, "numpy.reshape", db);
  REQUIRE(fqn.has_value());
  CHECK(*fqn == "numpy.reshape");
}

TEST_CASE("return_type yields the declared union in canonical order") {
  TypeStubDB db = db_from(R"({
    "package": "p",
    "functions": {"p.poly": {"returns": ["p.Z", "p.A", "p.Z"]}},
    "classes": {"p.C": {"methods": {"isnull": {"returns": ["p.Series", "p.Frame"]}}}}
  })");
  auto returns = return_type(db, "p.poly");
  REQUIRE(returns.has_value());
  CHECK(*returns == std::vector<std::string>{"p.A", "p.Z"});

  auto method = return_type(db, "p.C.isnull");
  REQUIRE(method.has_value());
  CHECK(method->size() == 2);

  CHECK_FALSE(return_type(db, "p.nosuch").has_value());
}

TEST_CASE("member_type looks up attributes and methods directly") {
  TypeStubDB db = db_from(R"({
    "package": "pandas",
    "classes": {
      "pandas.core.frame.DataFrame": {"attributes": {"values": "numpy.ndarray"}},
      "numpy.ndarray": {"methods": {"astype": {"returns": ["numpy.ndarray"]}}}
    }
  })");
  auto values = member_type(db, "pandas.core.frame.DataFrame", "values");
  REQUIRE(std::holds_alternative<std::string>(values));
  CHECK(std::get<std::string>(values) == "numpy.ndarray");

  auto astype = member_type(db, "numpy.ndarray", "astype");
  REQUIRE(std::holds_alternative<const FunctionStub*>(astype));
  CHECK(std::get<const FunctionStub*>(astype)->returns ==
        std::vector<std::string>{"numpy.ndarray"});

  CHECK(std::holds_alternative<MemberUnresolved>(
      member_type(db, "pandas.core.frame.DataFrame", "nosuch")));
  CHECK(std::holds_alternative<MemberUnresolved>(member_type(db, "ghost.Class", "x")));
}

TEST_CASE("star import resolution goes through the export table") {
  TypeStubDB db = db_from(kSeabornish);
  ModuleIR ir = parse_module("from seaborn import *\n");
  ImportTable imports = build_import_table(ir);
  auto fqn = resolve_fqn(imports, ir, 0, "load_dataset", db);
  REQUIRE(fqn.has_value());
  CHECK(*fqn == "seaborn.utils.load_dataset");
  CHECK_FALSE(resolve_fqn(imports, ir, 0, "not_exported", db).has_value());
}
