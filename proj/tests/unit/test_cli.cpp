#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "headergen/cli.hpp"
#include "headergen/json_util.hpp"
#include "headergen/notebook.hpp"

using namespace headergen;
namespace fs = std::filesystem;

namespace {

struct TempTree {
  TempTree() {
    root = fs::temp_directory_path() / ("hg_cli_" + std::to_string(counter++));
    fs::create_directories(root / "stubs");
    write_file((root / "stubs" / "libx.stub.json").string(), R"({
      "package": "libx",
      "exports": {"libx.load": "libx.io.load"},
      "functions": {"libx.io.load": {"returns": ["libx.data.Frame"]}},
      "classes": {"libx.data.Frame": {"methods": {"copy": {"returns": ["libx.data.Frame"]}}}}
    })");
    write_file((root / "taxonomy.json").string(), R"({
      "categories": {
        "Generic Operations": ["Library Loading", "Visualization"],
        "Data Preparation and Exploration": ["Data Loading", "Exploratory Data Analysis",
          "Data Cleaning Filtering", "Data Sub-sampling and Train-test Splitting"],
        "Feature Engineering": ["Feature Transformation", "Feature Selection"],
        "Model Building and Training": ["Model Training", "Model Parameter Tuning",
          "Model Validation and Assembling"]
      },
      "rules": {"libx.io.load": ["Data Loading"]},
      "table2_mapping": {"Feature Engineering": "Feature Transformation",
                         "Data Preparation": "Data Cleaning Filtering"}
    })");
    Json nb;
    nb["cells"] = Json::array();
    Json cell;
    cell["cell_type"] = "code";
    cell["execution_count"] = nullptr;
    cell["metadata"] = Json::object();
    cell["outputs"] = Json::array();
    cell["source"] = std::vector<std::string>{"import libx as lx\n", "fr = lx.load(\"d\")"};
    nb["cells"].push_back(cell);
    nb["metadata"] = Json::object();
    nb["nbformat"] = 4;
    nb["nbformat_minor"] = 5;
    write_file((root / "nb.ipynb").string(), nb.dump());
  }
  ~TempTree() { fs::remove_all(root); }

  RunConfig config() const {
    RunConfig c;
    c.stubs_dir = (root / "stubs").string();
    c.taxonomy_path = (root / "taxonomy.json").string();
    return c;
  }

  fs::path root;
  static int counter;
};

int TempTree::counter = 0;

} // namespace

TEST_CASE("cmd_analyze writes a deterministic report and exits 0") {
  TempTree tree;
  std::ostringstream out1, out2, err;
  int rc1 = cmd_analyze((tree.root / "nb.ipynb").string(), tree.config(), out1, err);
  int rc2 = cmd_analyze((tree.root / "nb.ipynb").string(), tree.config(), out2, err);
  CHECK(rc1 == 0);
  CHECK(rc2 == 0);
  CHECK(out1.str() == out2.str());
  Json doc = Json::parse(out1.str());
  CHECK(doc["cells"]["1"]["2"][0] == "libx.io.load");
}

TEST_CASE("cmd_analyze exits 2 on a missing stub dir and malformed notebook") {
  TempTree tree;
  std::ostringstream out, err;
  RunConfig bad = tree.config();
  bad.stubs_dir = (tree.root / "no_such_dir").string();
  CHECK(cmd_analyze((tree.root / "nb.ipynb").string(), bad, out, err) == 2);

  write_file((tree.root / "broken.ipynb").string(), "{oops");
  CHECK(cmd_analyze((tree.root / "broken.ipynb").string(), tree.config(), out, err) == 2);

  CHECK(cmd_analyze((tree.root / "missing.ipynb").string(), tree.config(), out, err) == 2);
}

TEST_CASE("empty notebook analyzes to an empty report") {
  TempTree tree;
  Json nb;
  nb["cells"] = Json::array();
  nb["metadata"] = Json::object();
  nb["nbformat"] = 4;
  nb["nbformat_minor"] = 5;
  write_file((tree.root / "empty.ipynb").string(), nb.dump());
  std::ostringstream out, err;
  CHECK(cmd_analyze((tree.root / "empty.ipynb").string(), tree.config(), out, err) == 0);
  Json doc = Json::parse(out.str());
  CHECK(doc["cells"].empty());
}

TEST_CASE("cmd_annotate writes a file, and report-only writes nothing") {
  TempTree tree;
  std::ostringstream out, err;
  RunConfig config = tree.config();
  config.mode = OutputMode::OutPath;
  config.out_path = (tree.root / "annotated.ipynb").string();
  CHECK(cmd_annotate((tree.root / "nb.ipynb").string(), config, out, err) == 0);
  CHECK(fs::exists(config.out_path));

  // rerun on its own output: byte-identical
  RunConfig again = config;
  again.out_path = (tree.root / "annotated2.ipynb").string();
  CHECK(cmd_annotate(config.out_path, again, out, err) == 0);
  CHECK(read_file(config.out_path) == read_file(again.out_path));

  RunConfig report_only = tree.config();
  report_only.mode = OutputMode::ReportOnly;
  std::ostringstream out2;
  CHECK(cmd_annotate((tree.root / "nb.ipynb").string(), report_only, out2, err) == 0);
  CHECK(!out2.str().empty());
  CHECK_FALSE(fs::exists(tree.root / "nb.ipynb.out"));
}

TEST_CASE("cmd_annotate --dump-eag writes a DOT file") {
  TempTree tree;
  std::ostringstream out, err;
  RunConfig config = tree.config();
  config.mode = OutputMode::ReportOnly;
  config.dump_eag_path = (tree.root / "graph.dot").string();
  CHECK(cmd_annotate((tree.root / "nb.ipynb").string(), config, out, err) == 0);
  CHECK(read_file(config.dump_eag_path).find("digraph") == 0);
}

TEST_CASE("batch annotate continues past broken notebooks") {
  TempTree tree;
  fs::create_directories(tree.root / "batch");
  fs::copy_file(tree.root / "nb.ipynb", tree.root / "batch" / "good.ipynb");
  write_file((tree.root / "batch" / "bad.ipynb").string(), "{nope");
  fs::create_directories(tree.root / "out");

  RunConfig config = tree.config();
  config.mode = OutputMode::OutPath;
  config.out_path = (tree.root / "out").string();
  std::ostringstream out, err;
  int rc = cmd_annotate((tree.root / "batch").string(), config, out, err);
  CHECK(rc == 2); // a failure happened...
  CHECK(fs::exists(tree.root / "out" / "good.ipynb")); // ...but the good one was written
}

TEST_CASE("cmd_eval scores report vs truth files") {
  TempTree tree;
  write_file((tree.root / "found.json").string(), R"({"cells": {"1": {"1": ["a", "b"]}}})");
  write_file((tree.root / "truth.json").string(), R"({"cells": {"1": {"1": ["a"]}}})");
  std::ostringstream out, err;
  CHECK(cmd_eval((tree.root / "found.json").string(), (tree.root / "truth.json").string(),
                 out, err) == 0);
  Json doc = Json::parse(out.str());
  CHECK(doc["tp"] == 1);
  CHECK(doc["fp"] == 1);
  CHECK(doc["fn"] == 0);

  // identical files: perfect score
  std::ostringstream out2;
  CHECK(cmd_eval((tree.root / "truth.json").string(), (tree.root / "truth.json").string(),
                 out2, err) == 0);
  Json doc2 = Json::parse(out2.str());
  CHECK(doc2["precision"] == 1.0);
  CHECK(doc2["recall"] == 1.0);

  CHECK(cmd_eval((tree.root / "nope.json").string(), (tree.root / "truth.json").string(),
                 out, err) == 2);
}

TEST_CASE("cmd_bench reports per-case soundness and exits 0 regardless") {
  TempTree tree;
  fs::create_directories(tree.root / "suite" / "perfect");
  fs::copy_file(tree.root / "nb.ipynb", tree.root / "suite" / "perfect" / "case.ipynb");
  write_file((tree.root / "suite" / "perfect" / "truth.json").string(),
             R"({"cells": {"1": {"2": ["libx.io.load"]}}})");
  fs::create_directories(tree.root / "suite" / "failing");
  fs::copy_file(tree.root / "nb.ipynb", tree.root / "suite" / "failing" / "case.ipynb");
  write_file((tree.root / "suite" / "failing" / "truth.json").string(),
             R"({"cells": {"1": {"2": ["libx.io.load", "libx.hidden"]}}})");
  write_file((tree.root / "suite" / "failing" / "meta.json").string(),
             R"({"expected_unsound": "decorators"})");

  RunConfig config = tree.config();
  config.json_output = true;
  std::ostringstream out, err;
  CHECK(cmd_bench((tree.root / "suite").string(), config, out, err) == 0);
  Json doc = Json::parse(out.str());
  CHECK(doc["total"] == 2);
  CHECK(doc["sound"] == 1);
  CHECK(doc["complete"] == 2);
  CHECK(doc["cases"][0]["name"] == "failing");
  CHECK(doc["cases"][0]["expected_unsound"] == "decorators");

  // table output too
  RunConfig table = tree.config();
  std::ostringstream out2;
  CHECK(cmd_bench((tree.root / "suite").string(), table, out2, err) == 0);
  CHECK(out2.str().find("sound: 1") != std::string::npos);
}
