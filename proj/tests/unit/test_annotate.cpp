#include "doctest.h"

#include "headergen/annotate.hpp"
#include "headergen/pipeline.hpp"

using namespace headergen;

namespace {

const char* kTaxonomy = R"({
  "categories": {
    "Generic Operations": ["Library Loading", "Visualization"],
    "Data Preparation and Exploration": ["Data Loading", "Exploratory Data Analysis",
      "Data Cleaning Filtering", "Data Sub-sampling and Train-test Splitting"],
    "Feature Engineering": ["Feature Transformation", "Feature Selection"],
    "Model Building and Training": ["Model Training", "Model Parameter Tuning",
      "Model Validation and Assembling"]
  },
  "rules": {
    "libx.io.load": ["Data Loading"],
    "libx.Model.fit": ["Model Training"]
  },
  "table2_mapping": {
    "Feature Engineering": "Feature Transformation",
    "Data Preparation": "Data Cleaning Filtering"
  }
})";

const char* kStub = R"({
  "package": "libx",
  "exports": {"libx.load": "libx.io.load"},
  "functions": {"libx.io.load": {"returns": ["libx.data.Frame"]}},
  "classes": {
    "libx.data.Frame": {},
    "libx.Model": {"methods": {"fit": {"returns": ["libx.Model"]}}}
  }
})";

Json code_cell(const std::vector<std::string>& lines) {
  Json cell;
  cell["cell_type"] = "code";
  cell["execution_count"] = nullptr;
  cell["metadata"] = Json::object();
  cell["outputs"] = Json::array();
  Json src = Json::array();
  for (size_t i = 0; i < lines.size(); ++i) {
    src.push_back(i + 1 < lines.size() ? lines[i] + "\n" : lines[i]);
  }
  cell["source"] = std::move(src);
  return cell;
}

NotebookDoc sample_notebook() {
  Json doc;
  doc["cells"] = Json::array();
  doc["cells"].push_back(code_cell({"import libx as lx"}));
  doc["cells"].push_back(code_cell({"fr = lx.load(\"d\")"}));
  doc["cells"].push_back(code_cell({"x = 1"})); // unclassified
  Json md;
  md["cell_type"] = "markdown";
  md["metadata"] = Json::object();
  md["source"] = "user notes";
  doc["cells"].push_back(md);
  doc["cells"].push_back(code_cell({"from libx import Model", "m = Model()", "m.fit(fr)"}));
  doc["metadata"] = Json::object();
  doc["nbformat"] = 4;
  doc["nbformat_minor"] = 5;
  return parse_notebook_json(doc, "sample");
}

struct Setup {
  Setup() : taxonomy(TaxonomyDB::from_json(
                parse_json_checked(kTaxonomy, "tax", ErrorKind::TaxonomyFormat), "tax")) {
    stubs.add_package(parse_json_checked(kStub, "stub", ErrorKind::StubFormat), "stub");
    stubs.finalize();
    result = run_analysis(sample_notebook(), stubs, taxonomy);
  }
  TypeStubDB stubs;
  TaxonomyDB taxonomy;
  std::unique_ptr<AnalysisResult> result;
};

int count_marked(const NotebookDoc& nb, const std::string& kind) {
  int n = 0;
  for (const auto& cell : nb.cells) {
    if (cell.annotation_marker && (*cell.annotation_marker)["kind"] == kind) {
      ++n;
    }
  }
  return n;
}

} // namespace

TEST_CASE("headers list all top-level categories of a cell with unique anchors") {
  Setup s;
  AnnotationSet ann = build_headers(s.result->classification, s.taxonomy);
  // cell 1: imports only -> Generic Operations; cell 2: Data Loading;
  // cell 4: Library Loading + Model Training -> two categories in one header
  REQUIRE(ann.header_cells.count(1) == 1);
  REQUIRE(ann.header_cells.count(2) == 1);
  CHECK(ann.header_cells.count(3) == 0); // unclassified cell gets no header
  REQUIRE(ann.header_cells.count(4) == 1);
  CHECK(ann.header_cells.at(4).find("Generic Operations | Model Building and Training") !=
        std::string::npos);
  std::set<std::string> anchors;
  for (const auto& [ci, anchor] : ann.header_anchors) {
    CHECK(anchors.insert(anchor).second);
  }
}

TEST_CASE("duplicate header titles get distinct anchors") {
  CellClassification cls;
  cls.subs[1] = {"Model Training"};
  cls.subs[2] = {"Model Training"};
  TaxonomyDB db = TaxonomyDB::from_json(
      parse_json_checked(kTaxonomy, "tax", ErrorKind::TaxonomyFormat), "tax");
  AnnotationSet ann = build_headers(cls, db);
  REQUIRE(ann.header_anchors.size() == 2);
  CHECK(ann.header_anchors.at(1) == "model-building-and-training");
  CHECK(ann.header_anchors.at(2) == "model-building-and-training-2");
}

TEST_CASE("index lists categories with cells and strikes out empty ones") {
  Setup s;
  AnnotationSet ann = build_headers(s.result->classification, s.taxonomy);
  build_index(ann, s.result->classification, s.result->report, s.taxonomy, {});
  CHECK(ann.index_cell.find("<s>Feature Engineering</s>") != std::string::npos);
  CHECK(ann.index_cell.find("Model Building and Training") != std::string::npos);
  CHECK(ann.index_cell.find("goto cell # 4") != std::string::npos);
  CHECK(ann.index_cell.find("libx.Model.fit") != std::string::npos);
  CHECK(ann.index_cell.find("back to top") != std::string::npos);
}

TEST_CASE("index renders docstring details when a sidecar is supplied") {
  Setup s;
  AnnotationSet ann = build_headers(s.result->classification, s.taxonomy);
  std::map<std::string, std::string> docs{{"libx.io.load", "Loads a dataset."}};
  build_index(ann, s.result->classification, s.result->report, s.taxonomy, docs);
  CHECK(ann.index_cell.find("Loads a dataset.") != std::string::npos);
}

TEST_CASE("toc links every header in cell order") {
  Setup s;
  AnnotationSet ann = build_headers(s.result->classification, s.taxonomy);
  build_toc(ann);
  CHECK(ann.toc_cell.find("(#" + ann.header_anchors.at(1) + ")") != std::string::npos);
  CHECK(ann.toc_cell.find("(#" + ann.header_anchors.at(4) + ")") != std::string::npos);
  size_t first = ann.toc_cell.find("Cell 1");
  size_t last = ann.toc_cell.find("Cell 4");
  CHECK(first < last);
}

TEST_CASE("toc is omitted when there are no headers") {
  AnnotationSet ann;
  build_toc(ann);
  CHECK(ann.toc_cell.empty());
}

TEST_CASE("apply splices cells and is idempotent") {
  Setup s;
  NotebookDoc annotated = annotate_notebook(*s.result, s.taxonomy, {});
  CHECK(count_marked(annotated, "index") == 1);
  CHECK(count_marked(annotated, "toc") == 1);
  CHECK(count_marked(annotated, "header") == 3);

  // code cells preserved in order with identical sources
  std::vector<std::string> before;
  for (const auto& cell : s.result->nb.cells) {
    if (cell.is_code()) {
      before.push_back(cell.source);
    }
  }
  std::vector<std::string> after;
  for (const auto& cell : annotated.cells) {
    if (cell.is_code()) {
      after.push_back(cell.source);
    }
  }
  CHECK(before == after);

  // user markdown untouched
  bool found_user_md = false;
  for (const auto& cell : annotated.cells) {
    if (cell.kind == CellKind::Markdown && !cell.annotation_marker) {
      found_user_md = true;
      CHECK(cell.source == "user notes");
    }
  }
  CHECK(found_user_md);

  // re-analyzing the annotated notebook and re-applying changes nothing
  auto again = run_analysis(annotated, *s.result->eag.stubs, s.taxonomy);
  NotebookDoc twice = annotate_notebook(*again, s.taxonomy, {});
  CHECK(notebook_to_string(twice) == notebook_to_string(annotated));
}

TEST_CASE("empty annotation set leaves the notebook unchanged") {
  Setup s;
  AnnotationSet none;
  NotebookDoc out = apply(s.result->nb, none);
  CHECK(notebook_to_string(out) == notebook_to_string(s.result->nb));
}

TEST_CASE("anchor integrity: every link target exists exactly once") {
  Setup s;
  NotebookDoc annotated = annotate_notebook(*s.result, s.taxonomy, {});
  std::string all;
  for (const auto& cell : annotated.cells) {
    all += cell.source;
    all += "\n";
  }
  // collect link targets and anchors
  std::set<std::string> targets;
  size_t pos = 0;
  while ((pos = all.find("href=\"#", pos)) != std::string::npos) {
    pos += 7;
    targets.insert(all.substr(pos, all.find('"', pos) - pos));
  }
  pos = 0;
  std::map<std::string, int> anchors;
  while ((pos = all.find("<a id=\"", pos)) != std::string::npos) {
    pos += 7;
    anchors[all.substr(pos, all.find('"', pos) - pos)]++;
  }
  pos = 0;
  while ((pos = all.find("](#", pos)) != std::string::npos) {
    pos += 3;
    targets.insert(all.substr(pos, all.find(')', pos) - pos));
  }
  for (const auto& target : targets) {
    INFO("target " << target);
    CHECK(anchors[target] == 1);
  }
}

TEST_CASE("slugify produces stable anchor text") {
  CHECK(slugify("Model Building and Training") == "model-building-and-training");
  CHECK(slugify("A | B") == "a-b");
  CHECK(slugify("--") == "section");
}
