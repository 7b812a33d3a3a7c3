#include <fstream>
#include <sstream>

#include "cli_commands.hpp"
#include "doctest.h"
#include "glc/dataset.hpp"
#include "glc/evaluation.hpp"
#include "glc/geometry_export.hpp"
#include "glc/layout.hpp"
#include "support.hpp"

using namespace glc;
using glc::test::data_path;
using glc::test::scratch_dir;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "glc");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  int code = glc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::string kIris = data_path("iris.csv").string();

}  // namespace

TEST_CASE("cli normalize") {
  auto dir = scratch_dir("cli_normalize");
  Outcome r = invoke({"normalize", kIris, (dir / "n.csv").string()});
  CHECK(r.code == 0);
  RawDataset raw = load_dataset(dir / "n.csv");
  CHECK(raw.size() == 150);
  CHECK(raw.rows[0][0] == doctest::Approx(0.2222222222));
}

TEST_CASE("cli layout writes svg and geometry") {
  auto dir = scratch_dir("cli_layout");
  Outcome r = invoke({"layout", kIris, "--kind", "dcc", "--coeff", "1,2,1,0.5", "--invert", "1", "--order", "3,2,1,0",
                   "--svg", (dir / "g.svg").string(), "--geometry", (dir / "g.json").string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "g.svg").find("<svg") != std::string::npos);
  Layout l = load_geometry(slurp(dir / "g.json"));
  CHECK(l.kind == GlcKind::dcc);
  CHECK(l.config.coefficients == std::vector<double>{1, 2, 1, 0.5});
  CHECK(l.config.inverted[1]);
  auto back = invert_layout(l);
  CHECK(std::abs(back[0].values[0] - 0.2222222222222222) < 1e-9);

  Outcome stdout_geometry = invoke({"layout", kIris, "--kind", "spc"});
  CHECK(stdout_geometry.code == 0);
  CHECK(load_geometry(stdout_geometry.out).glyphs.size() == 150);
}

TEST_CASE("cli purity and rules") {
  Outcome p = invoke({"purity", kIris, "--min-support", "3"});
  CHECK(p.code == 0);
  CHECK(p.out.rfind("coordinate,lo,hi,class,purity,support", 0) == 0);
  CHECK(p.out.find("Setosa,1,50") != std::string::npos);

  Outcome r = invoke({"rules", kIris, "--min-support", "5", "--slope-positive", "Versicolor", "--slope-negative",
                   "Virginica"});
  CHECK(r.code == 0);
  CHECK(r.out.find("THEN Setosa") != std::string::npos);
}

TEST_CASE("cli sdg writes an extended dataset") {
  auto dir = scratch_dir("cli_sdg");
  Outcome r = invoke({"sdg", kIris, "--strategy", "in_bounds_proportional", "--class", "Setosa", "--count", "12",
                   "--seed", "4", "--out", (dir / "ext.csv").string()});
  REQUIRE(r.code == 0);
  RawDataset raw = load_dataset(dir / "ext.csv");
  CHECK(raw.size() == 162);
  CHECK(raw.provenance.back() == Provenance::synthetic);

  Outcome again = invoke({"sdg", kIris, "--strategy", "in_bounds_proportional", "--class", "Setosa", "--count", "12",
                       "--seed", "4", "--out", (dir / "ext2.csv").string()});
  CHECK(again.code == 0);
  CHECK(slurp(dir / "ext.csv") == slurp(dir / "ext2.csv"));

  Outcome shift = invoke({"sdg", kIris, "--strategy", "single_shift", "--case-id", "41", "--coordinate", "1",
                       "--delta", "0.05", "--seed", "0", "--batch-only", "--out", (dir / "one.csv").string()});
  CHECK(shift.code == 0);
  CHECK(load_dataset(dir / "one.csv").size() == 1);
}

TEST_CASE("cli eval report formats") {
  auto dir = scratch_dir("cli_eval");
  Outcome r = invoke({"eval", "--train", kIris, "--explore", kIris, "--cycles", "3", "--seed", "9", "--classifiers",
                   "LDA,KNN", "--report", (dir / "r.json").string()});
  REQUIRE(r.code == 0);
  EvalReport report = parse_report(slurp(dir / "r.json"));
  CHECK(report.rows.size() == 2);
  CHECK(report.cycles == 3);
  CHECK(report.master_seed == 9);

  Outcome text = invoke({"eval", "--train", kIris, "--explore", kIris, "--cycles", "2", "--classifiers", "NB"});
  CHECK(text.code == 0);
  CHECK(text.out.find("Model | CV Mean Acc.") != std::string::npos);
}

TEST_CASE("cli pipeline") {
  auto dir = scratch_dir("cli_pipeline");
  std::ofstream(dir / "config.json") << R"({
    "dataset": ")" << kIris << R"(",
    "pipeline": {"eval": {"cycles": 2}, "max_iterations": 2, "classifiers": [{"variant": "knn"}]},
    "automatic": {"tolerance": 1.0, "rotation": ["pc", "scc"]},
    "log": "log.json",
    "transcript": "log.txt",
    "out": "final.csv"
  })";
  Outcome r = invoke({"pipeline", "--config", (dir / "config.json").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("GLC sequence: pc scc") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "log.json"));
  CHECK(slurp(dir / "log.txt") == r.out.substr(0, slurp(dir / "log.txt").size()));
  CHECK(load_dataset(dir / "final.csv").size() > 150);
}

TEST_CASE("cli exit codes") {
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"layout"}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"layout", "/no/such/file.csv"}).code == 2);
  CHECK(invoke({"layout", kIris, "--kind", "hex"}).code == 2);
  CHECK(invoke({"sdg", kIris, "--strategy", "unbounded", "--seed", "x", "--out", "/tmp/x.csv"}).code == 2);
  CHECK(invoke({"eval", "--train", kIris, "--explore", kIris, "--folds", "99"}).code == 2);

  auto dir = scratch_dir("cli_codes");
  std::ofstream(dir / "bad.csv") << "a,b,class\n1,zz,X\n";
  Outcome bad = invoke({"purity", (dir / "bad.csv").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("row 2, column 2") != std::string::npos);

  Outcome unwritable = invoke({"normalize", kIris, "/proc/no_such_dir/out.csv"});
  CHECK(unwritable.code == 1);
}
