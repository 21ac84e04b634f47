#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "fixtures.hpp"
#include "trg/cli.hpp"
#include "trg/corpus.hpp"

using namespace trg;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "trg");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string c4_path() { return (fixtures::data_dir() / "c4.jsonl").string(); }

fs::path trained_c4(const std::string& name) {
  const fs::path dir = fixtures::scratch(name) / "model";
  REQUIRE(run({"train", "--corpus", c4_path(), "--model", dir.string(), "--jobs", "1"}).code == kExitOk);
  return dir;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"align", "--corpus", c4_path()}).code == kExitUsage);
  const auto dir = fixtures::scratch("usage");
  CHECK(run({"align", "--corpus", c4_path(), "--out", (dir / "a.jsonl").string(), "--sigma", "1.01"}).code ==
        kExitUsage);
  CHECK(run({"align", "--corpus", c4_path(), "--out", (dir / "a.jsonl").string(), "--neighbourhood", "far"}).code ==
        kExitUsage);
  CHECK(run({"synth", "--templates", "x", "--n", "0", "--seed", "1", "--out", (dir / "s.jsonl").string()}).code ==
        kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("input errors") {
  const auto dir = fixtures::scratch("input");
  CHECK(run({"align", "--corpus", (dir / "missing.jsonl").string(), "--out", (dir / "a.jsonl").string()}).code ==
        kExitNoInput);
  write_file(dir / "bad.jsonl", "{\"id\":\"a\",\"text\":\"x\",\"features\":[]}\n{not json}\n");
  const auto bad = run({"align", "--corpus", (dir / "bad.jsonl").string(), "--out", (dir / "a.jsonl").string()});
  CHECK(bad.code == kExitData);
  CHECK(bad.err.find("line 2") != std::string::npos);
  CHECK(run({"inspect-triangle", "--corpus", c4_path(), "--instance", "i9", "--feature", "price=cheap"}).code ==
        kExitData);
  CHECK(run({"inspect-triangle", "--corpus", c4_path(), "--instance", "i1", "--feature", "cheap"}).code ==
        kExitUsage);
  CHECK(run({"align", "--corpus", c4_path(), "--out", "/proc/nonexistent/dir/a.jsonl"}).code == kExitIo);
}

TEST_CASE("align writes the expected segments") {
  const auto dir = fixtures::scratch("align");
  const auto r = run({"align", "--corpus", c4_path(), "--out", (dir / "a.jsonl").string()});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("aligned 4 instances, 5 feature-bearing segments") != std::string::npos);
  const std::string first = read_file(dir / "a.jsonl").substr(0, read_file(dir / "a.jsonl").find('\n'));
  CHECK(first.find("\"start\":0,\"end\":3") != std::string::npos);
}

TEST_CASE("train and generate") {
  const auto model = trained_c4("gen");
  for (const char* f : {"schemas.json", "fragments.json", "selectors.json", "aligned.jsonl", "meta.json"})
    CHECK(fs::exists(model / f));
  auto r = run({"generate", "--model", model.string(), "--features", "name=blue_door_cafe,price=cheap"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "blue door cafe is cheap .\n");
  r = run({"generate", "--model", model.string(), "--features", "name=blue_door_cafe,food=sushi", "--min-weight",
           "0.7"});
  CHECK(r.code == kExitBelowThreshold);
  CHECK(r.err.find("blue door cafe is cheap .") != std::string::npos);
  r = run({"generate", "--model", model.string(), "--features", "name=blue_door_cafe,food=sushi", "--k", "2"});
  CHECK(r.out == "blue door cafe is cheap .\nred door cafe serves sushi .\n");
  r = run({"generate", "--model", model.string(), "--features", "price=cheap", "--trace"});
  CHECK(r.code == kExitOk);
  CHECK(nlohmann::json::parse(r.out).contains("trace"));
  CHECK(run({"generate", "--model", model.string(), "--features", "priceless"}).code == kExitUsage);
  CHECK(run({"generate", "--model", model.string(), "--features", "price=cheap", "--k", "0"}).code == kExitUsage);
  CHECK(run({"generate", "--model", (model / "nope").string(), "--features", "price=cheap"}).code == kExitNoInput);
}

TEST_CASE("training is deterministic") {
  const auto a = trained_c4("det_a");
  const fs::path b = fixtures::scratch("det_b") / "model";
  REQUIRE(run({"train", "--corpus", c4_path(), "--model", b.string(), "--jobs", "3"}).code == kExitOk);
  for (const char* f : {"schemas.json", "fragments.json", "selectors.json", "aligned.jsonl", "meta.json"})
    CHECK(read_file(a / f) == read_file(b / f));
}

TEST_CASE("hand edits require validation") {
  const auto model = trained_c4("edit");
  std::string fragments = read_file(model / "fragments.json");
  const auto at = fragments.find("\"is cheap .\"");
  REQUIRE(at != std::string::npos);
  fragments.replace(at, std::string("\"is cheap .\"").size(), "\"is rather cheap .\"");
  write_file(model / "fragments.json", fragments);
  CHECK(run({"generate", "--model", model.string(), "--features", "price=cheap"}).code == kExitValidation);
  auto v = run({"validate", "--model", model.string()});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find("hand edits detected") != std::string::npos);
  CHECK(run({"generate", "--model", model.string(), "--features", "name=red_door_cafe,price=cheap"}).out ==
        "red door cafe is rather cheap .\n");

  const auto dir = model.parent_path();
  write_file(dir / "other.jsonl", read_file(c4_path()).substr(0, read_file(c4_path()).rfind("{\"id\":\"i4\"")));
  CHECK(run({"validate", "--model", model.string(), "--corpus", (dir / "other.jsonl").string()}).code ==
        kExitValidation);
  CHECK(run({"validate", "--model", model.string(), "--corpus", c4_path()}).code == kExitOk);
}

TEST_CASE("inspect-triangle") {
  auto r = run({"inspect-triangle", "--corpus", c4_path(), "--instance", "i1", "--feature", "price=cheap"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("row 6:") != std::string::npos);
  CHECK(r.out.find("cheap:1.000*") != std::string::npos);
  r = run({"inspect-triangle", "--corpus", c4_path(), "--instance", "i1", "--feature", "price=cheap", "--format",
           "svg", "--metric", "express"});
  REQUIRE(r.code == kExitOk);
  const std::regex rect("<rect[^>]*class=\"cell\"");
  CHECK(std::distance(std::sregex_iterator(r.out.begin(), r.out.end(), rect), std::sregex_iterator()) == 21);
  CHECK(run({"inspect-triangle", "--corpus", c4_path(), "--instance", "i1", "--feature", "price=cheap", "--metric",
             "lift"})
            .code == kExitUsage);
}

TEST_CASE("synth, train and eval") {
  const auto dir = fixtures::scratch("synth");
  const std::string templates = (fixtures::data_dir() / "templates.json").string();
  const std::string corpus = (dir / "s.jsonl").string();
  auto r = run({"synth", "--templates", templates, "--n", "40", "--seed", "7", "--out", corpus});
  REQUIRE(r.code == kExitOk);
  CHECK(fs::exists(corpus + ".gold.jsonl"));
  const std::string once = read_file(corpus);
  REQUIRE(run({"synth", "--templates", templates, "--n", "40", "--seed", "7", "--out", corpus}).code == kExitOk);
  CHECK(read_file(corpus) == once);

  const auto model = trained_c4("eval");
  r = run({"eval", "--model", model.string(), "--test", c4_path()});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["exact_match"].get<double>() == 1.0);
  CHECK(j["feature_coverage"].get<double>() == 1.0);

  write_file(dir / "empty.jsonl", "");
  CHECK(run({"eval", "--model", model.string(), "--test", (dir / "empty.jsonl").string()}).code == kExitNoInput);
}
