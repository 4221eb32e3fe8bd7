#include <doctest.h>

#include <fstream>

#include "imitate/io.hpp"
#include "support/cli.hpp"

using imitate::testing::CliResult;
using imitate::testing::fixture;
using imitate::testing::run_cli;
using imitate::testing::slurp;
using imitate::testing::TempDir;

namespace {

std::string q(const std::filesystem::path& p) { return "\"" + p.string() + "\""; }

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string plan_args(const std::string& task, const std::string& masks) {
  return "plan --labels " + q(fixture("tasks/" + task + "/labels.jsonl")) + " --masks " + q(masks) + " --corpus " +
         q(fixture("corpus.txt")) + " --lexicon " + q(fixture("lexicon.json")) + " --calibration " +
         q(fixture("calibration.json")) + " --scenario " + q(fixture("tasks/" + task + "/scenario.json"));
}

}  // namespace

TEST_CASE("filter") {
  TempDir tmp;
  auto r = run_cli("filter --labels " + q(fixture("tasks/t1_pick_place/labels.jsonl")) + " --out " + q(tmp / "k.json"), tmp);
  CHECK(r.code == 0);
  CHECK(slurp(tmp / "k.json") == "[\"idle\",\"move\",\"pick\",\"move\",\"place\"]\n");

  write(tmp / "one.jsonl", "{\"frame\":0,\"label\":\"pick\"}\n");
  r = run_cli("filter --labels " + q(tmp / "one.jsonl") + " --out " + q(tmp / "one.json"), tmp);
  CHECK(r.code == 0);
  CHECK(slurp(tmp / "one.json") == "[\"pick\"]\n");

  std::string lines;
  for (int i = 0; i < 10; ++i) {
    lines += "{\"frame\":" + std::to_string(i) + ",\"label\":\"" + (i == 6 ? "grab" : "idle") + "\"}\n";
  }
  write(tmp / "bad.jsonl", lines);
  r = run_cli("filter --labels " + q(tmp / "bad.jsonl"), tmp);
  CHECK(r.code == 2);
  CHECK(r.err.find("line 7") != std::string::npos);

  CHECK(run_cli("filter", tmp).code == 2);
  CHECK(run_cli("filter --labels " + q(fixture("tasks/t1_pick_place/labels.jsonl")) + " -w 0", tmp).code == 2);
  CHECK(run_cli("no-such-command", tmp).code == 2);
}

TEST_CASE("plan and run") {
  TempDir tmp;
  auto r = run_cli(plan_args("t1_pick_place", fixture("tasks/t1_pick_place/masks.json")) + " --out " + q(tmp / "plan.json"), tmp);
  REQUIRE(r.code == 0);
  const std::string plan = slurp(tmp / "plan.json");
  CHECK(plan.find("\"banana\"") != std::string::npos);
  CHECK(plan.find("\"plastic-box\"") != std::string::npos);

  r = run_cli("run --plan " + q(tmp / "plan.json") + " --scenario " + q(fixture("tasks/t1_pick_place/scenario.json")) +
                  " --out " + q(tmp / "trace.jsonl"),
              tmp);
  CHECK(r.code == 0);

  SUBCASE("class absent from the scenario exits 4") {
    r = run_cli("run --plan " + q(tmp / "plan.json") + " --scenario " + q(fixture("tasks/t2_push_away/scenario.json")), tmp);
    CHECK(r.code == 4);
  }
  SUBCASE("failing plan exits 1 and names the step") {
    std::string swapped = plan;
    // turn the pick into a place: place while not holding
    const auto pos = swapped.find("\"pick\"");
    REQUIRE(pos != std::string::npos);
    swapped.replace(pos, 6, "\"place\"");
    write(tmp / "bad_plan.json", swapped);
    r = run_cli("run --plan " + q(tmp / "bad_plan.json") + " --scenario " + q(fixture("tasks/t1_pick_place/scenario.json")),
                tmp);
    CHECK(r.code == 1);
    CHECK(r.err.find("step 2") != std::string::npos);
  }
  SUBCASE("push scene missing its second object exits 3") {
    auto j = imitate::read_json(fixture("tasks/t2_push_away/masks.json"));
    j["objects"].erase(1);
    write(tmp / "one_mask.json", j.dump());
    r = run_cli(plan_args("t2_push_away", (tmp / "one_mask.json").string()), tmp);
    CHECK(r.code == 3);
    CHECK(r.err.find("step 2") != std::string::npos);
  }
}

TEST_CASE("outputs are byte-identical across invocations") {
  TempDir tmp;
  const std::string common = " --fixtures " + q(fixture("tasks")) + " --corpus " + q(fixture("corpus.txt")) +
                             " --lexicon " + q(fixture("lexicon.json")) + " --trials 1 --noise 0.1 --seed 9";
  REQUIRE(run_cli("bench" + common + " --out " + q(tmp / "a"), tmp).code == 0);
  REQUIRE(run_cli("bench" + common + " --out " + q(tmp / "b"), tmp).code == 0);
  CHECK(slurp(tmp / "a/results.tsv") == slurp(tmp / "b/results.tsv"));
  CHECK(slurp(tmp / "a/summary.json") == slurp(tmp / "b/summary.json"));

  const std::string synth = "synth --keys " + q(fixture("tasks/t4_pour/keys.json")) + " --noise 0.2 --seed 3 --out ";
  REQUIRE(run_cli(synth + q(tmp / "s1.jsonl"), tmp).code == 0);
  REQUIRE(run_cli(synth + q(tmp / "s2.jsonl"), tmp).code == 0);
  CHECK(slurp(tmp / "s1.jsonl") == slurp(tmp / "s2.jsonl"));
}
