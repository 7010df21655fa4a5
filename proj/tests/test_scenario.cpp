#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hyperdrive/errors.hpp"
#include "hyperdrive/scenario.hpp"

using namespace hyperdrive;

TEST_CASE("wildfire default: pinned ingest plus three scheduler-placed tasks") {
  auto cfg = ScenarioConfig::wildfire_default();
  CHECK(validate_workflow(cfg.workflow).ok());
  REQUIRE(cfg.workflow.tasks.size() == 4);
  CHECK(cfg.pinned.at("ingest") == "drone");

  int unpinned = 0;
  for (const auto& t : cfg.workflow.tasks)
    if (!cfg.pinned.count(t.id)) unpinned++;
  CHECK(unpinned == 3);

  // the imaging-satellite link budget and the first-hop budget
  bool eo_edge = false, ingest_edge = false;
  for (const auto& e : cfg.workflow.edges) {
    if (e.source == "eo-data" && e.target == "object-det") {
      eo_edge = true;
      CHECK(e.slo->max_latency_ms == doctest::Approx(175.0));
    }
    if (e.source == "ingest") {
      ingest_edge = true;
      CHECK(e.slo->max_latency_ms == doctest::Approx(100.0));
    }
  }
  CHECK(eo_edge);
  CHECK(ingest_edge);

  // chain budget closes at 350 ms
  double total = 0.0;
  for (const auto& e : cfg.workflow.edges) {
    if (cfg.workflow.find_data_source(e.source)) continue;
    total += *e.slo->max_latency_ms;
  }
  CHECK(total == doctest::Approx(350.0));
}

TEST_CASE("size expansion reproduces the evaluation rows") {
  auto cfg = ScenarioConfig::wildfire_default();
  struct Row {
    int total, sats, edge, cloud;
  };
  // satellites : edge : cloud per unit of 1118 nodes
  for (const Row& row : {Row{1118, 1008, 100, 10}, Row{2236, 2016, 200, 20},
                         Row{3354, 3024, 300, 30}, Row{4472, 4032, 400, 40}}) {
    auto counts = cfg.expand_size(row.total);
    CHECK(counts.satellites == row.sats);
    CHECK(counts.edge == row.edge);
    CHECK(counts.cloud == row.cloud);
    CHECK(counts.satellites == 72 * counts.sats_per_plane);
  }
}

TEST_CASE("scenario round trip preserves the config") {
  auto cfg = ScenarioConfig::wildfire_default();
  auto text = save_scenario(cfg);
  auto back = parse_scenario(text, "roundtrip");
  CHECK(back == cfg);
}

TEST_CASE("empty scenario file is rejected") {
  CHECK_THROWS_AS(parse_scenario("", "empty"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("   \n\t", "blank"), ConfigError);
}

TEST_CASE("unknown keys are rejected with their path") {
  try {
    parse_scenario(R"({"time_step_s": 10, "warp_drive": true})", "t");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("warp_drive") != std::string::npos);
  }
  CHECK_THROWS_AS(
      parse_scenario(R"({"links": {"latency_floor": 1}})", "t"), ConfigError);
}

TEST_CASE("parse errors carry line diagnostics") {
  try {
    parse_scenario("{\n  \"time_step_s\": 10,\n  oops\n}", "broken.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find("broken.json:3") != std::string::npos);
  }
}

TEST_CASE("semantic validation") {
  CHECK_THROWS_AS(parse_scenario(R"({"sizes": []})", "t"), ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"schedulers": ["optimal"]})", "t"),
                  ConfigError);
  CHECK_THROWS_AS(parse_scenario(R"({"time_step_s": 0})", "t"), ConfigError);
  // a pinned task that is not part of the workflow
  CHECK_THROWS_AS(parse_scenario(R"({"pinned": {"ghost": "drone"}})", "t"),
                  ConfigError);
  // workflow with a cycle
  const char* cyclic = R"({
    "workflow": {
      "tasks": [{"id": "a"}, {"id": "b"}],
      "edges": [{"from": "a", "to": "b"}, {"from": "b", "to": "a"}]
    },
    "pinned": {}
  })";
  CHECK_THROWS_AS(parse_scenario(cyclic, "t"), ConfigError);
}

TEST_CASE("bundled scenario file matches the built-in default") {
  auto cfg = load_scenario(std::string(SCENARIO_DIR) + "/wildfire.json");
  CHECK(cfg == ScenarioConfig::wildfire_default());
}
