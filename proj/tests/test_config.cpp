#include <doctest.h>

#include "run_config.hpp"

#include <filesystem>
#include <fstream>

using namespace hopfdeg::cli;
using nlohmann::json;

namespace {

json base() {
  return json::parse(R"({"schema_version":1,"command":"degree","map":{"family":"bubble","params":{"n":2,"d":3}}})");
}

std::string error_of(const json& doc) {
  try {
    resolve_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("embedded schema is the shipped file") {
  std::ifstream in(HD_SCHEMA_PATH);
  REQUIRE(in);
  CHECK(json::parse(in) == json::parse(run_config_schema()));
}

TEST_CASE("valid configs resolve") {
  const RunConfig c = resolve_config(base());
  CHECK(c.command == "degree");
  CHECK(c.seed == 1);
  CHECK(c.format == "csv");
  CHECK(c.out_dir.empty());
  CHECK(c.section == json::object());
  // The resolved form is itself a valid config.
  CHECK_NOTHROW(validate_against_schema(c.resolved()));
  CHECK(resolve_config(c.resolved()).resolved() == c.resolved());
}

TEST_CASE("command-line overrides win") {
  json doc = base();
  doc["seed"] = 7;
  doc["threads"] = 3;
  doc["output"] = {{"dir", "a"}, {"format", "json"}};
  Overrides o;
  o.seed = 11;
  o.out_dir = "b";
  const RunConfig c = resolve_config(doc, o);
  CHECK(c.seed == 11);
  CHECK(c.threads == 3);
  CHECK(c.out_dir == "b");
  CHECK(c.format == "json");
  o.format = "xml";
  CHECK_THROWS_AS(resolve_config(doc, o), ConfigError);
}

TEST_CASE("unknown keys are rejected at every level") {
  json a = base();
  a["sed"] = 1;
  CHECK(error_of(a).find("unknown key 'sed'") != std::string::npos);
  json b = base();
  b["degree"] = {{"resolutin", 10}};
  CHECK(error_of(b).find("resolutin") != std::string::npos);
  json c = base();
  c["output"] = {{"plots", true}};
  CHECK(error_of(c).find("plots") != std::string::npos);
  json d = base();
  d["map"]["colour"] = "red";
  CHECK(error_of(d).find("colour") != std::string::npos);
  json e = base();
  e["map"] = {{"family", "scaled"}, {"params", {{"lambda", 2}, {"base", {{"family", "hopf"}, {"x", 1}}}}}};
  CHECK(!error_of(e).empty());
}

TEST_CASE("schema types and ranges") {
  json a = base();
  a["schema_version"] = 2;
  CHECK(!error_of(a).empty());
  json b = base();
  b["command"] = "seminorm";
  b["seminorm"] = {{"s", 1.5}};
  CHECK(!error_of(b).empty());
  b["seminorm"] = {{"s", "x"}};
  CHECK(!error_of(b).empty());
  b["seminorm"] = {{"s", 0.5}, {"metric", "geodesic"}};
  CHECK(error_of(b).empty());
  json c = base();
  c["seed"] = -1;
  CHECK(!error_of(c).empty());
  json d = base();
  d.erase("command");
  CHECK(!error_of(d).empty());
}

TEST_CASE("sections must match the command") {
  json a = base();
  a["hopf"] = {{"N", 64}};
  CHECK(error_of(a).find("not used by command 'degree'") != std::string::npos);
  json b = base();
  b.erase("map");
  CHECK(error_of(b).find("needs a 'map'") != std::string::npos);
  json c = {{"schema_version", 1}, {"command", "experiment"}};
  CHECK(!error_of(c).empty());
  c["experiment"] = {{"name", "degree_blowup"}};
  CHECK(error_of(c).empty());
  c["map"] = base()["map"];
  CHECK(!error_of(c).empty());
}

TEST_CASE("shipped example configs are valid") {
  int n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(HD_EXAMPLE_CONFIGS)) {
    if (entry.path().extension() != ".json") continue;
    CHECK_NOTHROW(load_config(entry.path().string()));
    ++n;
  }
  CHECK(n >= 5);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}
