#include <doctest.h>

#include "lensdyn/det_gen.hpp"
#include "lensdyn/error.hpp"
#include "lensdyn/models.hpp"
#include "lensdyn/project.hpp"

using namespace lensdyn;
using io::Json;

namespace {

std::string fixture(const std::string& name) { return std::string(LENSDYN_FIXTURE_DIR) + "/" + name; }

std::string flipflop_with(const std::string& states) {
  return R"({"version": 1, "systems": [{"name": "ff", "doctrine": "det", "states": )" + states +
         R"(, "inputs": ["set"], "outputs": ["lo"], "readout": {"s0": "lo"},
           "update": {"s0": {"set": "s0"}}}]})";
}

}  // namespace

TEST_SUITE("project") {

TEST_CASE("bundled fixtures load and match the built-in models") {
  auto ff = io::load_project(fixture("flipflop.json"));
  CHECK(ff.systems.size() == 1);
  CHECK(ff.lenses.size() == 1);
  CHECK(std::get<det::System>(ff.system("flipflop").system) == models::flipflop());
  CHECK(std::get<det::Lens>(ff.lens("feedback").lens) == models::feedback_lens());

  auto lv = io::load_project(fixture("lv.json"));
  CHECK(std::get<ode::System>(lv.system("rabbit_fox").system) ==
        ode::tensor_ode(models::rabbit(), models::fox()));
  CHECK(lv.system("rabbit_fox").init == std::vector<double>{2.0, 1.0});
  CHECK(std::get<ode::Lens>(lv.lens("lv").lens) == models::lv_lens());
  CHECK(lv.lens("lv").params == std::vector<double>{1.0, 0.5, 0.2, 0.4});

  auto noisy = io::load_project(fixture("noisy.json"));
  CHECK(std::get<stoch::System>(noisy.system("noisy_flipflop").system) == models::noisy_flipflop());

  auto walking = io::load_project(fixture("walking.json"));
  CHECK(std::get<ode::System>(walking.system("walking").system) == models::walking_line());

  auto broken = io::load_project(fixture("broken_square.json"));
  CHECK(broken.squares.size() == 2);
  CHECK(det::check_square(broken.square(broken.squares[0])));
  CHECK_FALSE(det::check_square(broken.square(broken.squares[1])));
}

TEST_CASE("empty and malformed projects") {
  auto empty = io::parse_project(R"({"version": 1})");
  CHECK(empty.systems.empty());
  CHECK(empty.lenses.empty());
  CHECK(empty.charts.empty());
  CHECK_THROWS_WITH_AS(io::parse_project(R"({"version": 2})"), doctest::Contains("version"), ValidationError);
  CHECK_THROWS_AS(io::parse_project(R"({"systems": []})"), ValidationError);
  CHECK_THROWS_AS(io::parse_project("[1, 2]"), ValidationError);
  try {
    io::parse_project("{\n  \"version\": 1,\n  \"systems\": [,]\n}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(e.position() >= 30);
  }
  CHECK_THROWS_AS(io::load_project(fixture("missing.json")), ValidationError);
}

TEST_CASE("validation errors name the entry and the rule") {
  CHECK_NOTHROW(io::parse_project(flipflop_with(R"(["s0"])")));
  CHECK_THROWS_WITH_AS(io::parse_project(flipflop_with(R"(["s0", "s0"])")),
                       doctest::Contains("system 'ff'"), ValidationError);
  CHECK_THROWS_WITH_AS(io::parse_project(flipflop_with(R"(["s0", "s0"])")), doctest::Contains("'s0'"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(io::parse_project(flipflop_with(R"(["s0", "s1"])")), doctest::Contains("'s1'"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(io::parse_project(R"({"version": 1, "systems": [{"name": "x", "doctrine": "quantum"}]})"),
                       doctest::Contains("quantum"), ValidationError);
  CHECK_THROWS_WITH_AS(
      io::parse_project(R"({"version": 1, "systems": [
        {"name": "x", "doctrine": "ode", "stateVars": ["s"], "outputVars": [], "paramVars": [],
         "readout": {}, "field": {"s": "1 +"}}]})"),
      doctest::Contains("system 'x'"), ValidationError);
  CHECK_THROWS_WITH_AS(
      io::parse_project(R"({"version": 1, "systems": [
        {"name": "m", "doctrine": "stoch", "states": ["a", "b"], "inputs": ["i"], "outputs": ["o"],
         "readout": {"a": "o", "b": "o"},
         "update": {"a": {"i": {"a": "1/2", "b": "1/3"}}, "b": {"i": {"b": "1"}}}}]})"),
      doctest::Contains("5/6"), ValidationError);
  CHECK_THROWS_WITH_AS(
      io::parse_project(R"({"version": 1, "systems": [
        {"name": "a", "doctrine": "ode", "stateVars": [], "outputVars": [], "paramVars": [], "readout": {}, "field": {}},
        {"name": "a", "doctrine": "ode", "stateVars": [], "outputVars": [], "paramVars": [], "readout": {}, "field": {}}]})"),
      doctest::Contains("duplicate system name 'a'"), ValidationError);
  CHECK_THROWS_WITH_AS(io::parse_project(R"({"version": 1, "squares": [
        {"name": "q", "top": "t", "bottom": "b", "left": "l", "right": "r"}]})"),
                       doctest::Contains("square 'q'"), ValidationError);
  auto p = io::load_project(fixture("flipflop.json"));
  CHECK_THROWS_WITH_AS(p.system("nope"), doctest::Contains("'nope'"), ValidationError);
}

TEST_CASE("projects round-trip byte for byte") {
  for (const auto* name : {"flipflop.json", "lv.json", "noisy.json", "walking.json", "broken_square.json"}) {
    auto p = io::load_project(fixture(name));
    auto text = io::dump_project(p);
    auto again = io::parse_project(text);
    CHECK(io::dump_project(again) == text);
    CHECK(again.systems.size() == p.systems.size());
  }
  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    io::Project p;
    auto sys = det::random_system(rng, 4);
    auto lens = det::random_lens(rng, sys.interface(), det::random_interface(rng, 1, 3, "x"));
    p.systems.push_back({"d", sys, std::nullopt});
    p.systems.push_back({"s", stoch::random_system(rng, 4), std::nullopt});
    p.lenses.push_back({"l", lens, std::nullopt});
    p.charts.push_back({"c", det::random_chart(rng, sys.interface(), lens.outer())});
    auto back = io::parse_project(io::dump_project(p));
    CHECK(std::get<det::System>(back.systems[0].system) == sys);
    CHECK(std::get<stoch::System>(back.systems[1].system) == std::get<stoch::System>(p.systems[1].system));
    CHECK(std::get<det::Lens>(back.lenses[0].lens) == lens);
    CHECK(back.charts[0].chart == p.charts[0].chart);
  }
}

TEST_CASE("finite-set values round-trip") {
  FinSet a{"a1", "a2"}, b{"b1"};
  auto m = FinMap::from_labels(a, b, {{"a1", "b1"}, {"a2", "b1"}});
  CHECK(io::to_json(a).dump() == R"(["a1","a2"])");
  CHECK(io::to_json(m).dump() == R"({"dom":["a1","a2"],"cod":["b1"],"table":{"a1":"b1","a2":"b1"}})");
  CHECK(io::finset_from_json(io::to_json(a)) == a);
  CHECK(io::finmap_from_json(io::to_json(m)) == m);
  Span s(m, FinMap::identity(a));
  CHECK(io::span_from_json(io::to_json(s)) == s);
  Family f(m);
  CHECK(io::family_from_json(io::to_json(f)) == f);
  CHECK_THROWS_AS(io::finset_from_json(Json::parse(R"(["x", 3])")), ValidationError);
}

TEST_CASE("file digests") {
  const auto d = io::file_digest(fixture("flipflop.json"));
  CHECK(d.size() == 16);
  CHECK(d == io::file_digest(fixture("flipflop.json")));
  CHECK(d != io::file_digest(fixture("lv.json")));
}

}  // TEST_SUITE
