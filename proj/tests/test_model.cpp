#include <doctest.h>

#include <sstream>

#include "hce/error.hpp"
#include "hce/model.hpp"
#include "support/oracles.hpp"

using namespace hce;

namespace {

const char* kKidney = R"({
  "follow_up_days": 1095,
  "components": [
    {"name": "Death", "kind": "tte", "direction": "higher"},
    {"name": "Kidney failure", "kind": "tte", "direction": "higher"},
    {"name": "Outcome 3", "kind": "tte", "direction": "higher"},
    {"name": "Outcome 4", "kind": "tte", "direction": "higher"},
    {"name": "Outcome 5", "kind": "tte", "direction": "higher"},
    {"name": "GFR_decline_40", "kind": "tte", "direction": "higher"},
    {"name": "eGFR change", "kind": "continuous", "direction": "higher"}
  ]
})";

ComponentConfig kidney() { return parse_component_config(kKidney); }

HceValue v(int c, double m) { return {c, m}; }

}  // namespace

TEST_CASE("parse_component_config: kidney shape") {
  const auto cfg = kidney();
  CHECK(cfg.size() == 7);
  CHECK(cfg.follow_up() == 1095.0);
  CHECK(cfg.continuous().priority == 7);
  CHECK(cfg.continuous().kind == ComponentKind::Continuous);
  CHECK(cfg.is_kidney_shape());
  // Round trip through JSON.
  const auto again = parse_component_config(component_config_to_json(cfg));
  CHECK(again.size() == 7);
  CHECK(again.at_priority(2).name == "Kidney failure");
}

TEST_CASE("parse_component_config: invariant violations") {
  CHECK_THROWS_WITH_AS(parse_component_config(R"({"follow_up_days": 10, "components": [
      {"name": "eGFR", "kind": "continuous", "direction": "higher"},
      {"name": "Death", "kind": "tte", "direction": "higher"}]})"),
                       doctest::Contains("continuous must be last"), InputError);
  CHECK_THROWS_WITH_AS(parse_component_config(R"({"follow_up_days": 10, "components": [
      {"name": "Death", "kind": "tte", "direction": "higher"},
      {"name": "Death", "kind": "tte", "direction": "higher"},
      {"name": "eGFR", "kind": "continuous", "direction": "higher"}]})"),
                       doctest::Contains("duplicate name"), InputError);
  CHECK_THROWS_AS(parse_component_config(R"({"follow_up_days": 10, "components": [
      {"name": "Death", "kind": "tte", "direction": "higher"}]})"),
                  InputError);
  CHECK_THROWS_AS(parse_component_config("{not json"), InputError);
  CHECK_THROWS_AS(parse_component_config(R"({"components": []})"), InputError);
}

TEST_CASE("load_dataset: composed CSV") {
  const auto cfg = kidney();
  std::istringstream csv("SUBJID,ARM,GROUPN,AVAL0\nS001,Active,1,250.0\nS002,Control,7,-1.5\n");
  const auto d = load_dataset(csv, cfg);
  REQUIRE(d.subjects().size() == 2);
  CHECK(d.subjects()[0].arm == Arm::Active);
  CHECK(d.subjects()[0].value.category == 1);
  CHECK(d.subjects()[0].value.magnitude == 250.0);
  CHECK(d.subjects()[1].value.magnitude == -1.5);

  std::istringstream bad("SUBJID,ARM,GROUPN,AVAL0\nS001,Active,9,1.0\n");
  CHECK_THROWS_WITH_AS(load_dataset(bad, cfg), doctest::Contains("category out of range"), InputError);

  std::istringstream no_arm("SUBJID,GROUPN,AVAL0\nS001,1,1.0\n");
  CHECK_THROWS_WITH_AS(load_dataset(no_arm, cfg), doctest::Contains("ARM"), InputError);

  std::istringstream label("SUBJID,ARM,GROUPN,AVAL0\nS001,Placebo,1,1.0\n");
  CHECK_THROWS_WITH_AS(load_dataset(label, cfg), doctest::Contains("line 2"), InputError);

  std::istringstream late("SUBJID,ARM,GROUPN,AVAL0\nS001,Active,2,2000\n");
  CHECK_THROWS_AS(load_dataset(late, cfg), InputError);

  std::istringstream number("SUBJID,ARM,GROUPN,AVAL0\nS001,Active,2,abc\n");
  CHECK_THROWS_AS(load_dataset(number, cfg), InputError);

  std::istringstream empty("SUBJID,ARM,GROUPN,AVAL0\n");
  const auto none = load_dataset(empty, cfg);
  CHECK(none.subjects().empty());
  CHECK_THROWS_AS(none.require_both_arms(), DegenerateError);
}

TEST_CASE("load_dataset: custom arm labels and round trip") {
  const auto cfg = kidney();
  std::istringstream csv("SUBJID,ARM,GROUPN,AVAL0\nS1,A,3,100\nS2,C,7,0.25\n");
  const auto d = load_dataset(csv, cfg, {"A", "C"});
  CHECK(d.count(Arm::Active) == 1);
  CHECK(d.count(Arm::Control) == 1);
  std::istringstream again(dataset_to_csv(d, {"A", "C"}));
  const auto d2 = load_dataset(again, cfg, {"A", "C"});
  CHECK(dataset_to_csv(d2, {"A", "C"}) == dataset_to_csv(d, {"A", "C"}));
}

TEST_CASE("compose_hce") {
  const auto cfg = kidney();
  WideRow row;
  row.events.resize(6);
  row.events[0] = {true, 400.0};
  row.events[1] = {true, 200.0};
  row.continuous_value = -3.0;
  auto h = compose_hce(row, cfg);
  CHECK(h.category == 1);
  CHECK(h.magnitude == 400.0);

  WideRow none;
  none.events.resize(6);
  none.continuous_value = 1.5;
  h = compose_hce(none, cfg);
  CHECK(h.category == 7);
  CHECK(h.magnitude == 1.5);

  WideRow one;
  one.events.resize(6);
  one.events[5] = {true, 100.0};
  h = compose_hce(one, cfg);
  CHECK(h.category == 6);
  CHECK(h.magnitude == 100.0);

  WideRow missing_time;
  missing_time.events.resize(6);
  missing_time.events[2] = {true, std::nullopt};
  CHECK_THROWS_AS(compose_hce(missing_time, cfg), InputError);

  WideRow missing_value;
  missing_value.events.resize(6);
  CHECK_THROWS_AS(compose_hce(missing_value, cfg), InputError);
}

TEST_CASE("load_wide_dataset") {
  const auto cfg = parse_component_config(R"({"follow_up_days": 100, "components": [
      {"name": "Death", "kind": "tte", "direction": "higher"},
      {"name": "eGFR", "kind": "continuous", "direction": "higher"}]})");
  std::istringstream csv("SUBJID,ARM,Death_EVENT,Death_TIME,eGFR_VALUE\nA1,Active,1,50,\nC1,Control,0,,2.5\n");
  const auto d = load_wide_dataset(csv, cfg);
  REQUIRE(d.subjects().size() == 2);
  CHECK(d.subjects()[0].value.category == 1);
  CHECK(d.subjects()[0].value.magnitude == 50.0);
  CHECK(d.subjects()[1].value.category == 2);
  CHECK(d.subjects()[1].value.magnitude == 2.5);
}

TEST_CASE("compare") {
  const auto cfg = kidney();
  CHECK(compare(v(1, 100), v(1, 50), cfg) == Outcome::AWins);
  CHECK(compare(v(7, 2.0), v(3, 900), cfg) == Outcome::AWins);
  CHECK(compare(v(7, 1.0), v(7, 1.0), cfg) == Outcome::Tie);
  CHECK(compare(v(2, 300), v(2, 300), cfg) == Outcome::Tie);

  const auto lower = oracle::mixed_config(1, 100.0, Direction::LowerIsBetter);
  CHECK(compare(v(2, 1.0), v(2, 3.0), lower) == Outcome::AWins);
}

TEST_CASE("compare: antisymmetry, transitivity, rank invariance") {
  const auto cfg = oracle::mixed_config(3, 365.0);
  Rng rng(11);
  auto random_value = [&] {
    HceValue x;
    x.category = 1 + int(rng.below(4));
    x.magnitude = x.category < 4 ? double(rng.below(20)) * 10.0 : double(rng.below(9)) - 4.0;
    return x;
  };
  for (int i = 0; i < 3000; ++i) {
    const auto a = random_value(), b = random_value(), c = random_value();
    const auto ab = compare(a, b, cfg), ba = compare(b, a, cfg);
    CHECK((ab == Outcome::AWins) == (ba == Outcome::BWins));
    CHECK((ab == Outcome::Tie) == (ba == Outcome::Tie));
    CHECK(compare(a, a, cfg) == Outcome::Tie);
    if (ab == Outcome::AWins && compare(b, c, cfg) == Outcome::AWins) CHECK(compare(a, c, cfg) == Outcome::AWins);
    auto t = [](HceValue x) {
      if (x.category == 4) x.magnitude = std::exp(x.magnitude) * 3.0 + 1.0;  // strictly increasing
      return x;
    };
    CHECK(compare(t(a), t(b), cfg) == ab);
  }
}

TEST_CASE("ordinalize_8") {
  const auto cfg = kidney();
  std::vector<SubjectRecord> s;
  const double values[] = {-2.3, 0.0, 1.0, -0.1, 4.0};
  for (int i = 0; i < 5; ++i) s.push_back({"A" + std::to_string(i), Arm::Active, {7, values[i]}});
  for (int i = 0; i < 5; ++i) s.push_back({"C" + std::to_string(i), Arm::Control, {i + 1, 10.0}});
  const auto o = ordinalize_8(HceDataset(cfg, s));
  REQUIRE(o.counts.labels.size() == 8);
  CHECK(o.counts.active[6] == 2);  // -2.3, -0.1
  CHECK(o.counts.active[7] == 3);  // 0.0 counts as non-negative
  double sum_a = 0, sum_c = 0;
  for (double p : o.proportions.active) sum_a += p;
  for (double p : o.proportions.control) sum_c += p;
  CHECK(std::abs(sum_a - 1.0) <= 1e-12);
  CHECK(std::abs(sum_c - 1.0) <= 1e-12);

  CHECK_THROWS_AS(ordinalize_8(HceDataset(oracle::mixed_config(2), {})), InputError);
}

TEST_CASE("HceDataset invariants") {
  const auto cfg = oracle::mixed_config(1, 100.0);
  CHECK_THROWS_AS(HceDataset(cfg, {{"X", Arm::Active, {1, 5}}, {"X", Arm::Control, {1, 6}}}), InputError);
  CHECK_THROWS_AS(HceDataset(cfg, {{"X", Arm::Active, {1, 150}}}), InputError);
  CHECK_THROWS_AS(HceDataset(cfg, {{"X", Arm::Active, {2, std::nan("")}}}), InputError);
  const HceDataset d(cfg, {{"A", Arm::Active, {1, 5}}, {"C", Arm::Control, {2, 6}}});
  const auto swapped = d.with_arms_swapped();
  CHECK(swapped.subjects()[0].arm == Arm::Control);
  CHECK(swapped.count(Arm::Active) == 1);
}
