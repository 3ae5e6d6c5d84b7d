#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>

#include "finger_statics/io.hpp"
#include "test_helpers.hpp"

using namespace finger_statics;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

TEST_CASE("format_number: nine significant digits", "[io]") {
  CHECK(format_number(24.525) == "24.525");
  CHECK(format_number(0.1 + 0.2) == "0.3");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(123456789012.0) == "1.23456789e+11");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
}

TEST_CASE("format_number re-parses to a fixed point", "[io][property]") {
  testing::Gen gen(17);
  for (int k = 0; k < 5000; ++k) {
    const double v = gen.uniform(-1.0, 1.0) * std::pow(10.0, gen.integer(-12, 12));
    const std::string once = format_number(v);
    const double back = parse_number(once, "value");
    CHECK(format_number(back) == once);
    CHECK(std::abs(back - v) <= 5e-9 * std::abs(v));
  }
}

TEST_CASE("sweep CSV round-trips", "[io][property]") {
  DesignSpace s;
  s.segments = {2, 3};
  s.length = {10.0, 25.0, 3};
  s.passage_depth = {3.0, 10.0, 3};
  s.loss = {0.6, 1.0, 2};
  s.scenario = GraspScenario::cylinder(30.0, 44.0);
  const auto rows = sweep(s);
  std::ostringstream os;
  write_csv(os, sweep_table(rows));
  std::istringstream is(os.str());
  const auto back = parse_sweep_table(parse_csv(is, "sweep.csv"));
  REQUIRE(back.size() == rows.size());
  std::ostringstream again;
  write_csv(again, sweep_table(back));
  CHECK(again.str() == os.str());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].segments == rows[i].segments);
    CHECK(back[i].feasible == rows[i].feasible);
    CHECK(std::abs(back[i].p_tip - rows[i].p_tip) <= 5e-9 * std::abs(rows[i].p_tip));
  }
}

TEST_CASE("JSON reports re-parse into equal values", "[io][property]") {
  const StaticsSolution s = fingertip_force({3, SegmentGeometry::with_default_tip(15, 6), 0.8},
                                            GraspScenario::cylinder(45.0, 44.0));
  const Json j = to_json(s, 44.0);
  const Json back = Json::parse(j.dump(2));
  CHECK(back == j);
  CHECK(back["p_tip_n"].get<double>() == s.p_tip);
}

TEST_CASE("calibration CSV parsing", "[io]") {
  std::istringstream ok("# comment\nT_o,P_tip\n10,5\n 20 , 10\n");
  const auto data = read_calibration_csv(ok, "inline");
  REQUIRE(data.points.size() == 2);
  CHECK(data.points[1].tension == 20.0);
  CHECK(data.points[1].force == 10.0);

  std::istringstream bad_header("tension,force\n1,2\n");
  CHECK_THROWS_AS(read_calibration_csv(bad_header, "inline"), ConfigError);
  std::istringstream bad_value("T_o,P_tip\n1,abc\n");
  CHECK_THROWS_WITH(read_calibration_csv(bad_value, "inline"), ContainsSubstring("row 1 P_tip"));
  std::istringstream ragged("T_o,P_tip\n1,2,3\n");
  CHECK_THROWS_WITH(read_calibration_csv(ragged, "inline"), ContainsSubstring("inline:2"));
}

TEST_CASE("config: defaults and overrides", "[io]") {
  const RunConfig def = apply_config(Json::object());
  CHECK(def.design.segments == 3);
  CHECK(def.design.segment.length == 15.0);
  CHECK(def.design.segment.passage_depth == 6.0);
  CHECK(def.design.segment.tip_length == 7.5);
  CHECK(def.design.loss == kDefaultLoss);
  CHECK(*def.scenario.radius == 45.0);
  CHECK(def.scenario.input_tension == 44.0);

  const RunConfig cfg = apply_config(Json::parse(R"({
    "design": {"segments": 4, "length_mm": 20, "loss_coefficient": 0.8},
    "scenario": {"flat": true, "input_tension_n": 30},
    "statics": {"terminal_direction": "along_cable", "anchor_offset_mm": 1.5},
    "rom": {"digit": "finger", "sd_multiplier": 1,
            "limits": {"PIP": {"flexion": "95deg", "extension": -0.1}}}
  })"));
  CHECK(cfg.design.segments == 4);
  CHECK(cfg.design.segment.tip_length == 10.0);
  CHECK(cfg.scenario.is_flat());
  CHECK(cfg.statics.terminal == TerminalDirection::kAlongCable);
  CHECK(cfg.statics.anchor_offset == 1.5);
  CHECK(cfg.rom.joints[1].flexion == 95.0);
  CHECK_THAT(*cfg.rom.joints[1].extension, WithinAbs(rad_to_deg(-0.1), 1e-12));
  CHECK(cfg.sd_multiplier == 1.0);
}

TEST_CASE("config: field-precise errors", "[io]") {
  CHECK_THROWS_WITH(apply_config(Json::parse(R"({"design": {"lenght_mm": 3}})")),
                    ContainsSubstring("design.lenght_mm: unknown field"));
  CHECK_THROWS_WITH(apply_config(Json::parse(R"({"design": {"segments": 2.5}})")),
                    ContainsSubstring("design.segments: expected an integer"));
  CHECK_THROWS_WITH(apply_config(Json::parse(R"({"design_space": {"loss_coefficient": {"min": 0.5, "max": 1.3}}})")),
                    ContainsSubstring("design_space.loss_coefficient"));
  CHECK_THROWS_WITH(apply_config(Json::parse(R"({"rom": {"limits": {"MCP": {"flexion": "90"}}}})")),
                    ContainsSubstring("rom.limits.MCP.flexion: angle strings need an explicit 'deg' suffix"));
  CHECK_THROWS_WITH(apply_config(Json::parse(R"({"scenario": {"radius_mm": 40, "flat": true}})")),
                    ContainsSubstring("scenario"));

  RunConfig cfg = apply_config(Json::parse(R"({"design": {"loss_coefficient": 1.5}})"));
  CHECK_THROWS_WITH(validate_config(cfg), ContainsSubstring("design.loss_coefficient"));
  cfg = apply_config(Json::parse(R"({"scenario": {"radius_mm": -2}})"));
  CHECK_THROWS_WITH(validate_config(cfg), ContainsSubstring("scenario.radius_mm"));
}

TEST_CASE("config: JSON syntax errors report the line", "[io]") {
  const std::string text = "{\n  \"design\": {\n    \"segments\": 3,,\n  }\n}\n";
  CHECK_THROWS_WITH(parse_json_text(text, "cfg.json"), ContainsSubstring("cfg.json:3"));
}

TEST_CASE("config: bundled default config file", "[io]") {
  const RunConfig cfg = load_config_file(std::string(FINGER_STATICS_DATA_DIR) + "/default_config.json");
  CHECK(cfg.design.loss == kDefaultLoss);
  REQUIRE(cfg.calibration_data.has_value());
  CHECK_THAT(*cfg.calibration_data, ContainsSubstring("flexion_transmission.csv"));
  REQUIRE(cfg.space.has_value());
  CHECK(cfg.space->length.steps == 7);
  CHECK(cfg.space->loss.collapsed());
}
