#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "finger_statics/requirements.hpp"
#include "test_helpers.hpp"

using namespace finger_statics;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("required_fingertip_force: one kilogram between two fingertips", "[requirements]") {
  const double f = required_fingertip_force(1.0, 0.4, 2.0, 2);
  CHECK_THAT(f, WithinAbs(24.525, 1e-12));
  CHECK(std::abs(f - 25.0) / 25.0 <= 0.02);
  CHECK_THAT(required_fingertip_force(1.0, 0.4, 1.0, 2), WithinRel(f / 2.0, 1e-15));
}

TEST_CASE("required_fingertip_force: limits and errors", "[requirements]") {
  CHECK(required_fingertip_force(1.0, 1e9, 2.0, 2) < 1e-7);
  CHECK(required_fingertip_force(1.0, 1e9, 2.0, 2) > 0.0);
  CHECK_THROWS_AS(required_fingertip_force(1.0, 0.0, 2.0, 2), DomainError);
  CHECK_THROWS_AS(required_fingertip_force(1.0, 0.4, 2.0, 0), DomainError);
  CHECK_THROWS_AS(required_fingertip_force(0.0, 0.4, 2.0, 2), DomainError);
  CHECK_THROWS_AS(required_fingertip_force(1.0, 0.4, -1.0, 2), DomainError);
}

TEST_CASE("required_fingertip_force: homogeneity", "[requirements][property]") {
  testing::Gen gen(1);
  for (int k = 0; k < 1000; ++k) {
    const double m = gen.uniform(0.1, 5.0), mu = gen.uniform(0.1, 2.0), sf = gen.uniform(1.0, 4.0);
    const int n = gen.integer(1, 5);
    const double s = gen.uniform(0.5, 3.0);
    const double base = required_fingertip_force(m, mu, sf, n);
    CHECK_THAT(required_fingertip_force(s * m, mu, sf, n), WithinRel(s * base, 1e-14));
    CHECK_THAT(required_fingertip_force(m, mu, s * sf, n), WithinRel(s * base, 1e-14));
    CHECK_THAT(required_fingertip_force(m, s * mu, sf, n), WithinRel(base / s, 1e-14));
    CHECK_THAT(required_fingertip_force(m, mu, sf, 2 * n), WithinRel(base / 2.0, 1e-14));
  }
}

TEST_CASE("ROM tables", "[requirements]") {
  const RomLimits f = finger_rom_limits();
  REQUIRE(f.joints.size() == 3);
  CHECK(f.joints[0].name == "MCP");
  CHECK(f.joints[0].flexion == 90.0);
  CHECK(f.joints[0].flexion_sd == 9.1);
  CHECK(*f.joints[0].extension == -19.0);
  CHECK(f.joints[0].extension_sd == 6.9);
  CHECK(f.joints[1].flexion == 101.0);
  CHECK(*f.joints[1].extension == -7.0);
  CHECK(f.joints[2].flexion == 84.0);
  CHECK(*f.joints[2].extension == -6.0);
  f.validate();
  const RomLimits t = thumb_rom_limits();
  REQUIRE(t.joints.size() == 2);
  CHECK(t.joints[0].flexion == 60.0);
  CHECK(t.joints[1].flexion == 88.0);
  CHECK_FALSE(t.joints[1].extension.has_value());
  t.validate();

  RomLimits bad = f;
  bad.joints[1].extension = 3.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

namespace {
PhalangeDesign design(int n) { return {n, SegmentGeometry::with_default_tip(15.0, 6.0), 0.9}; }
}  // namespace

TEST_CASE("rom_check: flat hand passes every joint", "[requirements]") {
  const RomReport r = rom_check(design(3), GraspScenario::flat(44.0), finger_rom_limits());
  CHECK(r.admissible);
  CHECK_FALSE(r.heuristic_mapping);
  for (const auto& j : r.joints) {
    CHECK(j.angle == 0.0);
    CHECK(j.pass);
  }
}

TEST_CASE("rom_check: mapping for three segments", "[requirements]") {
  // nL/R = 1: theta = [0.75, 0.5, 0.25, 0].
  const RomReport r = rom_check(design(3), GraspScenario::cylinder(45.0, 1.0), finger_rom_limits());
  REQUIRE(r.joints.size() == 3);
  CHECK_THAT(r.joints[0].angle, WithinAbs(rad_to_deg(0.75), 1e-12));
  CHECK_THAT(r.joints[1].angle, WithinAbs(rad_to_deg(0.25), 1e-12));
  CHECK_THAT(r.joints[2].angle, WithinAbs(rad_to_deg(0.25), 1e-12));
  CHECK(r.admissible);
  CHECK_THAT(r.joints[0].margin, WithinAbs(90.0 - rad_to_deg(0.75), 1e-12));
}

TEST_CASE("rom_check: wrap beyond the summed flexion limits fails", "[requirements]") {
  // Total wrap nL/R above 90 + 101 + 84 = 275 deg.
  const double wrap = deg_to_rad(276.0);
  const double radius = 45.0 / wrap;
  const RomReport r = rom_check(design(3), GraspScenario::cylinder(radius, 1.0), finger_rom_limits());
  CHECK_FALSE(r.admissible);
  CHECK(r.failure_reason.has_value());
  int failing = 0;
  for (const auto& j : r.joints) failing += j.pass ? 0 : 1;
  CHECK(failing >= 1);
}

TEST_CASE("rom_check: heuristic mapping for other segment counts", "[requirements]") {
  const RomReport r5 = rom_check(design(5), GraspScenario::cylinder(200.0, 1.0), finger_rom_limits());
  CHECK(r5.heuristic_mapping);
  REQUIRE(r5.joints.size() == 3);
  // Grouped angles add up to theta_1 + (n-1) * wrap / (n+1).
  const double wrap = 5.0 * 15.0 / 200.0;
  const double total = wrap * 5.0 / 6.0 + 4.0 * wrap / 6.0;
  double sum = 0.0;
  for (const auto& j : r5.joints) sum += j.angle;
  CHECK_THAT(sum, WithinRel(rad_to_deg(total), 1e-12));

  const RomReport r1 = rom_check(design(1), GraspScenario::cylinder(200.0, 1.0), finger_rom_limits());
  CHECK(r1.joints[1].angle == 0.0);
  CHECK(r1.joints[2].angle == 0.0);

  const RomReport thumb = rom_check(design(3), GraspScenario::cylinder(200.0, 1.0), thumb_rom_limits());
  CHECK(thumb.joints.size() == 2);
  CHECK(thumb.heuristic_mapping);
}

TEST_CASE("rom_check: infeasible conformation is a failure, not an exception", "[requirements]") {
  PhalangeDesign d{3, SegmentGeometry::with_default_tip(20.0, 3.0), 0.9};
  const double radius = 30.0 / (2.0 * d.segment.delta());
  const RomReport r = rom_check(d, GraspScenario::cylinder(radius, 1.0), finger_rom_limits());
  CHECK_FALSE(r.admissible);
  REQUIRE(r.failure_reason.has_value());
  CHECK(r.failure_reason->find("conformation infeasible") != std::string::npos);
}

TEST_CASE("rom_check: widened limits and tighter objects", "[requirements][property]") {
  testing::Gen gen(4);
  for (int k = 0; k < 2000; ++k) {
    const int n = gen.integer(1, 6);
    const PhalangeDesign d{n, SegmentGeometry::with_default_tip(gen.uniform(8, 25), gen.uniform(3, 10)), 0.9};
    const double radius = gen.uniform(5.0, 200.0);
    const GraspScenario g = GraspScenario::cylinder(radius, 1.0);
    const RomReport strict = rom_check(d, g, finger_rom_limits(), 0.0);
    const RomReport wide = rom_check(d, g, finger_rom_limits(), gen.uniform(0.0, 3.0));
    for (std::size_t j = 0; j < strict.joints.size(); ++j) {
      if (strict.joints[j].pass) CHECK(wide.joints[j].pass);
    }
    const RomReport tighter =
        rom_check(d, GraspScenario::cylinder(radius * gen.uniform(0.3, 1.0), 1.0), finger_rom_limits());
    if (!strict.failure_reason || strict.failure_reason->find("infeasible") == std::string::npos) {
      for (std::size_t j = 0; j < strict.joints.size(); ++j) {
        if (!strict.joints[j].pass) CHECK_FALSE(tighter.joints[j].pass);
      }
    }
  }
}
