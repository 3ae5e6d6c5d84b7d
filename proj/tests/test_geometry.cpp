#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "finger_statics/geometry.hpp"
#include "test_helpers.hpp"

using namespace finger_statics;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PhalangeDesign default_design(int n = 3, double c = 0.9) {
  return {n, SegmentGeometry::with_default_tip(15.0, 6.0), c};
}

}  // namespace

TEST_CASE("conform_angles follows the wrap law", "[geometry]") {
  const auto theta = conform_angles(default_design(), GraspScenario::cylinder(45.0, 44.0));
  REQUIRE(theta.size() == 4);
  CHECK_THAT(theta[0], WithinAbs(0.75, 1e-15));
  CHECK_THAT(theta[1], WithinAbs(0.50, 1e-15));
  CHECK_THAT(theta[2], WithinAbs(0.25, 1e-15));
  CHECK(theta[3] == 0.0);
}

TEST_CASE("conform_angles on the flat hand is all zero", "[geometry]") {
  for (int n = 1; n <= 8; ++n) {
    const auto theta = conform_angles(default_design(n), GraspScenario::flat(10.0));
    REQUIRE(theta.size() == static_cast<std::size_t>(n + 1));
    for (double t : theta) CHECK(t == 0.0);
  }
}

TEST_CASE("conform_angles rejects a non-positive radius", "[geometry]") {
  CHECK_THROWS_AS(conform_angles(default_design(), GraspScenario::cylinder(0.0, 1.0)), DomainError);
  CHECK_THROWS_AS(conform_angles(default_design(), GraspScenario::cylinder(-5.0, 1.0)), DomainError);
}

TEST_CASE("design invariants are enforced", "[geometry]") {
  CHECK_THROWS_AS(conform_angles(default_design(0), GraspScenario::flat(1.0)), DomainError);
  CHECK_THROWS_AS(conform_angles(default_design(3, 0.0), GraspScenario::flat(1.0)), DomainError);
  CHECK_THROWS_AS(conform_angles(default_design(3, 1.01), GraspScenario::flat(1.0)), DomainError);
  PhalangeDesign d = default_design();
  d.segment.passage_depth = 0.0;
  CHECK_THROWS_AS(conform_angles(d, GraspScenario::flat(1.0)), DomainError);
  d = default_design();
  d.segment.tip_length = -1.0;
  CHECK_THROWS_AS(conform_angles(d, GraspScenario::flat(1.0)), DomainError);
}

TEST_CASE("delta lies strictly inside (0, pi/2)", "[geometry]") {
  testing::Gen gen(11);
  for (int k = 0; k < 1000; ++k) {
    const SegmentGeometry s =
        SegmentGeometry::with_default_tip(gen.uniform(1e-3, 1e3), gen.uniform(1e-3, 1e3));
    CHECK(s.delta() > 0.0);
    CHECK(s.delta() < std::numbers::pi / 2);
  }
}

TEST_CASE("cable_angles: flat configuration gives zero", "[geometry]") {
  const std::vector<double> theta(4, 0.0);
  for (double phi : cable_angles(default_design(), theta)) CHECK(phi == 0.0);
}

TEST_CASE("cable_angles: reference value at theta_2 = 0.5", "[geometry]") {
  const std::vector<double> theta{0.75, 0.5, 0.25, 0.0};
  const auto phi = cable_angles(default_design(), theta);
  // Scalar evaluation in tests/oracles/reference_values.py.
  CHECK_THAT(phi[0], WithinAbs(0.24999999999999992, 1e-14));
  CHECK_THAT(phi[1], WithinAbs(0.125, 1e-14));
  CHECK(phi[2] == 0.0);
}

TEST_CASE("cable_angles: singular band near theta = 2 delta", "[geometry]") {
  const PhalangeDesign d = default_design(1);
  const double delta = d.segment.delta();
  // theta_2 is the forced zero for n = 1, so probe through n = 2.
  const PhalangeDesign d2 = default_design(2);
  std::vector<double> at{0.0, 2.0 * delta, 0.0};
  CHECK_THROWS_AS(cable_angles(d2, at), SingularConfigurationError);

  // Just outside the tolerance band the relation is finite and equals theta/2.
  std::vector<double> near{0.0, 2.0 * delta - 1e-6, 0.0};
  const auto phi = cable_angles(d2, near);
  CHECK(std::isfinite(phi[0]));
  CHECK_THAT(phi[0], WithinAbs(std::asin(std::sin(0.5 * near[1])), 1e-6));

  Tolerances loose;
  loose.singular_denominator = 1e-3;
  CHECK_THROWS_AS(cable_angles(d2, near, loose), SingularConfigurationError);
  (void)d;
}

TEST_CASE("cable_angles: shape errors", "[geometry]") {
  const std::vector<double> theta{0.1, 0.0};
  CHECK_THROWS_AS(cable_angles(default_design(3), theta), ShapeError);
}

TEST_CASE("cable_angles vanish to first order at the flat configuration", "[geometry][property]") {
  const PhalangeDesign d = default_design(1);
  double previous = 1.0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
    std::vector<double> theta{0.0, eps};
    // theta has n + 1 entries; for n = 1 the second is forced to zero in
    // conformation, but the relation itself accepts any value.
    const double phi = cable_angles(d, theta)[0];
    CHECK(std::abs(phi) < previous);
    CHECK_THAT(phi / eps, WithinAbs(0.5, 1e-2));
    std::vector<double> mirrored{0.0, -eps};
    CHECK_THAT(cable_angles(d, mirrored)[0], WithinRel(-phi, 1e-6));
    previous = std::abs(phi);
  }
}

TEST_CASE("forward_kinematics: flat chain layout", "[geometry]") {
  const PhalangeDesign d = default_design(3);
  const std::vector<double> theta(4, 0.0);
  const Configuration c = forward_kinematics(d, theta);
  REQUIRE(c.joints.size() == 4);
  REQUIRE(c.holes.size() == 3);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(c.joints[i].x == 15.0 * static_cast<double>(i));
    CHECK(c.joints[i].y == 0.0);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(c.holes[i].x == 15.0 * static_cast<double>(i) + 7.5);
    CHECK(c.holes[i].y == -6.0);
  }
  CHECK(c.tip.x == 52.5);
  CHECK(c.tip.y == 0.0);
}

TEST_CASE("forward_kinematics: single segment", "[geometry]") {
  const PhalangeDesign d = default_design(1);
  const std::vector<double> theta{0.3, 0.0};
  const Configuration c = forward_kinematics(d, theta);
  REQUIRE(c.holes.size() == 1);
  CHECK_THAT(c.joints[1].x, WithinAbs(15.0 * std::cos(0.3), 1e-12));
  CHECK_THAT(c.joints[1].y, WithinAbs(-15.0 * std::sin(0.3), 1e-12));
}

TEST_CASE("forward_kinematics: conformed chain matches the complex rotation chain", "[geometry]") {
  const PhalangeDesign d = default_design(3);
  const Configuration c = conform(d, GraspScenario::cylinder(45.0, 44.0));
  // Values from tests/oracles/reference_values.py.
  const double joints[4][2] = {{0.0, 0.0},
                               {10.975333033107313, -10.224581400350012},
                               {24.139071461462905, -17.415964479413056},
                               {38.67275778712258, -21.1270238682309}};
  const double holes[3][2] = {{1.3978339564136517, -9.502423913417932},
                              {14.680649015659892, -19.08576831122377},
                              {29.921490868765602, -25.084968704085846}};
  for (int i = 0; i < 4; ++i) {
    CHECK_THAT(c.joints[i].x, WithinAbs(joints[i][0], 1e-12));
    CHECK_THAT(c.joints[i].y, WithinAbs(joints[i][1], 1e-12));
  }
  for (int i = 0; i < 3; ++i) {
    CHECK_THAT(c.holes[i].x, WithinAbs(holes[i][0], 1e-12));
    CHECK_THAT(c.holes[i].y, WithinAbs(holes[i][1], 1e-12));
  }
  CHECK_THAT(c.tip.x, WithinAbs(45.939600949952414, 1e-12));
  CHECK_THAT(c.tip.y, WithinAbs(-22.982553562639822, 1e-12));
}

TEST_CASE("rigid segments, decreasing rotations and bounded reach", "[geometry][property]") {
  testing::Gen gen(7);
  for (int k = 0; k < 2000; ++k) {
    const auto in = gen.instance(8);
    const Configuration c = conform(in.design, in.scenario);
    const double L = in.design.segment.length;
    const std::size_t n = in.design.count();
    for (std::size_t i = 1; i <= n; ++i) {
      CHECK_THAT((c.joints[i] - c.joints[i - 1]).norm(), WithinRel(L, 1e-9));
    }
    for (std::size_t i = 1; i <= n; ++i) CHECK(c.theta[i] < c.theta[i - 1]);
    CHECK(c.theta[n] == 0.0);
    CHECK((c.joints[n] - c.joints[0]).norm() <= n * L * (1.0 + 1e-12));
    for (double phi : c.phi) CHECK(std::isfinite(phi));
  }
}

TEST_CASE("reach equals nL only when all rotations are equal", "[geometry][property]") {
  const PhalangeDesign d = default_design(4);
  std::vector<double> equal(5, 0.2);
  equal[4] = 0.0;
  // Equal rotations of the four segments: a straight, rotated chain.
  const Configuration straight = forward_kinematics(d, equal);
  CHECK_THAT((straight.joints[4] - straight.joints[0]).norm(), WithinRel(60.0, 1e-12));
  const Configuration curled = conform(d, GraspScenario::cylinder(40.0, 1.0));
  CHECK((curled.joints[4] - curled.joints[0]).norm() < 60.0 - 1e-6);
}
