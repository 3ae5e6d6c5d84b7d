#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finger_statics/errors.hpp"

namespace finger_statics {

// Planar vector in the model frame: knuckle O at the origin, the flat chain
// along +x, the palm (cable passage) side along -y. Lengths in mm.
struct Vec2 {
  double x{0.0};
  double y{0.0};

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
};

/// z-component of a x b.
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Numerical guards. All are absolute except `degenerate_lever`, which is
/// relative to |r_tip|.
struct Tolerances {
  double singular_denominator{1e-9};
  double arcsin_clamp{1e-9};
  double degenerate_lever{1e-9};
};

/// One diamond-shaped segment.
struct SegmentGeometry {
  double length{15.0};         // pin-to-pin, mm
  double passage_depth{6.0};   // cable passage below the pin line, mm
  double tip_length{7.5};      // distal pin to fingertip contact, mm
  double tip_angle{0.0};       // tip inclination in the unrotated segment, rad

  /// Segment with the default tip: half a segment length out, no inclination.
  static SegmentGeometry with_default_tip(double length, double passage_depth) {
    return {length, passage_depth, 0.5 * length, 0.0};
  }

  /// Half-angle of the diamond at the cable passage, atan(L / 2 H2).
  double delta() const { return std::atan(length / (2.0 * passage_depth)); }

  void validate() const {
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw DomainError("segment length must be positive and finite");
    }
    if (!(passage_depth > 0.0) || !std::isfinite(passage_depth)) {
      throw DomainError("cable passage depth must be positive and finite");
    }
    if (!(tip_length >= 0.0) || !std::isfinite(tip_length)) {
      throw DomainError("tip length must be non-negative and finite");
    }
    if (!std::isfinite(tip_angle)) {
      throw DomainError("tip angle must be finite");
    }
  }
};

/// A chain of identical segments and the per-passage loss coefficient.
struct PhalangeDesign {
  int segments{3};
  SegmentGeometry segment{};
  double loss{1.0};  // c in (0, 1]

  std::size_t count() const { return static_cast<std::size_t>(segments); }

  void validate() const {
    if (segments < 1) {
      throw DomainError("segment count must be at least 1");
    }
    segment.validate();
    if (!(loss > 0.0 && loss <= 1.0)) {
      throw DomainError("loss coefficient must lie in (0, 1]");
    }
  }
};

/// Grasped object and cable input. An empty radius is the flat (open) hand.
struct GraspScenario {
  std::optional<double> radius{};  // mm
  double input_tension{0.0};       // N

  static GraspScenario flat(double tension) { return {std::nullopt, tension}; }
  static GraspScenario cylinder(double radius, double tension) {
    return {radius, tension};
  }

  bool is_flat() const { return !radius.has_value(); }

  void validate() const {
    if (radius && !(*radius > 0.0)) {
      throw DomainError("object radius must be positive (use the flat scenario for an open hand)");
    }
    if (!(input_tension >= 0.0) || !std::isfinite(input_tension)) {
      throw DomainError("input tension must be non-negative and finite");
    }
  }
};

/// Conformal configuration of the chain and every position the statics need.
struct Configuration {
  std::vector<double> theta;          // n+1 segment rotations, theta[n] == 0
  std::vector<double> phi;            // n cable-direction angles
  std::vector<Vec2> joints;           // J_0 .. J_n, J_0 = O
  std::vector<Vec2> holes;            // h_1 .. h_n
  Vec2 tip{};

  std::size_t segments() const { return holes.size(); }

  /// Unit axis of segment i (0-based), rotated toward the palm by theta[i].
  Vec2 axis(std::size_t i) const { return {std::cos(theta[i]), -std::sin(theta[i])}; }
  /// Palm-side unit normal of segment i (0-based).
  Vec2 palm_normal(std::size_t i) const { return {-std::sin(theta[i]), -std::cos(theta[i])}; }
};

/// Segment rotations for a chain wrapped perfectly around the object:
/// theta_i = (nL/R)(1 - i/(n+1)), i = 1..n+1. The last entry is exactly zero.
inline std::vector<double> conform_angles(const PhalangeDesign& design,
                                          const GraspScenario& scenario) {
  design.validate();
  scenario.validate();
  const std::size_t n = design.count();
  std::vector<double> theta(n + 1, 0.0);
  if (scenario.is_flat()) {
    return theta;
  }
  const double wrap = static_cast<double>(n) * design.segment.length / *scenario.radius;
  const double denom = static_cast<double>(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    theta[i - 1] = wrap * (1.0 - static_cast<double>(i) / denom);
  }
  theta[n] = 0.0;
  return theta;
}

/// Cable-direction angles phi_1..phi_n from the segment rotations:
///   sin phi_i = [cos(delta - theta_{i+1}) - cos(delta)] / [2 sin(delta - theta_{i+1}/2)]
inline std::vector<double> cable_angles(const PhalangeDesign& design,
                                        std::span<const double> theta,
                                        const Tolerances& tol = {}) {
  design.validate();
  const std::size_t n = design.count();
  if (theta.size() != n + 1) {
    throw ShapeError("cable_angles: expected " + std::to_string(n + 1) +
                     " segment rotations, got " + std::to_string(theta.size()));
  }
  const double delta = design.segment.delta();
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double next = theta[i + 1];
    if (!std::isfinite(next)) {
      throw DomainError("cable_angles: non-finite segment rotation");
    }
    const double denominator = 2.0 * std::sin(delta - 0.5 * next);
    if (std::abs(denominator) < tol.singular_denominator) {
      throw SingularConfigurationError(
          "cable direction relation sin(phi_" + std::to_string(i + 1) +
          ") = [cos(delta - theta) - cos(delta)] / [2 sin(delta - theta/2)]: "
          "denominator vanishes (theta_" + std::to_string(i + 2) + " = 2 delta)");
    }
    double s = (std::cos(delta - next) - std::cos(delta)) / denominator;
    if (std::abs(s) > 1.0) {
      if (std::abs(s) > 1.0 + tol.arcsin_clamp) {
        throw InfeasibleConformationError(
            "cable direction relation sin(phi_" + std::to_string(i + 1) +
            "): argument " + std::to_string(s) + " outside [-1, 1]");
      }
      s = std::copysign(1.0, s);
    }
    phi[i] = std::asin(s);
  }
  return phi;
}

/// Joint, hole and tip positions for a list of segment rotations.
inline Configuration forward_kinematics(const PhalangeDesign& design,
                                        std::span<const double> theta,
                                        const Tolerances& tol = {}) {
  Configuration conf;
  conf.phi = cable_angles(design, theta, tol);
  conf.theta.assign(theta.begin(), theta.end());

  const std::size_t n = design.count();
  const SegmentGeometry& seg = design.segment;
  conf.joints.reserve(n + 1);
  conf.holes.reserve(n);
  conf.joints.push_back(Vec2{});
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 base = conf.joints.back();
    const Vec2 u = conf.axis(i);
    const Vec2 m = conf.palm_normal(i);
    conf.holes.push_back(base + (0.5 * seg.length) * u + seg.passage_depth * m);
    conf.joints.push_back(base + seg.length * u);
  }
  const double tip_rotation = conf.theta[n - 1] + seg.tip_angle;
  conf.tip = conf.joints.back() +
             seg.tip_length * Vec2{std::cos(tip_rotation), -std::sin(tip_rotation)};
  return conf;
}

/// Conformal configuration for a grasp.
inline Configuration conform(const PhalangeDesign& design, const GraspScenario& scenario,
                             const Tolerances& tol = {}) {
  const std::vector<double> theta = conform_angles(design, scenario);
  return forward_kinematics(design, theta, tol);
}

}  // namespace finger_statics
