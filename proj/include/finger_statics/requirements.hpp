#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finger_statics/errors.hpp"
#include "finger_statics/geometry.hpp"

namespace finger_statics {

inline constexpr double kGravity = 9.81;  // m/s^2

/// Fingertip force needed to hold `mass` against gravity by friction alone:
/// contacts * mu * P >= m g, scaled by the safety factor.
inline double required_fingertip_force(double mass, double mu, double safety_factor,
                                       int contacts) {
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
  if (!(mu > 0.0)) throw DomainError("friction coefficient must be positive");
  if (!(safety_factor > 0.0)) throw DomainError("safety factor must be positive");
  if (contacts <= 0) throw DomainError("contact count must be positive");
  return safety_factor * mass * kGravity / (static_cast<double>(contacts) * mu);
}

constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Anatomical range of one joint, degrees. Extension is stored negative and
/// may be unknown (the thumb table lists flexion only).
struct JointLimit {
  std::string name;
  double flexion{0.0};
  double flexion_sd{0.0};
  std::optional<double> extension{};
  double extension_sd{0.0};
};

enum class Digit { kFinger, kThumb };

/// Ordered proximal to distal.
struct RomLimits {
  Digit digit{Digit::kFinger};
  std::vector<JointLimit> joints;

  void validate() const {
    if (joints.empty()) throw DomainError("ROM limits need at least one joint");
    for (const auto& j : joints) {
      if (!(j.flexion > 0.0)) throw DomainError("joint " + j.name + ": flexion limit must be positive");
      if (j.extension && !(*j.extension < 0.0)) {
        throw DomainError("joint " + j.name + ": extension limit must be negative");
      }
      if (j.flexion_sd < 0.0 || j.extension_sd < 0.0) {
        throw DomainError("joint " + j.name + ": standard deviations must be non-negative");
      }
    }
  }
};

/// Finger MCP/PIP/DIP active ranges.
inline RomLimits finger_rom_limits() {
  return {Digit::kFinger,
          {{"MCP", 90.0, 9.1, -19.0, 6.9},
           {"PIP", 101.0, 8.3, -7.0, 3.7},
           {"DIP", 84.0, 8.5, -6.0, 4.1}}};
}

/// Thumb MCP/IP flexion ranges; extension is not tabulated.
inline RomLimits thumb_rom_limits() {
  return {Digit::kThumb, {{"MCP", 60.0, 5.5, std::nullopt, 0.0}, {"IP", 88.0, 9.2, std::nullopt, 0.0}}};
}

struct JointCheck {
  std::string name;
  double angle{0.0};   // deg
  double flexion_limit{0.0};
  std::optional<double> extension_limit{};
  double margin{0.0};  // deg to the nearest violated or active limit; negative on failure
  bool pass{true};
};

struct RomReport {
  std::vector<JointCheck> joints;
  bool admissible{true};
  bool heuristic_mapping{false};
  std::string mapping;
  std::optional<std::string> failure_reason{};
};

/// Per-segment joint angles: theta_1 at the knuckle, then |theta_k - theta_{k-1}|.
inline std::vector<double> segment_joint_angles(std::span<const double> theta, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = k == 0 ? theta[0] : std::abs(theta[k] - theta[k - 1]);
  }
  return out;
}

/// Joint-by-joint admissibility of the conformed chain. With one segment per
/// anatomical joint the mapping is direct; otherwise segment joints are
/// grouped proportionally and their angles summed.
inline RomReport rom_check(const PhalangeDesign& design, const GraspScenario& scenario,
                           const RomLimits& limits, double sd_multiplier = 0.0,
                           const Tolerances& tol = {}) {
  limits.validate();
  if (!(sd_multiplier >= 0.0)) throw DomainError("SD multiplier must be non-negative");
  RomReport report;
  const std::size_t joints = limits.joints.size();
  const std::size_t n = design.count();
  report.heuristic_mapping = n != joints;
  report.mapping = report.heuristic_mapping
                       ? "proportional: " + std::to_string(n) + " segment joints grouped onto " +
                             std::to_string(joints) + " anatomical joints (heuristic)"
                       : "one segment per anatomical joint";

  std::vector<double> theta;
  try {
    theta = conform_angles(design, scenario);
    (void)cable_angles(design, theta, tol);
  } catch (const ModelError& e) {
    report.admissible = false;
    report.failure_reason = std::string("conformation infeasible: ") + e.what();
    for (const auto& j : limits.joints) {
      report.joints.push_back({j.name, 0.0, j.flexion, j.extension, 0.0, false});
    }
    return report;
  }

  const std::vector<double> per_segment = segment_joint_angles(theta, n);
  std::vector<double> grouped(joints, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    grouped[k * joints / n] += per_segment[k];
  }
  for (std::size_t j = 0; j < joints; ++j) {
    const JointLimit& lim = limits.joints[j];
    JointCheck check;
    check.name = lim.name;
    check.angle = rad_to_deg(grouped[j]);
    check.flexion_limit = lim.flexion + sd_multiplier * lim.flexion_sd;
    if (lim.extension) check.extension_limit = *lim.extension - sd_multiplier * lim.extension_sd;
    const double to_flexion = check.flexion_limit - check.angle;
    const double to_extension =
        check.extension_limit ? check.angle - *check.extension_limit : to_flexion;
    check.margin = std::min(to_flexion, to_extension);
    check.pass = check.margin >= 0.0;
    if (!check.pass) {
      report.admissible = false;
      if (!report.failure_reason) {
        report.failure_reason = "joint " + lim.name + " exceeds its range by " +
                                std::to_string(-check.margin) + " deg";
      }
    }
    report.joints.push_back(check);
  }
  return report;
}

}  // namespace finger_statics
