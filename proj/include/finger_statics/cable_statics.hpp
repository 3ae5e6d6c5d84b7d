#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "finger_statics/errors.hpp"
#include "finger_statics/geometry.hpp"

namespace finger_statics {

/// Direction assumed for the terminal cable tension in the moment balance.
enum class TerminalDirection {
  kTipAligned,  // same direction as the fingertip force, [sin beta, cos beta]
  kAlongCable,  // from the anchor back toward the previous cable passage
};

struct StaticsOptions {
  TerminalDirection terminal{TerminalDirection::kTipAligned};
  double anchor_offset{0.0};  // terminal anchor distance past h_n along segment n, mm
  Tolerances tolerances{};
};

/// Cable tension along the chain with a constant per-passage retention c.
struct TensionProfile {
  std::vector<double> segment_tensions;  // T_{0,1} .. T_{n-1,n}
  double terminal_tension{0.0};          // T_n
  std::vector<double> frictions;         // f_1 .. f_n
};

/// T_{i,i+1} = c T_{i-1,i}; T_n = c^n T_o; f_i = c^(i-1) (1 - c) T_o.
inline TensionProfile tension_profile(const PhalangeDesign& design, double input_tension) {
  design.validate();
  if (!(input_tension >= 0.0) || !std::isfinite(input_tension)) {
    throw DomainError("input tension must be non-negative and finite");
  }
  const std::size_t n = design.count();
  const double c = design.loss;
  TensionProfile out;
  out.segment_tensions.resize(n);
  out.frictions.resize(n);
  double tension = input_tension;
  for (std::size_t i = 0; i < n; ++i) {
    out.segment_tensions[i] = tension;
    const double next = c * tension;
    out.frictions[i] = tension - next;
    tension = next;
  }
  out.terminal_tension = tension;
  return out;
}

/// Normal force where the cable turns at each passage:
///   F_i = 2 c T_{i-1,i} sin((phi_{i+1} - phi_i) / 2), with phi_{n+1} = 0.
inline std::vector<double> kink_forces(const PhalangeDesign& design,
                                       const TensionProfile& tensions,
                                       std::span<const double> phi) {
  const std::size_t n = design.count();
  if (phi.size() != n || tensions.segment_tensions.size() != n) {
    throw ShapeError("kink_forces: expected " + std::to_string(n) +
                     " cable angles and segment tensions");
  }
  std::vector<double> forces(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double next_phi = i + 1 < n ? phi[i + 1] : 0.0;
    forces[i] = 2.0 * design.loss * tensions.segment_tensions[i] *
                std::sin(0.5 * (next_phi - phi[i]));
  }
  return forces;
}

/// The three moment contributions about O. Magnitudes enter the balance; the
/// flexion-positive signed values are kept for auditing the convention.
struct MomentTerms {
  double tension{0.0};
  double kinks{0.0};
  double friction{0.0};
  double signed_tension{0.0};
  double signed_kinks{0.0};
  double signed_friction{0.0};

  double total() const { return tension + kinks + friction; }
};

/// beta = theta_n - theta_tip.
inline double tip_inclination(const PhalangeDesign& design, const Configuration& conf) {
  return conf.theta.at(design.count() - 1) - design.segment.tip_angle;
}

/// Fingertip force line direction, [sin beta, cos beta].
inline Vec2 tip_direction(const PhalangeDesign& design, const Configuration& conf) {
  const double beta = tip_inclination(design, conf);
  return {std::sin(beta), std::cos(beta)};
}

/// Point where the cable terminates on segment n.
inline Vec2 terminal_anchor(const PhalangeDesign& design, const Configuration& conf,
                            const StaticsOptions& options) {
  const std::size_t n = design.count();
  return conf.holes.at(n - 1) + options.anchor_offset * conf.axis(n - 1);
}

/// Unit direction of the terminal tension acting on the anchor.
inline Vec2 terminal_direction(const PhalangeDesign& design, const Configuration& conf,
                               const StaticsOptions& options) {
  if (options.terminal == TerminalDirection::kTipAligned) {
    return tip_direction(design, conf);
  }
  const std::size_t n = design.count();
  const Vec2 anchor = terminal_anchor(design, conf, options);
  const Vec2 back = n >= 2 ? conf.holes[n - 2] - anchor : -conf.axis(0);
  const double len = back.norm();
  if (len == 0.0) {
    return -conf.axis(n - 1);
  }
  return back * (1.0 / len);
}

/// Kink force direction at passage i (0-based): (sin theta_i, cos theta_i).
inline Vec2 kink_direction(const Configuration& conf, std::size_t i) {
  return {std::sin(conf.theta[i]), std::cos(conf.theta[i])};
}

/// Friction direction at passage i (0-based): (cos phi_i, sin phi_i).
inline Vec2 friction_direction(const Configuration& conf, std::size_t i) {
  return {std::cos(conf.phi[i]), std::sin(conf.phi[i])};
}

/// Flexion curls the chain toward -y, i.e. clockwise, so the flexion-positive
/// moment about O is -(r x F).
constexpr double flexion_moment(Vec2 r, Vec2 force) { return -cross(r, force); }

inline MomentTerms moment_terms(const PhalangeDesign& design, const Configuration& conf,
                                const TensionProfile& tensions,
                                std::span<const double> kinks,
                                const StaticsOptions& options = {}) {
  const std::size_t n = design.count();
  if (conf.holes.size() != n || conf.theta.size() != n + 1 || conf.phi.size() != n ||
      kinks.size() != n || tensions.frictions.size() != n) {
    throw ShapeError("moment_terms: configuration, tensions and kink forces disagree on segment count");
  }
  MomentTerms m;
  const Vec2 anchor = terminal_anchor(design, conf, options);
  m.signed_tension = flexion_moment(
      anchor, tensions.terminal_tension * terminal_direction(design, conf, options));
  for (std::size_t i = 0; i < n; ++i) {
    m.signed_kinks += flexion_moment(conf.holes[i], kinks[i] * kink_direction(conf, i));
    m.signed_friction +=
        flexion_moment(conf.holes[i], tensions.frictions[i] * friction_direction(conf, i));
  }
  m.tension = std::abs(m.signed_tension);
  m.kinks = std::abs(m.signed_kinks);
  m.friction = std::abs(m.signed_friction);
  return m;
}

struct StaticsSolution {
  Configuration configuration;
  TensionProfile tensions;
  std::vector<double> kink_forces;
  MomentTerms moments;
  double beta{0.0};
  double p_tip{0.0};
  Vec2 p_tip_vector{};
  double tip_lever{0.0};  // |r_tip x direction|, mm

  /// P_tip / T_o, or 0 for zero input.
  double transmission_ratio(double input_tension) const {
    return input_tension > 0.0 ? p_tip / input_tension : 0.0;
  }
};

/// Fingertip force from the moment balance about the knuckle:
///   |P_tip x r_tip| = |M_Tn| + |M_Fi| + |M_fi|
inline StaticsSolution fingertip_force(const PhalangeDesign& design,
                                       const GraspScenario& scenario,
                                       const StaticsOptions& options = {}) {
  StaticsSolution sol;
  sol.configuration = conform(design, scenario, options.tolerances);
  sol.tensions = tension_profile(design, scenario.input_tension);
  sol.kink_forces = kink_forces(design, sol.tensions, sol.configuration.phi);
  sol.moments = moment_terms(design, sol.configuration, sol.tensions, sol.kink_forces, options);
  sol.beta = tip_inclination(design, sol.configuration);

  const Vec2 direction = tip_direction(design, sol.configuration);
  const Vec2 tip = sol.configuration.tip;
  sol.tip_lever = std::abs(cross(tip, direction));
  if (sol.tip_lever < options.tolerances.degenerate_lever * std::max(1.0, tip.norm())) {
    throw DegenerateLeverError("fingertip force line passes through the knuckle (lever " +
                               std::to_string(sol.tip_lever) + " mm)");
  }
  sol.p_tip = sol.moments.total() / sol.tip_lever;
  sol.p_tip_vector = sol.p_tip * direction;
  return sol;
}

}  // namespace finger_statics
