#pragma once

// Per-segment rigid-body equilibrium of the loaded chain. This is an
// independent route to the fingertip force: it never evaluates the closed-form
// moment sums, it assembles force and moment balances for every segment and
// solves for the pin reactions and the tip force together.

#include <algorithm>
#include <cmath>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "finger_statics/cable_statics.hpp"
#include "finger_statics/errors.hpp"
#include "finger_statics/geometry.hpp"

namespace finger_statics {

enum class LoadKind { kTerminalTension, kKink, kFriction };

struct AppliedLoad {
  std::size_t segment{0};  // 0-based body index
  LoadKind kind{LoadKind::kKink};
  Vec2 force{};
  Vec2 point{};
};

struct LoadedChain {
  Configuration configuration;
  std::vector<AppliedLoad> loads;
  Vec2 tip_direction{};  // unit; the tip force is p_tip * tip_direction

  std::size_t segments() const { return configuration.segments(); }
};

/// Builds the applied loads from the cable model. The tension, kink and
/// friction groups each keep the direction vectors of the closed form, with
/// one orientation per group chosen so the group flexes the chain; the tip
/// force direction is oriented to resist flexion.
inline LoadedChain load_chain(const PhalangeDesign& design, const Configuration& conf,
                              const TensionProfile& tensions, std::span<const double> kinks,
                              const StaticsOptions& options = {}) {
  const std::size_t n = design.count();
  if (conf.holes.size() != n || kinks.size() != n || tensions.frictions.size() != n) {
    throw ShapeError("load_chain: configuration, tensions and kink forces disagree on segment count");
  }
  LoadedChain chain;
  chain.configuration = conf;

  auto orient = [](std::vector<AppliedLoad>& group) {
    double flex = 0.0;
    for (const auto& l : group) flex -= cross(l.point, l.force);
    if (flex < 0.0) {
      for (auto& l : group) l.force = -l.force;
    }
  };

  std::vector<AppliedLoad> terminal{{n - 1, LoadKind::kTerminalTension,
                                     tensions.terminal_tension *
                                         terminal_direction(design, conf, options),
                                     terminal_anchor(design, conf, options)}};
  std::vector<AppliedLoad> kink_group;
  std::vector<AppliedLoad> friction_group;
  for (std::size_t i = 0; i < n; ++i) {
    kink_group.push_back({i, LoadKind::kKink, kinks[i] * kink_direction(conf, i), conf.holes[i]});
    friction_group.push_back(
        {i, LoadKind::kFriction, tensions.frictions[i] * friction_direction(conf, i), conf.holes[i]});
  }
  for (auto* group : {&terminal, &kink_group, &friction_group}) {
    orient(*group);
    chain.loads.insert(chain.loads.end(), group->begin(), group->end());
  }

  Vec2 d = tip_direction(design, conf);
  // The tip reaction opposes flexion, i.e. its flexion moment is negative.
  if (-cross(conf.tip, d) > 0.0) d = -d;
  chain.tip_direction = d;
  return chain;
}

enum class OracleMode {
  // Tip force along the fixed direction; the conformed chain is held at the
  // intermediate joints by internal moments carried between adjacent segments.
  kConstrainedTip,
  // Frictionless intermediate pins and a free tip force (two unknowns). For
  // sensitivity studies: the system is generally not consistent and the
  // least-squares residual is reported instead of raising.
  kFreeTip,
};

struct OracleSolution {
  double p_tip{0.0};
  Vec2 tip_force{};
  std::vector<Vec2> pin_reactions;     // force on segment i from its proximal neighbour, at J_{i}
  std::vector<double> holding_moments; // at J_1..J_{n-1}, on the distal segment
  double residual{0.0};
  int rank{0};
  int unknowns{0};
};

struct OracleOptions {
  OracleMode mode{OracleMode::kConstrainedTip};
  double rank_tolerance{1e-10};      // relative to the largest singular value
  double residual_tolerance{1e-9};   // relative to max(1, largest right-hand side entry)
};

namespace detail {

inline std::string describe_unknown(OracleMode mode, std::size_t n, Eigen::Index k) {
  const auto idx = static_cast<std::size_t>(k);
  if (idx < 2 * n) {
    return std::string("pin reaction ") + (idx % 2 == 0 ? "x" : "y") + " at J_" +
           std::to_string(idx / 2);
  }
  if (mode == OracleMode::kConstrainedTip) {
    if (idx < 3 * n - 1) return "holding moment at J_" + std::to_string(idx - 2 * n + 1);
    return "tip force magnitude";
  }
  return std::string("tip force ") + (idx == 2 * n ? "x" : "y");
}

}  // namespace detail

/// Solves 2 force + 1 moment equations per segment for the pin reactions,
/// the holding moments and the tip force.
inline OracleSolution solve_equilibrium(const LoadedChain& chain, const OracleOptions& options = {}) {
  const std::size_t n = chain.segments();
  const Configuration& conf = chain.configuration;
  if (n == 0 || conf.joints.size() != n + 1) {
    throw ShapeError("solve_equilibrium: configuration has no segments");
  }
  const bool constrained = options.mode == OracleMode::kConstrainedTip;
  const std::size_t rows = 3 * n;
  const std::size_t cols = constrained ? 3 * n : 2 * n + 2;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows),
                                            static_cast<Eigen::Index>(cols));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows));
  auto fx = [](std::size_t s) { return static_cast<Eigen::Index>(3 * s); };
  auto fy = [](std::size_t s) { return static_cast<Eigen::Index>(3 * s + 1); };
  auto mz = [](std::size_t s) { return static_cast<Eigen::Index>(3 * s + 2); };
  auto col = [](std::size_t c) { return static_cast<Eigen::Index>(c); };

  // Moments of segment s are taken about its proximal joint J_s.
  for (std::size_t s = 0; s < n; ++s) {
    const Vec2 base = conf.joints[s];
    // Reaction R_s acts on segment s at J_s (zero arm).
    a(fx(s), col(2 * s)) += 1.0;
    a(fy(s), col(2 * s + 1)) += 1.0;
    if (s + 1 < n) {
      // -R_{s+1} acts on segment s at J_{s+1}.
      const Vec2 arm = conf.joints[s + 1] - base;
      a(fx(s), col(2 * s + 2)) -= 1.0;
      a(fy(s), col(2 * s + 3)) -= 1.0;
      a(mz(s), col(2 * s + 2)) -= -arm.y;  // cross(arm, e_x) = -arm.y
      a(mz(s), col(2 * s + 3)) -= arm.x;   // cross(arm, e_y) = arm.x
    }
    if (constrained) {
      if (s >= 1) a(mz(s), col(2 * n + s - 1)) += 1.0;
      if (s + 1 < n) a(mz(s), col(2 * n + s)) -= 1.0;
    }
  }
  const std::size_t last = n - 1;
  const Vec2 tip_arm = conf.tip - conf.joints[last];
  if (constrained) {
    const Vec2 d = chain.tip_direction;
    a(fx(last), col(3 * n - 1)) += d.x;
    a(fy(last), col(3 * n - 1)) += d.y;
    a(mz(last), col(3 * n - 1)) += cross(tip_arm, d);
  } else {
    a(fx(last), col(2 * n)) += 1.0;
    a(fy(last), col(2 * n + 1)) += 1.0;
    a(mz(last), col(2 * n)) += -tip_arm.y;
    a(mz(last), col(2 * n + 1)) += tip_arm.x;
  }
  for (const AppliedLoad& load : chain.loads) {
    if (load.segment >= n) {
      throw ShapeError("solve_equilibrium: load applied to a segment outside the chain");
    }
    b(fx(load.segment)) -= load.force.x;
    b(fy(load.segment)) -= load.force.y;
    b(mz(load.segment)) -= cross(load.point - conf.joints[load.segment], load.force);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(options.rank_tolerance);
  OracleSolution out;
  out.rank = static_cast<int>(svd.rank());
  out.unknowns = static_cast<int>(cols);
  if (constrained && out.rank < static_cast<int>(cols)) {
    const Eigen::VectorXd null = svd.matrixV().col(static_cast<Eigen::Index>(cols) - 1);
    Eigen::Index worst = 0;
    null.cwiseAbs().maxCoeff(&worst);
    std::ostringstream msg;
    msg << "equilibrium system is rank deficient (rank " << out.rank << " of " << cols
        << "); free direction dominated by " << detail::describe_unknown(options.mode, n, worst);
    throw MechanismError(msg.str());
  }
  const Eigen::VectorXd x = svd.solve(b);
  out.residual = (a * x - b).cwiseAbs().maxCoeff();

  out.pin_reactions.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    out.pin_reactions[s] = {x(col(2 * s)), x(col(2 * s + 1))};
  }
  if (constrained) {
    for (std::size_t k = 0; k + 1 < n; ++k) out.holding_moments.push_back(x(col(2 * n + k)));
    out.p_tip = x(col(3 * n - 1));
    out.tip_force = out.p_tip * chain.tip_direction;
  } else {
    out.tip_force = {x(col(2 * n)), x(col(2 * n + 1))};
    out.p_tip = out.tip_force.norm();
  }

  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (constrained && out.residual > options.residual_tolerance * scale) {
    std::ostringstream msg;
    msg << "equilibrium residual " << out.residual << " exceeds tolerance";
    throw InconsistencyError(msg.str());
  }
  return out;
}

/// Moment of every external load (applied plus tip) about O. The reaction at
/// O has no arm, so a solved chain leaves only round-off.
inline double whole_chain_moment_check(const LoadedChain& chain, const OracleSolution& solution) {
  double moment = cross(chain.configuration.tip, solution.tip_force);
  for (const AppliedLoad& load : chain.loads) {
    moment += cross(load.point, load.force);
  }
  return std::abs(moment);
}

/// Closed-form inputs for a grasp, assembled into a loaded chain.
inline LoadedChain load_chain(const PhalangeDesign& design, const StaticsSolution& solution,
                              const StaticsOptions& options = {}) {
  return load_chain(design, solution.configuration, solution.tensions, solution.kink_forces,
                    options);
}

}  // namespace finger_statics
