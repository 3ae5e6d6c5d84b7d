#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "finger_statics/cable_statics.hpp"
#include "finger_statics/errors.hpp"
#include "finger_statics/nelder_mead.hpp"

namespace finger_statics {

/// Closed interval sampled at `steps` evenly spaced points (min only when steps == 1).
struct Axis {
  double min{0.0};
  double max{0.0};
  int steps{1};

  static Axis point(double v) { return {v, v, 1}; }

  bool collapsed() const { return !(max > min); }

  double at(int k) const {
    if (steps <= 1) return min;
    if (k == steps - 1) return max;
    return min + (max - min) * static_cast<double>(k) / static_cast<double>(steps - 1);
  }
};

struct SegmentAxis {
  int min{3};
  int max{3};
};

struct DesignSpace {
  SegmentAxis segments{};
  Axis length{Axis::point(15.0)};
  Axis passage_depth{Axis::point(6.0)};
  Axis loss{Axis::point(1.0)};
  std::optional<double> tip_length{};  // default: half the segment length
  double tip_angle{0.0};
  GraspScenario scenario{};

  void validate() const {
    if (segments.min < 1 || segments.max < segments.min) {
      throw DomainError("design space: segment range must satisfy 1 <= min <= max");
    }
    auto check = [](const Axis& a, const char* name, double floor, bool floor_open, double ceil) {
      if (a.steps < 1) throw DomainError(std::string("design space: ") + name + " steps must be >= 1");
      if (a.max < a.min) throw DomainError(std::string("design space: ") + name + " max < min");
      if (floor_open ? !(a.min > floor) : !(a.min >= floor)) {
        throw DomainError(std::string("design space: ") + name + " below its admissible range");
      }
      if (a.max > ceil) throw DomainError(std::string("design space: ") + name + " above its admissible range");
    };
    constexpr double inf = std::numeric_limits<double>::infinity();
    check(length, "length", 0.0, true, inf);
    check(passage_depth, "passage depth", 0.0, true, inf);
    check(loss, "loss coefficient", 0.0, true, 1.0);
    if (tip_length && !(*tip_length >= 0.0)) throw DomainError("design space: tip length must be >= 0");
    scenario.validate();
  }

  PhalangeDesign design_at(int n, double length_mm, double depth_mm, double c) const {
    return {n, {length_mm, depth_mm, tip_length.value_or(0.5 * length_mm), tip_angle}, c};
  }
};

struct SweepRow {
  int segments{0};
  double length{0.0};
  double passage_depth{0.0};
  double loss{0.0};
  double p_tip{0.0};
  bool feasible{false};
  std::string error;
};

/// Evaluates the fingertip force on the full grid. Rows come out in
/// lexicographic order of (n, L, H2, c) regardless of thread count.
inline std::vector<SweepRow> sweep(const DesignSpace& space, const StaticsOptions& options = {},
                                   unsigned threads = 0) {
  space.validate();
  std::vector<SweepRow> rows;
  for (int n = space.segments.min; n <= space.segments.max; ++n) {
    for (int i = 0; i < std::max(space.length.steps, 1); ++i) {
      for (int j = 0; j < std::max(space.passage_depth.steps, 1); ++j) {
        for (int k = 0; k < std::max(space.loss.steps, 1); ++k) {
          rows.push_back({n, space.length.at(i), space.passage_depth.at(j), space.loss.at(k), 0.0, false, {}});
        }
      }
    }
  }

  auto evaluate = [&](SweepRow& row) {
    try {
      const PhalangeDesign d = space.design_at(row.segments, row.length, row.passage_depth, row.loss);
      row.p_tip = fingertip_force(d, space.scenario, options).p_tip;
      row.feasible = std::isfinite(row.p_tip);
      if (!row.feasible) row.error = "non-finite fingertip force";
    } catch (const ModelError& e) {
      row.feasible = false;
      row.p_tip = 0.0;
      row.error = e.what();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(rows.size() / 64, 1)));
  if (threads <= 1) {
    for (auto& r : rows) evaluate(r);
    return rows;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (rows.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(rows.size(), begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      for (std::size_t r = begin; r < end; ++r) evaluate(rows[r]);
    });
  }
  pool.clear();
  return rows;
}

/// Index of the first feasible row with the largest fingertip force.
inline std::optional<std::size_t> best_row(const std::vector<SweepRow>& rows) {
  std::optional<std::size_t> best;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].feasible && (!best || rows[r].p_tip > rows[*best].p_tip)) best = r;
  }
  return best;
}

struct OptimizeReport {
  PhalangeDesign design{};
  double p_tip{0.0};
  double ratio{0.0};          // P_tip / T_o of the best design
  SweepRow seed{};            // best row of the seeding sweep (at the scenario tension)
  std::size_t seed_grid_points{0};
  std::vector<std::string> free_parameters;
  int evaluations{0};         // simplex evaluations, excluding the seeding sweep
  int restarts{0};
  bool converged{false};
  NelderMeadOptions hyperparameters{};
};

/// Maximises the fingertip force over the continuous axes of the space
/// (those of L, H2 and c with max > min) for a fixed segment count. The
/// search starts from the best point of the space's own grid and never
/// returns anything worse. The objective is the transmission ratio
/// P_tip / T_o, so the argmax does not depend on the input tension.
inline OptimizeReport optimize(const DesignSpace& space, const StaticsOptions& options = {},
                               const NelderMeadOptions& nm = {}) {
  space.validate();
  if (space.segments.min != space.segments.max) {
    throw DomainError("optimize: the segment count must be fixed (min == max)");
  }
  const int n = space.segments.min;

  DesignSpace unit = space;
  unit.scenario.input_tension = 1.0;
  // Every continuous axis gets at least its two end points in the seeding grid.
  for (Axis* a : {&unit.length, &unit.passage_depth, &unit.loss}) {
    if (!a->collapsed()) a->steps = std::max(a->steps, 2);
    else a->steps = 1;
  }
  const std::vector<SweepRow> grid = sweep(unit, options);
  const auto seed_index = best_row(grid);
  if (!seed_index) {
    throw NoFeasibleDesignError("optimize: no feasible design in the seeding grid");
  }

  OptimizeReport report;
  report.hyperparameters = nm;
  report.seed_grid_points = grid.size();

  const Axis* axes[3] = {&space.length, &space.passage_depth, &space.loss};
  const char* names[3] = {"length_mm", "passage_depth_mm", "loss_coefficient"};
  const SweepRow& s = grid[*seed_index];
  const double seed_values[3] = {s.length, s.passage_depth, s.loss};
  std::vector<int> free;
  std::vector<double> start, lower, upper;
  for (int k = 0; k < 3; ++k) {
    if (!axes[k]->collapsed()) {
      free.push_back(k);
      start.push_back(seed_values[k]);
      lower.push_back(axes[k]->min);
      upper.push_back(axes[k]->max);
      report.free_parameters.emplace_back(names[k]);
    }
  }

  auto assemble = [&](std::span<const double> x) {
    double v[3] = {seed_values[0], seed_values[1], seed_values[2]};
    for (std::size_t f = 0; f < free.size(); ++f) v[free[f]] = x[f];
    return space.design_at(n, v[0], v[1], v[2]);
  };
  auto negative_ratio = [&](std::span<const double> x) {
    try {
      return -fingertip_force(assemble(x), unit.scenario, options).p_tip;
    } catch (const ModelError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const NelderMeadResult result = nelder_mead_box(negative_ratio, start, lower, upper, nm);
  report.evaluations = result.evaluations;
  report.restarts = result.restarts;
  report.converged = result.converged;
  report.design = assemble(result.x);
  report.ratio = -result.value;
  report.p_tip = fingertip_force(report.design, space.scenario, options).p_tip;

  report.seed = s;
  report.seed.p_tip =
      fingertip_force(space.design_at(n, s.length, s.passage_depth, s.loss), space.scenario, options).p_tip;
  return report;
}

}  // namespace finger_statics
