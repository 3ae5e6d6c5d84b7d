#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "finger_statics/cable_statics.hpp"
#include "finger_statics/errors.hpp"

namespace finger_statics {

struct CalibrationPoint {
  double tension{0.0};  // T_o, N
  double force{0.0};    // measured P_tip, N
};

struct CalibrationDataset {
  std::string label;
  std::vector<CalibrationPoint> points;

  void validate() const {
    if (points.empty()) throw DomainError("calibration dataset '" + label + "' is empty");
    for (const auto& p : points) {
      if (!(p.tension >= 0.0) || !(p.force >= 0.0) || !std::isfinite(p.tension) ||
          !std::isfinite(p.force)) {
        throw DomainError("calibration dataset '" + label + "': values must be finite and non-negative");
      }
    }
  }
};

struct CalibrationOptions {
  double lower{1e-6};     // smallest loss coefficient searched
  int scan_points{64};    // bracketing scan before golden-section refinement
  double tolerance{1e-12};
  int max_iterations{200};
};

struct CalibrationReport {
  double loss{1.0};            // fitted c
  double ratio{0.0};           // model P_tip / T_o at the fitted c
  double data_ratio{0.0};      // least-squares slope of the data through the origin
  double sse{0.0};
  double rms{0.0};
  int evaluations{0};
  bool at_upper_bound{false};
  bool at_lower_bound{false};
  bool single_point{false};
  std::size_t points_used{0};
};

/// Sum of squared fingertip-force residuals at loss coefficient c.
inline double calibration_sse(const PhalangeDesign& design, const GraspScenario& scenario,
                              const CalibrationDataset& data, double loss,
                              const StaticsOptions& options = {}) {
  PhalangeDesign d = design;
  d.loss = loss;
  double sse = 0.0;
  for (const auto& p : data.points) {
    GraspScenario s = scenario;
    s.input_tension = p.tension;
    const double r = fingertip_force(d, s, options).p_tip - p.force;
    sse += r * r;
  }
  return sse;
}

/// Fits the loss coefficient by least squares: a uniform scan brackets the
/// minimum, then golden-section search refines it. The geometry and object
/// radius come from the templates; their own c and T_o are ignored.
inline CalibrationReport calibrate_loss(const PhalangeDesign& design, const GraspScenario& scenario,
                                        const CalibrationDataset& data,
                                        const StaticsOptions& statics = {},
                                        const CalibrationOptions& opt = {}) {
  data.validate();
  double stt = 0.0, stp = 0.0;
  std::size_t loaded = 0;
  for (const auto& p : data.points) {
    stt += p.tension * p.tension;
    stp += p.tension * p.force;
    if (p.tension > 0.0) ++loaded;
  }
  if (loaded == 0) {
    throw UnidentifiableError("calibration dataset '" + data.label +
                              "' has no positive input tension; the loss coefficient is unidentifiable");
  }

  CalibrationReport report;
  report.points_used = data.points.size();
  report.single_point = loaded == 1;
  report.data_ratio = stp / stt;

  auto sse = [&](double c) {
    ++report.evaluations;
    return calibration_sse(design, scenario, data, c, statics);
  };

  const int m = std::max(opt.scan_points, 3);
  const double lo = opt.lower;
  const double hi = 1.0;
  const double step = (hi - lo) / static_cast<double>(m - 1);
  std::vector<double> grid(static_cast<std::size_t>(m));
  int best = 0;
  double best_value = 0.0;
  for (int k = 0; k < m; ++k) {
    const double c = k + 1 == m ? hi : lo + step * k;
    grid[static_cast<std::size_t>(k)] = sse(c);
    if (k == 0 || grid[static_cast<std::size_t>(k)] < best_value) {
      best = k;
      best_value = grid[static_cast<std::size_t>(k)];
    }
  }
  double a = best == 0 ? lo : lo + step * (best - 1);
  double b = best + 1 >= m ? hi : lo + step * (best + 1);

  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = sse(x1);
  double f2 = sse(x2);
  for (int it = 0; it < opt.max_iterations && (b - a) > opt.tolerance; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = sse(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = sse(x2);
    }
  }
  double c = f1 <= f2 ? x1 : x2;
  double fc = std::min(f1, f2);
  for (const double edge : {a, b}) {
    const double fe = sse(edge);
    if (fe < fc) {
      c = edge;
      fc = fe;
    }
  }

  report.loss = c;
  report.sse = fc;
  report.rms = std::sqrt(fc / static_cast<double>(data.points.size()));
  report.at_upper_bound = hi - c <= opt.tolerance;
  report.at_lower_bound = c - lo <= opt.tolerance;
  PhalangeDesign fitted = design;
  fitted.loss = c;
  GraspScenario unit = scenario;
  unit.input_tension = 1.0;
  report.ratio = fingertip_force(fitted, unit, statics).p_tip;
  return report;
}

/// Input tension the model needs to reproduce a measured fingertip force.
/// Used to check that fixtures without recorded tensions are reachable.
inline double tension_for_force(const PhalangeDesign& design, const GraspScenario& scenario,
                                double force, const StaticsOptions& options = {}) {
  GraspScenario unit = scenario;
  unit.input_tension = 1.0;
  const double ratio = fingertip_force(design, unit, options).p_tip;
  if (!(ratio > 0.0)) throw DomainError("model transmits no force for this design");
  return force / ratio;
}

}  // namespace finger_statics
