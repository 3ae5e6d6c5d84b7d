#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace finger_statics {

struct NelderMeadOptions {
  double reflection{1.0};
  double expansion{2.0};
  double contraction{0.5};
  double shrink{0.5};
  double initial_step{0.1};   // fraction of each box width
  double tolerance{1e-6};     // simplex diameter, fraction of each box width
  int max_evaluations{500};
  int max_restarts{2};
};

struct NelderMeadResult {
  std::vector<double> x;
  double value{std::numeric_limits<double>::infinity()};
  int evaluations{0};
  int restarts{0};
  bool converged{false};
};

/// Derivative-free simplex minimisation inside a box. Every trial point is
/// projected onto the box before evaluation; the search runs in coordinates
/// normalised by the box widths so one tolerance serves all axes. Non-finite
/// objective values are treated as +inf (infeasible).
template <typename Objective>
NelderMeadResult nelder_mead_box(Objective&& objective, std::span<const double> start,
                                 std::span<const double> lower, std::span<const double> upper,
                                 const NelderMeadOptions& opt = {}) {
  const std::size_t dim = start.size();
  std::vector<double> width(dim);
  for (std::size_t k = 0; k < dim; ++k) width[k] = upper[k] - lower[k];

  using Point = std::vector<double>;
  NelderMeadResult best;
  best.x.assign(start.begin(), start.end());

  auto to_box = [&](const Point& u) {
    Point x(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      x[k] = std::clamp(lower[k] + u[k] * width[k], lower[k], upper[k]);
    }
    return x;
  };
  auto project = [&](Point u) {
    for (auto& v : u) v = std::clamp(v, 0.0, 1.0);
    return u;
  };
  auto eval = [&](const Point& u) {
    Point x = to_box(u);
    double v = objective(std::span<const double>(x));
    if (!std::isfinite(v)) v = std::numeric_limits<double>::infinity();
    ++best.evaluations;
    if (v < best.value) {
      best.value = v;
      best.x = x;
    }
    return v;
  };

  Point origin(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    origin[k] = width[k] > 0.0 ? (start[k] - lower[k]) / width[k] : 0.0;
  }
  origin = project(origin);
  eval(origin);
  if (dim == 0) {
    best.converged = true;
    return best;
  }

  for (int attempt = 0; attempt <= opt.max_restarts; ++attempt) {
    const double before = best.value;
    Point anchor(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      anchor[k] = width[k] > 0.0 ? (best.x[k] - lower[k]) / width[k] : 0.0;
    }
    std::vector<Point> simplex{project(anchor)};
    std::vector<double> values{best.value};
    for (std::size_t k = 0; k < dim; ++k) {
      Point v = simplex[0];
      // Step inward when the vertex sits on the upper face.
      v[k] += v[k] + opt.initial_step <= 1.0 ? opt.initial_step : -opt.initial_step;
      simplex.push_back(v);
      values.push_back(eval(v));
    }
    best.restarts = attempt;

    std::vector<std::size_t> order(dim + 1);
    bool converged = false;
    while (best.evaluations < opt.max_evaluations) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      {
        std::vector<Point> s2;
        std::vector<double> v2;
        for (auto i : order) {
          s2.push_back(simplex[i]);
          v2.push_back(values[i]);
        }
        simplex.swap(s2);
        values.swap(v2);
      }

      double diameter = 0.0;
      for (std::size_t i = 1; i <= dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
          diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[0][k]));
        }
      }
      if (diameter < opt.tolerance) {
        converged = true;
        break;
      }

      Point centroid(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / static_cast<double>(dim);
      }
      auto along = [&](double t) {
        Point p(dim);
        for (std::size_t k = 0; k < dim; ++k) {
          p[k] = centroid[k] + t * (simplex[dim][k] - centroid[k]);
        }
        return project(p);
      };

      const Point reflected = along(-opt.reflection);
      const double fr = eval(reflected);
      if (fr < values[0]) {
        const Point expanded = along(-opt.reflection * opt.expansion);
        const double fe = eval(expanded);
        if (fe < fr) {
          simplex[dim] = expanded;
          values[dim] = fe;
        } else {
          simplex[dim] = reflected;
          values[dim] = fr;
        }
        continue;
      }
      if (fr < values[dim - 1]) {
        simplex[dim] = reflected;
        values[dim] = fr;
        continue;
      }
      const bool outside = fr < values[dim];
      const Point contracted = along(outside ? -opt.reflection * opt.contraction : opt.contraction);
      const double fc = eval(contracted);
      if (fc < (outside ? fr : values[dim])) {
        simplex[dim] = contracted;
        values[dim] = fc;
        continue;
      }
      for (std::size_t i = 1; i <= dim; ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
          simplex[i][k] = simplex[0][k] + opt.shrink * (simplex[i][k] - simplex[0][k]);
        }
        values[i] = eval(simplex[i]);
      }
    }
    best.converged = converged;
    if (!converged || !(best.value < before)) break;
  }
  return best;
}

}  // namespace finger_statics
