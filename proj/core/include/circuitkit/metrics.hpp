#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace circuitkit {

struct CurvePoint {
  double size_fraction = 0.0;
  double faithfulness = 0.0;
};

// Piecewise-linear faithfulness curve over circuit-size fractions.
class FaithfulnessCurve {
 public:
  // Throws InvalidInput unless there are >= 2 finite points with strictly
  // increasing fractions in [0, 1].
  explicit FaithfulnessCurve(std::vector<CurvePoint> points);

  const std::vector<CurvePoint>& points() const { return points_; }
  double span() const {
    return points_.back().size_fraction - points_.front().size_fraction;
  }

 private:
  std::vector<CurvePoint> points_;
};

// Area under the curve divided by the span width (a constant curve f gives f).
double cpr(const FaithfulnessCurve& curve);

// Area of |f - 1| divided by the span width; segments crossing 1 are split
// at the crossing. Curves at or below 1 return 1 - cpr(curve), so
// cpr + cmd == 1 holds exactly in double whenever cpr lies in [0, 1].
double cmd(const FaithfulnessCurve& curve);

struct SizeGrid {
  // Explicit fractions take precedence when non-empty. Otherwise
  // `log_points` fractions are spaced evenly in log10 between
  // `min_fraction` and 1.
  std::vector<double> fractions;
  std::size_t log_points = 10;
  double min_fraction = 1e-3;
};

// Budgets round(f * total_edges) clipped to [1, total_edges], sorted and
// deduplicated.
std::vector<std::size_t> sweep_sizes(std::size_t total_edges,
                                     const SizeGrid& grid = {});

}  // namespace circuitkit
