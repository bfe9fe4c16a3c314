#include "circuitkit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "circuitkit/error.hpp"
#include "wide.hpp"

namespace circuitkit {

using detail::Wide;

FaithfulnessCurve::FaithfulnessCurve(std::vector<CurvePoint> points)
    : points_(std::move(points)) {
  if (points_.size() < 2) throw InvalidInput("curve needs at least 2 points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.size_fraction) || !std::isfinite(p.faithfulness)) {
      throw InvalidInput("curve point is not finite");
    }
    if (p.size_fraction < 0.0 || p.size_fraction > 1.0) {
      throw InvalidInput("curve size fraction outside [0, 1]");
    }
    if (i > 0 && !(p.size_fraction > points_[i - 1].size_fraction)) {
      throw InvalidInput("curve size fractions must be strictly increasing");
    }
  }
}

// Areas are accumulated wide and rounded once.
double cpr(const FaithfulnessCurve& curve) {
  const auto& pts = curve.points();
  Wide area = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Wide width = Wide(pts[i].size_fraction) - pts[i - 1].size_fraction;
    area += (Wide(pts[i - 1].faithfulness) + pts[i].faithfulness) * width / 2;
  }
  return static_cast<double>(area / curve.span());
}

double cmd(const FaithfulnessCurve& curve) {
  const auto& pts = curve.points();
  // At or below 1 the integrand is 1 - f, so cmd = 1 - cpr.
  if (std::all_of(pts.begin(), pts.end(),
                  [](const CurvePoint& p) { return p.faithfulness <= 1.0; })) {
    return 1.0 - cpr(curve);
  }
  Wide area = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const Wide width = Wide(pts[i].size_fraction) - pts[i - 1].size_fraction;
    const Wide d0 = Wide(pts[i - 1].faithfulness) - 1;
    const Wide d1 = Wide(pts[i].faithfulness) - 1;
    const Wide a0 = d0 < 0 ? -d0 : d0;
    const Wide a1 = d1 < 0 ? -d1 : d1;
    if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) {
      const Wide t = d0 / (d0 - d1);
      area += (a0 * t + a1 * (1 - t)) * width / 2;
    } else {
      area += (a0 + a1) * width / 2;
    }
  }
  return static_cast<double>(area / curve.span());
}

std::vector<std::size_t> sweep_sizes(std::size_t total_edges,
                                     const SizeGrid& grid) {
  if (total_edges < 1) throw InvalidInput("sweep needs at least one edge");
  std::vector<double> fractions = grid.fractions;
  if (fractions.empty()) {
    if (grid.log_points == 0 || !(grid.min_fraction > 0.0) ||
        grid.min_fraction > 1.0) {
      throw InvalidInput("log grid needs points >= 1 and min_fraction in (0, 1]");
    }
    const double lo = std::log10(grid.min_fraction);
    if (grid.log_points == 1) {
      fractions.push_back(1.0);
    } else {
      for (std::size_t i = 0; i < grid.log_points; ++i) {
        const double t = static_cast<double>(i) / (grid.log_points - 1);
        fractions.push_back(std::pow(10.0, lo * (1.0 - t)));
      }
    }
  }
  std::vector<std::size_t> ks;
  for (double f : fractions) {
    if (!std::isfinite(f) || f < 0.0) {
      throw InvalidInput("size fractions must be finite and non-negative");
    }
    const double raw = std::round(f * static_cast<double>(total_edges));
    const double clipped =
        std::clamp(raw, 1.0, static_cast<double>(total_edges));
    ks.push_back(static_cast<std::size_t>(clipped));
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

}  // namespace circuitkit
