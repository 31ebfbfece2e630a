#pragma once

#include "hopfdeg/invariants.hpp"

namespace hopfdeg::detail {

// Upsilon reverses orientation on S^3 (det[p | D Upsilon] < 0), so integrals
// and linking numbers computed in the chart change sign.
inline constexpr double kChartOrientation = -1.0;

// G = g o Upsilon on the chart box, where g is the (possibly capped) map.
struct Chart {
  SphereMap g;
  bool capped = false;
  bool rotated = false;
  GridSpec spec;
  Vec far_value;

  Chart(const SphereMap& f, const HopfGrid& grid);
  Vec operator()(const Vec& x) const { return g(stereographic_inverse(x).coords()); }
  // Central-difference Jacobian (target x 3) at x.
  Mat jacobian(const Vec& x, double step) const;
  // G at every node, 3 doubles per node in C order.
  std::vector<double> sample() const;
};

}  // namespace hopfdeg::detail
