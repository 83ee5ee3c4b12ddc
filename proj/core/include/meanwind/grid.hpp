#pragma once

#include <vector>

namespace meanwind::symbolkit {

// Sample grid on the real line, tangent-mapped from a uniform angular grid:
// x_j = tan(theta_j / 2), theta_j = -pi + (j + 1/2) * 2pi / count.
// Reproducible from (count, refinements, clip_range); refinement points are
// merged in, and a positive clip_range drops nodes with |x| > clip_range.
struct SampleGrid {
  int count = 0;
  std::vector<double> refinements;
  double clip_range = 0.0;
  std::vector<double> nodes;  // strictly increasing

  static SampleGrid tangent(int count, std::vector<double> refinements = {},
                            double clip_range = 0.0);

  double min() const { return nodes.front(); }
  double max() const { return nodes.back(); }
};

}  // namespace meanwind::symbolkit
