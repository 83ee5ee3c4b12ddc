#include "meanwind/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace meanwind::symbolkit {

SampleGrid SampleGrid::tangent(int count, std::vector<double> refinements,
                               double clip_range) {
  if (count < 2) throw std::invalid_argument("SampleGrid: count must be >= 2");
  SampleGrid g;
  g.count = count;
  g.refinements = refinements;
  g.clip_range = clip_range;
  g.nodes.reserve(static_cast<size_t>(count) + refinements.size());
  const double pi = std::numbers::pi;
  for (int j = 0; j < count; ++j) {
    const double theta = -pi + (j + 0.5) * (2.0 * pi / count);
    g.nodes.push_back(std::tan(0.5 * theta));
  }
  for (double r : refinements) {
    if (!std::isfinite(r)) throw std::invalid_argument("SampleGrid: refinement not finite");
    g.nodes.push_back(r);
  }
  if (clip_range > 0.0) {
    std::erase_if(g.nodes, [clip_range](double x) { return std::abs(x) > clip_range; });
    g.nodes.push_back(clip_range);
    g.nodes.push_back(-clip_range);
  }
  std::sort(g.nodes.begin(), g.nodes.end());
  g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
  if (g.nodes.size() < 2) throw std::invalid_argument("SampleGrid: clip removed all nodes");
  return g;
}

}  // namespace meanwind::symbolkit
