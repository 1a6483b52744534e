#include "steady/qgrid.hpp"

#include <algorithm>

#include "steady/errors.hpp"

namespace steady {

std::vector<double> GridAxis::points() const {
  std::vector<double> p(count);
  for (int i = 0; i < count; ++i) p[i] = at(i);
  return p;
}

QGrid make_empty_grid(const GridSpec& g) {
  if (g.x.count < 1 || g.y.count < 1)
    throw DomainError("grid axis count must be >= 1");
  QGrid q;
  q.x_axis = g.x.points();
  q.y_axis = g.y.points();
  q.values.assign(size_t(g.x.count) * g.y.count, 0.0);
  return q;
}

double riemann_sum(const QGrid& q) {
  if (q.nx() < 2 || q.ny() < 2) return 0;
  const double dx = q.x_axis[1] - q.x_axis[0];
  const double dy = q.y_axis[1] - q.y_axis[0];
  double s = 0;
  for (double v : q.values) s += v;
  return s * dx * dy;
}

std::vector<GridPeak> local_maxima(const QGrid& q, double floor_fraction) {
  std::vector<GridPeak> out;
  if (q.values.empty()) return out;
  const double gmax = *std::max_element(q.values.begin(), q.values.end());
  const double floor = floor_fraction * gmax;
  for (int iy = 1; iy + 1 < q.ny(); ++iy)
    for (int ix = 1; ix + 1 < q.nx(); ++ix) {
      const double v = q.at(ix, iy);
      if (v <= floor) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (!dx && !dy) continue;
          if (q.at(ix + dx, iy + dy) >= v) {
            is_max = false;
            break;
          }
        }
      if (is_max) out.push_back({ix, iy, v});
    }
  std::sort(out.begin(), out.end(),
            [](const GridPeak& a, const GridPeak& b) { return a.value > b.value; });
  return out;
}

GridPeak grid_argmax(const QGrid& q) {
  GridPeak best{0, 0, -1.0};
  for (int iy = 0; iy < q.ny(); ++iy)
    for (int ix = 0; ix < q.nx(); ++ix)
      if (q.at(ix, iy) > best.value) best = {ix, iy, q.at(ix, iy)};
  return best;
}

}  // namespace steady
