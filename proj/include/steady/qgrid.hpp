#pragma once

#include <vector>

namespace steady {

struct GridAxis {
  double min = -4;
  double max = 4;
  int count = 121;

  double step() const { return count > 1 ? (max - min) / (count - 1) : 0.0; }
  double at(int i) const { return count > 1 ? min + i * step() : min; }
  std::vector<double> points() const;
};

// Phase-space grid over alpha = x + i y.
struct GridSpec {
  GridAxis x;
  GridAxis y;
};

struct QGrid {
  std::vector<double> x_axis;
  std::vector<double> y_axis;
  std::vector<double> values;  // row-major, values[iy * nx + ix]
  double normalization_estimate = 0;
  int truncation_order = 0;

  int nx() const { return int(x_axis.size()); }
  int ny() const { return int(y_axis.size()); }
  double at(int ix, int iy) const { return values[size_t(iy) * nx() + ix]; }
};

QGrid make_empty_grid(const GridSpec& g);
double riemann_sum(const QGrid& q);

struct GridPeak {
  int ix;
  int iy;
  double value;
};

// Strict local maxima over the 8-neighbourhood (interior points only), with
// value above floor_fraction * global max. Sorted by decreasing value.
std::vector<GridPeak> local_maxima(const QGrid& q, double floor_fraction = 1e-3);

GridPeak grid_argmax(const QGrid& q);

}  // namespace steady
