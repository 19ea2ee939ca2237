#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pmlab/errors.hpp"

namespace pmlab {

using Point = std::array<double, 2>;  // second coordinate unused in 1D

// Rectangular cell-centered grid in 1 or 2 space dimensions.
struct Grid {
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 0.0};
  std::array<int, 2> cells{0, 1};

  static Grid make_1d(double lo, double hi, int n);
  static Grid make_2d(double lox, double hix, int nx, double loy, double hiy,
                      int ny);

  double h(int axis) const { return (hi[axis] - lo[axis]) / cells[axis]; }
  double max_h() const { return dim == 1 ? h(0) : std::max(h(0), h(1)); }
  int cell_count() const { return cells[0] * cells[1]; }
  double cell_volume() const { return dim == 1 ? h(0) : h(0) * h(1); }
  double domain_volume() const { return cell_volume() * cell_count(); }

  int index(int i, int j) const { return j * cells[0] + i; }
  Point center(int idx) const {
    const int i = idx % cells[0];
    const int j = idx / cells[0];
    Point p{lo[0] + (i + 0.5) * h(0), 0.0};
    if (dim == 2) p[1] = lo[1] + (j + 0.5) * h(1);
    return p;
  }
  bool operator==(const Grid& o) const {
    return dim == o.dim && lo == o.lo && hi == o.hi && cells == o.cells;
  }
};

// Gridded scalar values, one per cell, taking values in [0,1).
struct Field {
  Grid grid;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0)
      : grid(g), values(static_cast<size_t>(g.cell_count()), fill) {}

  double& operator[](int idx) { return values[static_cast<size_t>(idx)]; }
  double operator[](int idx) const { return values[static_cast<size_t>(idx)]; }
  int size() const { return static_cast<int>(values.size()); }

  double min() const;
  double max() const;
};

inline Grid Grid::make_1d(double lo_, double hi_, int n) {
  if (n < 4) throw DomainError("grid needs at least 4 cells per axis");
  if (!(hi_ > lo_)) throw DomainError("grid extent must have hi > lo");
  Grid g;
  g.dim = 1;
  g.lo = {lo_, 0.0};
  g.hi = {hi_, 0.0};
  g.cells = {n, 1};
  return g;
}

inline Grid Grid::make_2d(double lox, double hix, int nx, double loy,
                          double hiy, int ny) {
  if (nx < 4 || ny < 4) throw DomainError("grid needs at least 4 cells per axis");
  if (!(hix > lox) || !(hiy > loy))
    throw DomainError("grid extent must have hi > lo");
  Grid g;
  g.dim = 2;
  g.lo = {lox, loy};
  g.hi = {hix, hiy};
  g.cells = {nx, ny};
  return g;
}

inline double Field::min() const {
  double v = values.empty() ? 0.0 : values[0];
  for (double x : values) v = x < v ? x : v;
  return v;
}

inline double Field::max() const {
  double v = values.empty() ? 0.0 : values[0];
  for (double x : values) v = x > v ? x : v;
  return v;
}

// Sum of cell values times cell volume.
double total_mass(const Field& u);

}  // namespace pmlab
