#ifndef ABLAB_GRID_HPP
#define ABLAB_GRID_HPP

#include <cstddef>
#include <vector>

namespace ablab {

enum class Boundary { Periodic, NoFlux };

/// Uniform cell-centred grid on [0, extent]^dim (dim 1 or 2), row-major with
/// x fastest. Cell i has centre (i + 1/2) dx.
struct Grid {
  int dim = 1;
  double extent = 1.0;
  int cells = 64;
  Boundary boundary = Boundary::NoFlux;

  Grid() = default;
  Grid(int dim, double extent, int cells, Boundary boundary);

  double dx() const { return extent / cells; }
  std::size_t size() const {
    return dim == 1 ? static_cast<std::size_t>(cells)
                    : static_cast<std::size_t>(cells) * static_cast<std::size_t>(cells);
  }
  /// Cell volume dx^dim.
  double cell_volume() const { return dim == 1 ? dx() : dx() * dx(); }
  double center(int i) const { return (i + 0.5) * dx(); }

  bool operator==(const Grid&) const = default;
};

enum class Quantity { Density, Pressure, W };

struct Field {
  Grid grid;
  Quantity quantity = Quantity::Density;
  std::vector<double> values;

  Field() = default;
  Field(Grid g, Quantity q) : grid(g), quantity(q), values(g.size(), 0.0) {}
  Field(Grid g, Quantity q, std::vector<double> v);

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * grid.cells + i]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.cells + i]; }
};

}  // namespace ablab

#endif  // ABLAB_GRID_HPP
