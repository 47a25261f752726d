#include "ablab/grid.hpp"

#include <cmath>
#include <string>

#include "ablab/errors.hpp"

namespace ablab {

Grid::Grid(int dim_, double extent_, int cells_, Boundary boundary_)
    : dim(dim_), extent(extent_), cells(cells_), boundary(boundary_) {
  if (dim != 1 && dim != 2) throw DomainError("grid.dim must be 1 or 2");
  if (cells < 8) throw DomainError("grid.cells must be at least 8");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw DomainError("grid.extent must be positive");
}

Field::Field(Grid g, Quantity q, std::vector<double> v)
    : grid(g), quantity(q), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw DomainError("field has " + std::to_string(values.size()) + " values, grid needs " +
                      std::to_string(grid.size()));
  }
}

}  // namespace ablab
