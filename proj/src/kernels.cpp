#include "ablab/kernels.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace ablab::kernels {

const char* to_string(Backend b) { return b == Backend::OpenMP ? "openmp" : "serial"; }

namespace {

// Neighbour index along one axis; -1 marks a no-flux boundary face.
inline int neighbour(int i, int step, int cells, Boundary b) {
  const int j = i + step;
  if (j >= 0 && j < cells) return j;
  if (b == Boundary::Periodic) return (j + cells) % cells;
  return -1;
}

// Sum of (f_nb - f_c) over the neighbours of cell (i, j); a missing neighbour
// contributes a zero face flux.
inline double face_sum(const Grid& g, std::span<const double> f, int i, int j) {
  const int c = g.cells;
  const std::size_t row = static_cast<std::size_t>(j) * c;
  const double fc = f[row + i];
  double s = 0.0;
  const int l = neighbour(i, -1, c, g.boundary);
  const int r = neighbour(i, +1, c, g.boundary);
  if (r >= 0) s += f[row + r] - fc;
  if (l >= 0) s -= fc - f[row + l];
  if (g.dim == 2) {
    const int d = neighbour(j, -1, c, g.boundary);
    const int u = neighbour(j, +1, c, g.boundary);
    if (u >= 0) s += f[static_cast<std::size_t>(u) * c + i] - fc;
    if (d >= 0) s -= fc - f[static_cast<std::size_t>(d) * c + i];
  }
  return s;
}

template <class Body>
void for_cells(const Grid& g, Body&& body, Backend backend) {
  const int rows = g.dim == 2 ? g.cells : 1;
  const int c = g.cells;
  if (backend == Backend::OpenMP) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < rows; ++j)
      for (int i = 0; i < c; ++i) body(i, j);
  } else {
    for (int j = 0; j < rows; ++j)
      for (int i = 0; i < c; ++i) body(i, j);
  }
}

}  // namespace

void laplacian(const Grid& g, std::span<const double> f, std::span<double> out,
               Backend backend) {
  const double inv = 1.0 / (g.dx() * g.dx());
  for_cells(
      g,
      [&](int i, int j) {
        out[static_cast<std::size_t>(j) * g.cells + i] = face_sum(g, f, i, j) * inv;
      },
      backend);
}

void density_update(const Grid& g, std::span<const double> n, std::span<const double> phi,
                    std::span<const double> source, double dt, std::span<double> out,
                    Backend backend) {
  const double inv = 1.0 / (g.dx() * g.dx());
  for_cells(
      g,
      [&](int i, int j) {
        const std::size_t k = static_cast<std::size_t>(j) * g.cells + i;
        out[k] = n[k] + dt * (face_sum(g, phi, i, j) * inv + n[k] * source[k]);
      },
      backend);
}

void pressure_update_1d(const Grid& g, std::span<const double> p, double gamma, double dt,
                        std::span<double> out, Backend backend) {
  const int c = g.cells;
  const double dx = g.dx();
  const double inv2 = 1.0 / (dx * dx);
  const double inv1 = 0.5 / dx;
  for_cells(
      g,
      [&](int i, int) {
        const int l = neighbour(i, -1, c, g.boundary);
        const int r = neighbour(i, +1, c, g.boundary);
        const double pl = l >= 0 ? p[l] : p[i];
        const double pr = r >= 0 ? p[r] : p[i];
        const double pxx = (pr - 2.0 * p[i] + pl) * inv2;
        const double px = (pr - pl) * inv1;
        out[i] = p[i] + dt * (gamma * p[i] * pxx + px * px);
      },
      backend);
}

double sum(std::span<const double> v, Backend backend) {
  const long n = static_cast<long>(v.size());
  const long blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
  auto block_sum = [&](long b) {
    const long lo = b * kReductionBlock, hi = std::min(n, lo + kReductionBlock);
    double s = 0.0;
    for (long i = lo; i < hi; ++i) s += v[i];
    partial[b] = s;
  };
  if (backend == Backend::OpenMP) {
#pragma omp parallel for schedule(static)
    for (long b = 0; b < blocks; ++b) block_sum(b);
  } else {
    for (long b = 0; b < blocks; ++b) block_sum(b);
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

double max(std::span<const double> v, Backend backend) {
  double m = -std::numeric_limits<double>::infinity();
  const long n = static_cast<long>(v.size());
  if (backend == Backend::OpenMP) {
#pragma omp parallel for reduction(max : m) schedule(static)
    for (long i = 0; i < n; ++i) m = std::max(m, v[i]);
  } else {
    for (long i = 0; i < n; ++i) m = std::max(m, v[i]);
  }
  return m;
}

}  // namespace ablab::kernels
