#ifndef ABLAB_KERNELS_HPP
#define ABLAB_KERNELS_HPP

// Data-parallel grid kernels. Each kernel has a serial reference and an
// OpenMP version; per-cell work is independent, so both produce bitwise
// identical results. Reductions use fixed blocks combined serially, which keeps
// them deterministic regardless of thread count.

#include <span>

#include "ablab/grid.hpp"

namespace ablab::kernels {

enum class Backend { Serial, OpenMP };
const char* to_string(Backend b);

/// 3-point (1D) or 5-point (2D) Laplacian written as a difference of face
/// gradients. Periodic wraps; NoFlux gives zero boundary fluxes (mirror ghosts).
void laplacian(const Grid& grid, std::span<const double> f, std::span<double> out,
               Backend backend);

/// out = n + dt * (Laplace(phi) + n * source), the conservative explicit update.
void density_update(const Grid& grid, std::span<const double> n, std::span<const double> phi,
                    std::span<const double> source, double dt, std::span<double> out,
                    Backend backend);

/// out = p + dt * (gamma p p_xx + p_x^2) with central differences on a 1D grid.
void pressure_update_1d(const Grid& grid, std::span<const double> p, double gamma, double dt,
                        std::span<double> out, Backend backend);

/// Elementwise out[i] = f(in[i]).
template <class F>
void transform(std::span<const double> in, std::span<double> out, F&& f, Backend backend) {
  const long n = static_cast<long>(in.size());
  if (backend == Backend::OpenMP) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = f(in[i]);
  } else {
    for (long i = 0; i < n; ++i) out[i] = f(in[i]);
  }
}

inline constexpr long kReductionBlock = 4096;

double sum(std::span<const double> v, Backend backend);
double max(std::span<const double> v, Backend backend);

}  // namespace ablab::kernels

#endif  // ABLAB_KERNELS_HPP
