#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sfac/core.hpp"

/// Hot loops shared by the estimators. Each kernel has a plain serial
/// reference and an OpenMP version; the parallel versions split work into
/// fixed blocks and combine them in a fixed order, so their output does not
/// depend on the thread count.
namespace sfac::kernels {

enum class Exec { Serial, Parallel };

/// Threads used by the parallel kernels (1 when built without OpenMP).
int max_threads();
void set_threads(int n);

/// sum_j w_j exp(-i <k_m, x_j>) for each wavevector k_m. Empty weights mean
/// w_j = 1.
std::vector<std::complex<double>> exp_sums(std::span<const double> coords, std::span<const double> weights,
                                           int dim, std::span<const double> wavevectors,
                                           Exec exec = Exec::Parallel);

/// Radial kernel of the isotropic estimator: J_{d/2-1}(x) / x^{d/2-1}.
double radial_kernel(int dim, double x);

/// sum over ordered pairs i != j of radial_kernel(d, k r_ij), for each k.
std::vector<double> pair_kernel_sums(std::span<const double> coords, int dim, std::span<const double> ks,
                                     Exec exec = Exec::Parallel);

/// |W cap (W - z)| for the centered window.
double translation_overlap(const Window& w, std::span<const double> z);

/// Epanechnikov kernel with half-width b.
double epanechnikov(double u, double b);

/// sum over ordered pairs of K_b(r - r_ij) / |W cap (W - (x_i - x_j))| at each
/// radius of the increasing grid.
std::vector<double> pcf_pair_sums(std::span<const double> coords, const Window& w,
                                  std::span<const double> r_grid, double bandwidth,
                                  Exec exec = Exec::Parallel);

}  // namespace sfac::kernels
