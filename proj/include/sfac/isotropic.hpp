#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfac/core.hpp"
#include "sfac/kernels.hpp"
#include "sfac/spectral.hpp"

namespace sfac {

using RadialFunction = std::function<double(double)>;

/// Bartlett's isotropic estimator on a ball window:
/// 1 + (2 pi)^{d/2} / (rho |W| omega_{d-1}) sum_{i != j} J_{d/2-1}(k r_ij) / (k r_ij)^{d/2-1}.
/// The self-normalized form uses N omega_{d-1} in the denominator.
SpectralEstimate bartlett_isotropic(const PointPattern& p, std::span<const double> ks, bool self_normalized,
                                    kernels::Exec exec = kernels::Exec::Parallel);

struct PcfEstimate {
    std::vector<double> radii;
    std::vector<double> values;
    std::vector<bool> unreliable;  ///< r < bandwidth / 2
    double r_max = 0.0;
    double bandwidth = 0.0;
    std::string method = "epanechnikov-translation";
};

/// R/2 for balls, min_j L_j / 4 for boxes.
double default_pcf_rmax(const Window& w);

/// Stoyan's rule: 0.15 / sqrt(rho).
double stoyan_bandwidth(double rho, double constant = 0.15);

/// Kernel estimate of g with translation edge correction. Default grid:
/// 256 equispaced radii in (0, default_pcf_rmax].
PcfEstimate estimate_pcf_kernel(const PointPattern& p, std::span<const double> r_grid = {},
                                std::optional<double> bandwidth = std::nullopt,
                                kernels::Exec exec = kernels::Exec::Parallel);

/// Drops non-finite and unreliable values.
PcfEstimate clean_pcf(const PcfEstimate& e);

/// Linear interpolation on the cleaned nodes; 1 beyond r_max; clamped to the
/// first node value below it.
class PcfInterpolator {
public:
    explicit PcfInterpolator(const PcfEstimate& e);
    double operator()(double r) const;

private:
    std::vector<double> r_;
    std::vector<double> g_;
    double r_max_;
};

struct OgataParams {
    double h = 0.01;
    std::size_t n_nodes = 300;
    /// Support radius of the supplied g; enables the k_min warning.
    std::optional<double> r_max;
};

/// pi xi_{d/2-1, N} / r_max.
double ogata_k_min(int dim, std::size_t n_nodes, double r_max);

/// Structure factor from g by Ogata's quadrature for Hankel transforms.
SpectralEstimate hankel_ogata(const RadialFunction& g, double rho, int dim, std::span<const double> ks,
                              const OgataParams& params = {});

struct DhtGrid {
    double order = 0.0;
    double r_max = 0.0;
    std::size_t n = 0;
    std::vector<double> zeros;    ///< eta_1 .. eta_N
    std::vector<double> r_nodes;  ///< r_j = eta_j r_max / eta_N, j < N
    std::vector<double> k_nodes;  ///< k_m = eta_m / r_max, m < N
    double k_max = 0.0;           ///< eta_N / r_max
};

DhtGrid make_dht_grid(int dim, double r_max, std::size_t n);

/// Structure factor from g by the Baddour-Chouinard discrete Hankel transform;
/// output wavenumbers are the grid's k_m.
SpectralEstimate hankel_dht(const RadialFunction& g, double rho, int dim, const DhtGrid& grid);

}  // namespace sfac
