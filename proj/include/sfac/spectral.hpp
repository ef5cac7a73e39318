#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "sfac/core.hpp"
#include "sfac/kernels.hpp"
#include "sfac/tapers.hpp"

namespace sfac {

struct Bin {
    double center = 0.0;
    double mean = 0.0;
    double std_of_mean = 0.0;
    std::size_t count = 0;
};

/// Estimated structure factor at a set of wavevectors or wavenumbers.
struct SpectralEstimate {
    int dim = 0;
    std::vector<double> wavevectors;  ///< row-major, empty for radial estimators
    std::vector<double> wavenumbers;
    std::vector<double> values;
    std::vector<Bin> bins;
    std::map<std::string, std::string> metadata;

    std::size_t size() const { return values.size(); }
};

enum class Debias { None, Direct, Undirect };

std::string to_string(Debias d);
Debias parse_debias(const std::string& s);

/// |sum_j exp(-i <k, x_j>)|^2 / (rho |W|), or / N when self-normalized.
SpectralEstimate scattering_intensity(const PointPattern& p, const WaveGrid& grid, bool self_normalized,
                                      kernels::Exec exec = kernels::Exec::Parallel);

/// Tapered periodogram (1/rho) |sum_j t(x_j) exp(-i <k, x_j>)|^2 with optional
/// debiasing: Undirect subtracts rho |F(t)(k)|^2 afterwards, Direct subtracts
/// rho F(t)(k) inside the modulus.
SpectralEstimate tapered(const PointPattern& p, const WaveGrid& grid, const Taper& t, Debias debias,
                         kernels::Exec exec = kernels::Exec::Parallel);

/// Mean over tapers of the tapered estimates.
SpectralEstimate multitaper(const PointPattern& p, const WaveGrid& grid, std::span<const TaperPtr> tapers,
                            Debias debias, kernels::Exec exec = kernels::Exec::Parallel);

/// Regular bins over [min k, max k]; empty bins are dropped.
SpectralEstimate bin_by_wavenumber(const SpectralEstimate& e, std::size_t n_bins = 50);

}  // namespace sfac
