#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sfac/core.hpp"

namespace sfac {

/// Window-supported weight t(., W) with unit L2 norm and a closed-form
/// Fourier transform F(t)(k, W) = int t(x, W) exp(-i <k, x>) dx.
class Taper {
public:
    virtual ~Taper() = default;
    virtual double eval(std::span<const double> x, const Window& w) const = 0;
    virtual std::complex<double> ft(std::span<const double> k, const Window& w) const = 0;
    virtual std::string describe() const = 0;
};

using TaperPtr = std::shared_ptr<const Taper>;

/// 1_W / sqrt(|W|); the scattering intensity taper. Box windows only.
TaperPtr indicator_taper();

/// prod_j sqrt(2 / L_j) sin(pi p_j (x_j + L_j / 2) / L_j) on the box.
TaperPtr sine_taper(std::vector<int> p);

/// First P sine tapers, row-major over p in {1, ..., ceil(P^(1/d))}^d.
std::vector<TaperPtr> sine_taper_family(std::size_t count, int dim);

/// Multi-indices used by sine_taper_family.
std::vector<std::vector<int>> sine_taper_indices(std::size_t count, int dim);

}  // namespace sfac
