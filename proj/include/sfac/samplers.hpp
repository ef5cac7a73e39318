#pragma once

#include <cstdint>
#include <string>

#include "sfac/complex_eigen.hpp"
#include "sfac/core.hpp"

namespace sfac {

/// Homogeneous Poisson process of intensity rho on w.
PointPattern sample_poisson(const Window& w, double rho, std::uint64_t seed);

/// Thomas cluster process. Parents are Poisson(rho_parent) on w dilated by
/// 6 sigma; each has Poisson(lambda) offspring displaced by N(0, sigma^2 I).
/// Intensity rho_parent * lambda.
PointPattern sample_thomas(const Window& w, double rho_parent, double lambda, double sigma,
                           std::uint64_t seed);

/// Independent thinning with retention probability p in (0, 1).
PointPattern thin(const PointPattern& p, double retain_prob, std::uint64_t seed);

struct GinibreOptions {
    std::size_t n_max = 6000;
    double margin = 0.85;
    linalg::EigenBackend backend = linalg::EigenBackend::Auto;
};

/// Matrix size used for Ball(R): ceil((R / margin)^2).
std::size_t ginibre_matrix_size(double radius, const GinibreOptions& opts = {});

/// Ginibre eigenvalues falling in the disk of radius R; intensity 1/pi.
PointPattern sample_ginibre(double radius, std::uint64_t seed, const GinibreOptions& opts = {});

/// Ginibre pattern restricted to a window that fits in the disk of radius
/// `radius_for(w)` (half-diagonal for boxes).
PointPattern sample_ginibre_on(const Window& w, std::uint64_t seed, const GinibreOptions& opts = {});

/// Eigenvalues of an n x n Ginibre matrix via its Hessenberg model.
std::vector<linalg::cplx> ginibre_eigenvalues(std::size_t n, std::uint64_t seed,
                                              linalg::EigenBackend backend = linalg::EigenBackend::Auto);

/// Smallest ball centered at the origin containing w.
double circumradius(const Window& w);

/// Closed-form pair correlation and structure factors of the benchmark processes.
double ginibre_pcf(double r);
double ginibre_structure_factor(double k);
double thomas_pcf(double r, double rho_parent, double sigma, int dim);
double thomas_structure_factor(double k, double lambda, double sigma);
/// p S + 1 - p.
double thinned_structure_factor(double s, double retain_prob);

}  // namespace sfac
