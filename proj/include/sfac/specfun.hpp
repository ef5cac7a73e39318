#pragma once

#include <cstddef>
#include <span>
#include <vector>

/// Special functions shared by every estimator: Bessel functions of the
/// first and second kind, their positive zeros, and the Fourier transforms
/// of window indicators that make up the estimator bias terms.
namespace sfac::specfun {

/// J_nu(x) for nu >= -1/2 and x >= 0.
///
/// Power series for x <= nu + 12. Beyond that: Hankel's asymptotic expansion
/// once x is large enough for it to converge to double precision, otherwise
/// Miller's backward recurrence (integer orders) or Steed's continued
/// fractions (fractional orders).
double bessel_j(double nu, double x);

/// Y_nu(x) for nu >= -1/2 and x > 0. Throws ValidationError for x <= 0.
double bessel_y(double nu, double x);

struct BesselValues {
    double j;
    double y;
    double jp;  ///< dJ/dx
    double yp;  ///< dY/dx
};

/// J, Y and their derivatives in one evaluation (x > 0).
BesselValues bessel_jy(double nu, double x);

/// Positive zeros of J_nu in increasing order.
struct BesselZeroTable {
    double order = 0.0;
    std::vector<double> zeros;
};

/// First n positive zeros of J_nu. Tables are cached per order and shared
/// between threads; repeated queries for an order return prefixes of the
/// longest table computed so far.
BesselZeroTable bessel_j_zeros(double nu, std::size_t n);

/// Fourier transform of the indicator of the centered box with side lengths L:
/// prod_j sin(k_j L_j / 2) / (k_j / 2), with the limit L_j at k_j = 0.
double ft_indicator_box(std::span<const double> k, std::span<const double> lengths);

/// Fourier transform of the scaled intersection volume of a centered box,
/// ft_indicator_box(k, L)^2 / |W|. Multiplying by rho gives the bias term of
/// the scattering intensity.
double ft_alpha0_box(std::span<const double> k, std::span<const double> lengths);

/// Fourier transform of the scaled intersection volume of the centered ball
/// of radius R in dimension d: 2^d pi^{d/2} Gamma(1 + d/2) J_{d/2}(kR)^2 / k^d.
/// Requires k > 0.
double ft_alpha0_ball(double k, double radius, int dim);

/// Surface area of the unit sphere S^{d-1} in R^d.
double unit_sphere_area(int dim);

/// Volume of the d-dimensional ball of radius r.
double ball_volume(int dim, double radius);

/// Regularized incomplete beta function I_x(a, b).
double regularized_incomplete_beta(double a, double b, double x);

/// CDF of Student's t distribution with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

}  // namespace sfac::specfun
