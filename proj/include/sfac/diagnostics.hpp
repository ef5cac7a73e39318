#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfac/core.hpp"
#include "sfac/spectral.hpp"

namespace sfac {

struct HIndexReport {
    double H = 0.0;
    double S0 = 0.0;               ///< intercept of the linear fit near k = 0
    std::optional<double> k_peak;  ///< empty when no dominant peak exists
    double S_peak = 1.0;
    double fit_k_max = 0.0;
    std::size_t fit_points = 0;
    bool effectively_hyperuniform = false;  ///< H < 1e-3
};

HIndexReport h_index(const SpectralEstimate& e, double fit_k_max);

/// Slope of the least-squares line of log S against log k over k < fit_k_max.
double fit_alpha(const SpectralEstimate& e, double fit_k_max);

struct CoupledSumDraw {
    std::size_t M = 0;
    std::vector<double> Y;  ///< capped estimates Y_1 .. Y_M
    std::vector<double> tail_probabilities;  ///< P(M >= j), j = 1 .. M
    double Z = 0.0;
};

/// Law of M = 1 + Poisson(lambda). Truncated mode conditions on M <= cap.
class CoupledSumLaw {
public:
    CoupledSumLaw(double lambda, std::size_t cap, bool truncated = true);

    /// P(M >= j) for j >= 1.
    double tail(std::size_t j) const;
    /// P(M > cap) under the untruncated law.
    double overflow_probability() const;
    std::size_t draw(std::uint64_t seed) const;

    double lambda() const { return lambda_; }
    std::size_t cap() const { return cap_; }
    bool truncated() const { return truncated_; }

private:
    double lambda_;
    std::size_t cap_;
    bool truncated_;
    std::vector<double> pmf_;   // P(M = m) for m = 1 .. cap under the untruncated law
    std::vector<double> tail_;  // P(M >= j), j = 1 .. cap + 1, under the active law
};

/// Z = sum_{j <= M} (Y_j - Y_{j-1}) / P(M >= j), with Y_0 = 0.
double coupled_sum(std::span<const double> y, std::span<const double> tail_probabilities);

/// Largest lambda with P(1 + Poisson(lambda) > cap) < tolerance.
double max_lambda_for_schedule(std::size_t cap, double tolerance = 1e-4);

/// Throws ValidationError when P(M > cap) >= tolerance.
void check_overflow_rule(double lambda, std::size_t cap, double tolerance = 1e-4);

enum class MultiscaleEstimator { ScatteringIntensity, SelfNormalizedSI, Bartlett, SelfNormalizedBartlett };

std::string to_string(MultiscaleEstimator e);
MultiscaleEstimator parse_multiscale_estimator(const std::string& s);

/// Wavevector / wavenumber used at window w: (2 pi / L_j)_j for boxes, the
/// first zero of J_{d/2} over R for balls.
double estimate_at_kmin(const PointPattern& p, MultiscaleEstimator estimator);

using PatternSource = std::function<PointPattern(const Window& maximal, std::uint64_t seed)>;
using WindowEstimator = std::function<double(const PointPattern& restricted)>;

/// One coupled-sum draw: M from the law, one pattern on W_M restricted to
/// W_1 .. W_M, Y_j = min(1, estimate_j).
CoupledSumDraw coupled_sum_draw(const PatternSource& source, const WindowEstimator& estimator,
                                std::span<const Window> schedule, const CoupledSumLaw& law, std::uint64_t seed);

struct TestReport {
    double z_bar = 0.0;
    double sigma_bar = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double z_multiplier = 3.0;
    std::size_t A = 0;
    double lambda = 0.0;
    std::string estimator;
    std::string schedule;
    bool reject = false;
};

TestReport multiscale_test(std::span<const double> z_values, double z = 3.0);
TestReport multiscale_test(std::span<const CoupledSumDraw> draws, double z = 3.0);

struct ImseResult {
    std::vector<double> per_seed;
    double mean = 0.0;
    double ci_lo = 0.0;  ///< mean - 3 std-of-mean
    double ci_hi = 0.0;
    double ivar = 0.0;   ///< integrated across-seed variance
    std::vector<double> k;  ///< common subdivision used
};

/// Per-seed trapezoid integral of (S_hat - S)^2 over [k_lo, k_hi] after
/// averaging values that share a wavenumber.
ImseResult imse(std::span<const SpectralEstimate> estimates, const std::function<double(double)>& exact,
                double k_lo, double k_hi);

struct TTestResult {
    double t = 0.0;
    double p = 0.5;
};

/// Paired t-test of a - b. One-sided p = P(T_{A-1} <= t); two-sided doubles
/// the smaller tail.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, bool one_sided = true);

/// E[S_SI(k_min)^2] for a Poisson process on a box: 1 / (rho |W|) + 2.
double poisson_si_second_moment(double rho, const Window& box);

}  // namespace sfac
