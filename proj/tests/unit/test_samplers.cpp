#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "sfac/complex_eigen.hpp"
#include "sfac/error.hpp"
#include "sfac/rng.hpp"
#include "sfac/samplers.hpp"

using namespace sfac;

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    m.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double x : v) m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(v.size() - 1);
    return m;
}

}  // namespace

TEST_CASE("seed derivation is deterministic and spreads") {
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 1) != derive_seed(2, 0));
    auto a = make_rng(42);
    auto b = make_rng(42);
    CHECK(a() == b());
}

TEST_CASE("Poisson counts have Poisson moments") {
    const Window w = Window::box({10.0, 10.0});
    const double rho = 0.5;
    std::vector<double> counts;
    for (std::uint64_t s = 0; s < 400; ++s) counts.push_back(static_cast<double>(sample_poisson(w, rho, s).size()));
    const auto m = moments(counts);
    const double mu = rho * w.volume();
    CHECK(std::abs(m.mean - mu) < 4.0 * std::sqrt(mu / 400.0));
    CHECK(m.var == doctest::Approx(mu).epsilon(0.25));
}

TEST_CASE("Poisson on a ball is uniform in the radial coordinate") {
    const Window w = Window::ball(3, 2.0);
    const PointPattern p = sample_poisson(w, 50.0, 3);
    // P(|x| <= R/2) = 1/8 in three dimensions
    std::size_t inner = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto x = p.point(i);
        if (std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) <= 1.0) ++inner;
    }
    const double frac = static_cast<double>(inner) / static_cast<double>(p.size());
    CHECK(std::abs(frac - 0.125) < 4.0 * std::sqrt(0.125 * 0.875 / static_cast<double>(p.size())));
}

TEST_CASE("samplers are reproducible per seed") {
    const Window w = Window::box({20.0, 20.0});
    CHECK(sample_poisson(w, 0.3, 9).coords() == sample_poisson(w, 0.3, 9).coords());
    CHECK(sample_poisson(w, 0.3, 9).coords() != sample_poisson(w, 0.3, 10).coords());
    CHECK(sample_thomas(w, 0.01, 5, 1.0, 4).coords() == sample_thomas(w, 0.01, 5, 1.0, 4).coords());
    CHECK(sample_ginibre(6.0, 4).coords() == sample_ginibre(6.0, 4).coords());
}

TEST_CASE("Thomas intensity is parent intensity times offspring mean") {
    const Window w = Window::box({30.0, 30.0});
    const double rho_p = 1.0 / (20.0 * std::numbers::pi);
    std::vector<double> counts;
    for (std::uint64_t s = 0; s < 200; ++s) {
        counts.push_back(static_cast<double>(sample_thomas(w, rho_p, 20.0, 2.0, s).size()));
    }
    const auto m = moments(counts);
    CHECK(std::abs(m.mean / w.volume() - 1.0 / std::numbers::pi) < 4.0 * std::sqrt(m.var / 200.0) / w.volume());
    // clustering inflates the count variance well above Poisson
    CHECK(m.var > 5.0 * m.mean);
}

TEST_CASE("thinning keeps each point independently") {
    const PointPattern p = sample_poisson(Window::box({40.0, 40.0}), 1.0, 1);
    const PointPattern q = thin(p, 0.3, 2);
    const double n = static_cast<double>(p.size());
    CHECK(std::abs(static_cast<double>(q.size()) - 0.3 * n) < 4.0 * std::sqrt(0.21 * n));
    CHECK(*q.intensity() == doctest::Approx(0.3));
    CHECK(thin(p, 1.0 - 1e-12, 2).size() == p.size());
    CHECK_THROWS_AS(thin(p, 1.0, 2), ValidationError);
    CHECK_THROWS_AS(thin(p, 0.0, 2), ValidationError);
}

TEST_CASE("Ginibre eigenvalue backends agree") {
    if (!linalg::lapack_available()) return;
    const auto a = ginibre_eigenvalues(120, 17, linalg::EigenBackend::Reference);
    const auto b = ginibre_eigenvalues(120, 17, linalg::EigenBackend::Lapack);
    auto key = [](const linalg::cplx& z) { return std::make_pair(z.real(), z.imag()); };
    std::vector<std::pair<double, double>> ka, kb;
    for (const auto& z : a) ka.push_back(key(z));
    for (const auto& z : b) kb.push_back(key(z));
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    REQUIRE(ka.size() == kb.size());
    for (std::size_t i = 0; i < ka.size(); ++i) {
        CHECK(ka[i].first == doctest::Approx(kb[i].first).epsilon(1e-8).scale(1e-8));
        CHECK(ka[i].second == doctest::Approx(kb[i].second).epsilon(1e-8).scale(1e-8));
    }
}

TEST_CASE("reference eigen solver on a known matrix") {
    // upper triangular: eigenvalues are the diagonal
    const int n = 4;
    std::vector<linalg::cplx> a(16, 0.0);
    const std::vector<linalg::cplx> diag{{1, 2}, {-3, 0}, {0.5, -1}, {7, 7}};
    for (int i = 0; i < n; ++i) {
        a[static_cast<std::size_t>(i * n + i)] = diag[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) a[static_cast<std::size_t>(i * n + j)] = {0.3 * j, -0.1 * i};
    }
    auto eig = linalg::eigenvalues(a, n, linalg::EigenBackend::Reference);
    double sum_re = 0.0, sum_im = 0.0;
    for (const auto& z : eig) {
        sum_re += z.real();
        sum_im += z.imag();
    }
    CHECK(sum_re == doctest::Approx(5.5));
    CHECK(sum_im == doctest::Approx(8.0));
}

TEST_CASE("Ginibre patterns have intensity 1/pi and suppressed count fluctuations") {
    const double R = 10.0;
    std::vector<double> counts;
    for (std::uint64_t s = 0; s < 40; ++s) counts.push_back(static_cast<double>(sample_ginibre(R, s).size()));
    const auto m = moments(counts);
    CHECK(m.mean == doctest::Approx(R * R).epsilon(0.05));
    // Poisson would give variance R^2 = 100
    CHECK(m.var < 20.0);
}

TEST_CASE("Ginibre sizing guard") {
    GinibreOptions o;
    o.n_max = 100;
    CHECK(ginibre_matrix_size(8.0, o) == 89);
    CHECK_THROWS_AS(ginibre_matrix_size(9.0, o), ResourceError);
    CHECK_THROWS_AS(sample_ginibre_on(Window::box({2.0, 2.0, 2.0}), 1), ValidationError);
    const PointPattern p = sample_ginibre_on(Window::box({10.0, 10.0}), 5);
    CHECK(p.window() == Window::box({10.0, 10.0}));
    CHECK(circumradius(Window::box({6.0, 8.0})) == doctest::Approx(5.0));
}

TEST_CASE("closed forms") {
    CHECK(ginibre_pcf(0.0) == 0.0);
    CHECK(ginibre_structure_factor(2.0) == doctest::Approx(1.0 - std::exp(-1.0)));
    CHECK(thomas_structure_factor(0.0, 20.0, 2.0) == doctest::Approx(21.0));
    CHECK(thomas_structure_factor(0.5, 20.0, 2.0) == doctest::Approx(1.0 + 20.0 * std::exp(-1.0)));
    CHECK(thinned_structure_factor(0.0, 0.5) == doctest::Approx(0.5));
    CHECK(thinned_structure_factor(1.0, 0.2) == doctest::Approx(1.0));
    // Thomas pcf integrates to the offspring excess: rho int (g - 1) = lambda
    const double rho_p = 0.01, sigma = 1.5, lambda = 8.0;
    double integral = 0.0;
    const double h = 1e-3;
    for (double r = 0.5 * h; r < 30.0; r += h) {
        integral += 2.0 * std::numbers::pi * r * (thomas_pcf(r, rho_p, sigma, 2) - 1.0) * h;
    }
    CHECK(rho_p * lambda * integral == doctest::Approx(lambda).epsilon(1e-6));
}
