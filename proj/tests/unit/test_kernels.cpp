#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sfac/error.hpp"
#include "sfac/kernels.hpp"
#include "sfac/samplers.hpp"
#include "sfac/specfun.hpp"

using namespace sfac;
using kernels::Exec;

TEST_CASE("exp sums match a direct loop and agree across execution modes") {
    const PointPattern p = sample_poisson(Window::box({30.0, 30.0}), 0.5, 21);
    std::vector<double> weights(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) weights[i] = 1.0 + 0.01 * static_cast<double>(i % 7);
    const std::vector<double> ks{0.2, -0.1, 1.3, 0.4, 0.0, 2.2};
    const auto serial = kernels::exp_sums(p.coords(), weights, 2, ks, Exec::Serial);
    const auto parallel = kernels::exp_sums(p.coords(), weights, 2, ks, Exec::Parallel);
    REQUIRE(serial.size() == 3);
    for (std::size_t m = 0; m < 3; ++m) {
        std::complex<long double> ref = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const auto x = p.point(i);
            const long double phase = -(ks[2 * m] * x[0] + ks[2 * m + 1] * x[1]);
            ref += static_cast<long double>(weights[i]) * std::complex<long double>(std::cos(phase), std::sin(phase));
        }
        CHECK(std::abs(serial[m] - std::complex<double>(ref)) < 1e-9);
        CHECK(std::abs(parallel[m] - serial[m]) < 1e-9);
    }
}

TEST_CASE("parallel exp sums are deterministic") {
    const PointPattern p = sample_poisson(Window::box({20.0, 20.0}), 1.0, 2);
    const std::vector<double> w(p.size(), 1.0);
    const std::vector<double> ks{0.3, 0.7};
    CHECK(kernels::exp_sums(p.coords(), w, 2, ks) == kernels::exp_sums(p.coords(), w, 2, ks));
}

TEST_CASE("radial kernel equals J_nu(x) / x^nu") {
    for (int d = 1; d <= 5; ++d) {
        const double nu = 0.5 * d - 1.0;
        for (double x : {0.1, 1.0, 4.5, 30.0}) {
            CHECK(kernels::radial_kernel(d, x) ==
                  doctest::Approx(specfun::bessel_j(nu, x) / std::pow(x, nu)).epsilon(1e-11).scale(1e-13));
        }
    }
    CHECK(kernels::radial_kernel(2, 0.0) == 1.0);
    CHECK(kernels::radial_kernel(4, 0.0) == doctest::Approx(0.5));
}

TEST_CASE("pair kernel sums") {
    const PointPattern p = sample_poisson(Window::ball(2, 12.0), 0.4, 3);
    const std::vector<double> ks{0.3, 0.9};
    const auto serial = kernels::pair_kernel_sums(p.coords(), 2, ks, Exec::Serial);
    const auto parallel = kernels::pair_kernel_sums(p.coords(), 2, ks, Exec::Parallel);
    for (std::size_t m = 0; m < ks.size(); ++m) {
        CHECK(parallel[m] == doctest::Approx(serial[m]).epsilon(1e-10));
    }
    // three points, hand computed
    const std::vector<double> c{0.0, 0.0, 3.0, 0.0, 0.0, 4.0};
    const std::vector<double> k1{1.0};
    const double ref = 2.0 * (specfun::bessel_j(0, 3.0) + specfun::bessel_j(0, 4.0) + specfun::bessel_j(0, 5.0));
    CHECK(kernels::pair_kernel_sums(c, 2, k1, Exec::Serial)[0] == doctest::Approx(ref));
    CHECK(kernels::pair_kernel_sums(c, 2, k1, Exec::Parallel)[0] == doctest::Approx(ref));
}

TEST_CASE("translation overlap") {
    const std::vector<double> z{1.0, -2.0};
    CHECK(kernels::translation_overlap(Window::box({4.0, 5.0}), z) == doctest::Approx(9.0));
    const std::vector<double> far{5.0, 0.0};
    CHECK(kernels::translation_overlap(Window::box({4.0, 5.0}), far) == 0.0);

    const double R = 2.0;
    const std::vector<double> zero{0.0, 0.0};
    CHECK(kernels::translation_overlap(Window::ball(2, R), zero) == doctest::Approx(std::numbers::pi * R * R));
    // the three-dimensional lens: pi (4R + s)(2R - s)^2 / 12
    for (double s : {0.0, 0.5, 1.7, 3.9}) {
        const std::vector<double> z3{s, 0.0, 0.0};
        const double ref = std::numbers::pi * (4 * R + s) * (2 * R - s) * (2 * R - s) / 12.0;
        CHECK(kernels::translation_overlap(Window::ball(3, R), z3) == doctest::Approx(ref).epsilon(1e-11));
    }
    // two-dimensional lens matches the general formula
    for (double s : {0.3, 2.5}) {
        const std::vector<double> z2{0.0, s};
        const double x = 1.0 - s * s / (4 * R * R);
        const double general = std::numbers::pi * R * R * specfun::regularized_incomplete_beta(1.5, 0.5, x);
        CHECK(kernels::translation_overlap(Window::ball(2, R), z2) == doctest::Approx(general).epsilon(1e-11));
    }
}

TEST_CASE("Epanechnikov kernel integrates to one") {
    const double b = 0.7;
    double s = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = -b + (i + 0.5) * 2 * b / n;
        s += kernels::epanechnikov(u, b) * 2 * b / n;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(kernels::epanechnikov(b, b) == 0.0);
    CHECK(kernels::epanechnikov(2 * b, b) == 0.0);
}

TEST_CASE("pcf pair sums agree across execution modes") {
    const PointPattern p = sample_poisson(Window::box({25.0, 25.0}), 0.5, 8);
    std::vector<double> r;
    for (int i = 1; i <= 40; ++i) r.push_back(0.2 * i);
    const auto serial = kernels::pcf_pair_sums(p.coords(), p.window(), r, 0.6, Exec::Serial);
    const auto parallel = kernels::pcf_pair_sums(p.coords(), p.window(), r, 0.6, Exec::Parallel);
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(parallel[i] == doctest::Approx(serial[i]).epsilon(1e-10));

    // single pair at distance 1 in a large box
    const Window w = Window::box({10.0, 10.0});
    const std::vector<double> c{0.0, 0.0, 1.0, 0.0};
    const std::vector<double> grid{1.0};
    const double ref = 2.0 * kernels::epanechnikov(0.0, 0.5) / (9.0 * 10.0);
    CHECK(kernels::pcf_pair_sums(c, w, grid, 0.5, Exec::Serial)[0] == doctest::Approx(ref));
    const std::vector<double> unsorted{2.0, 1.0};
    CHECK_THROWS_AS(kernels::pcf_pair_sums(c, w, unsorted, 0.5), ValidationError);
    CHECK_THROWS_AS(kernels::pcf_pair_sums(c, w, grid, 0.0), ValidationError);
}

TEST_CASE("thread count control") {
    const int before = kernels::max_threads();
    CHECK(before >= 1);
    kernels::set_threads(1);
    CHECK(kernels::max_threads() == 1);
    kernels::set_threads(before);
}
