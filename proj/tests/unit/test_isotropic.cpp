#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "sfac/error.hpp"
#include "sfac/isotropic.hpp"
#include "sfac/samplers.hpp"
#include "sfac/spectral.hpp"
#include "sfac/specfun.hpp"

using namespace sfac;

TEST_CASE("self-normalized Bartlett is the angular average of the self-normalized scattering intensity") {
    const PointPattern p = sample_poisson(Window::ball(2, 6.0), 0.5, 12);
    const std::vector<double> ks{0.4, 1.1, 2.5};
    const auto bart = bartlett_isotropic(p, ks, true);
    // the angular average of |sum e^{-ikx}|^2 / N over a periodic grid is spectrally accurate
    const int n_angles = 720;
    for (std::size_t m = 0; m < ks.size(); ++m) {
        std::vector<double> vecs;
        for (int a = 0; a < n_angles; ++a) {
            const double t = 2.0 * std::numbers::pi * a / n_angles;
            vecs.push_back(ks[m] * std::cos(t));
            vecs.push_back(ks[m] * std::sin(t));
        }
        const PointPattern as_box(Window::box({12.0, 12.0}), p.coords());
        const auto si = scattering_intensity(as_box, WaveGrid::from_wavevectors(2, vecs), true);
        double avg = 0.0;
        for (double v : si.values) avg += v / n_angles;
        CHECK(bart.values[m] == doctest::Approx(avg).epsilon(1e-9));
    }
}

TEST_CASE("Bartlett estimator on a pair of points") {
    const Window w = Window::ball(3, 5.0);
    const PointPattern p(w, {0.0, 0.0, 0.0, 1.0, 2.0, 2.0}, 0.1);
    const std::vector<double> ks{0.7};
    const auto e = bartlett_isotropic(p, ks, false);
    const double r = 3.0;
    const double kernel = std::sqrt(2.0 / std::numbers::pi) * std::sin(0.7 * r) / (0.7 * r);
    const double ref = 1.0 + std::pow(2.0 * std::numbers::pi, 1.5) * 2.0 * kernel /
                                 (0.1 * w.volume() * specfun::unit_sphere_area(3));
    CHECK(e.values[0] == doctest::Approx(ref));
    CHECK(bartlett_isotropic(PointPattern(w, {0.0, 0.0, 0.0}), ks, false).values[0] == 1.0);
    CHECK_THROWS_AS(bartlett_isotropic(PointPattern(Window::box({2.0, 2.0}), {}), ks, false), ValidationError);
    const std::vector<double> bad{0.0};
    CHECK_THROWS_AS(bartlett_isotropic(p, bad, false), ValidationError);
}

TEST_CASE("Bartlett is unbiased for Poisson at allowed wavenumbers") {
    const Window w = Window::ball(2, 15.0);
    const auto ks = allowed_wavenumbers_ball_upto(w, 1.2);
    std::vector<double> mean(ks.size(), 0.0), sq(ks.size(), 0.0);
    const int draws = 150;
    for (int s = 0; s < draws; ++s) {
        const PointPattern raw = sample_poisson(w, 0.5, static_cast<std::uint64_t>(s));
        const PointPattern p(w, raw.coords(), 0.5, false);
        const auto e = bartlett_isotropic(p, ks, false);
        for (std::size_t m = 0; m < ks.size(); ++m) {
            mean[m] += e.values[m] / draws;
            sq[m] += e.values[m] * e.values[m] / draws;
        }
    }
    for (std::size_t m = 0; m < ks.size(); ++m) {
        const double se = std::sqrt((sq[m] - mean[m] * mean[m]) / draws);
        CHECK(std::abs(mean[m] - 1.0) < 4.0 * se);
    }
}

TEST_CASE("Ogata quadrature reproduces closed-form structure factors") {
    const double rho = 1.0 / std::numbers::pi;
    std::vector<double> ks;
    for (double k = 0.5; k <= 5.0; k += 0.25) ks.push_back(k);
    const auto gin = hankel_ogata(ginibre_pcf, rho, 2, ks);
    for (std::size_t m = 0; m < ks.size(); ++m) {
        CHECK(std::abs(gin.values[m] - ginibre_structure_factor(ks[m])) < 1e-3);
    }
    // Gaussian clusters in one and three dimensions
    const double rho_p = 0.02, lambda = 5.0, sigma = 1.0;
    for (int d : {1, 3}) {
        const auto g = [&](double r) { return thomas_pcf(r, rho_p, sigma, d); };
        const auto e = hankel_ogata(g, rho_p * lambda, d, ks);
        for (std::size_t m = 0; m < ks.size(); ++m) {
            const double exact = thomas_structure_factor(ks[m], lambda, sigma);
            CHECK(std::abs(e.values[m] - exact) < 1e-2 * exact);
        }
    }
}

TEST_CASE("Ogata warns below its minimum wavenumber") {
    OgataParams params;
    params.r_max = 10.0;
    const double k_min = ogata_k_min(2, params.n_nodes, 10.0);
    const std::vector<double> ks{0.5 * k_min, 2.0 * k_min};
    const auto e = hankel_ogata(ginibre_pcf, 1.0 / std::numbers::pi, 2, ks, params);
    REQUIRE(e.metadata.count("warning") == 1);
    CHECK(e.metadata.at("warning").find("1 wavenumber") == 0);
    const std::vector<double> bad{-1.0};
    CHECK_THROWS_AS(hankel_ogata(ginibre_pcf, 1.0, 2, bad), ValidationError);
}

TEST_CASE("DHT grid identities") {
    for (int d : {1, 2, 3}) {
        const DhtGrid g = make_dht_grid(d, 30.0, 200);
        const double eta_n = g.zeros.back();
        CHECK(g.k_max * g.r_max == doctest::Approx(eta_n).epsilon(1e-12));
        REQUIRE(g.r_nodes.size() == 199);
        for (std::size_t j = 0; j < g.r_nodes.size(); j += 17) {
            for (std::size_t m = 0; m < g.k_nodes.size(); m += 23) {
                CHECK(std::abs(g.r_nodes[j] * g.k_nodes[m] - g.zeros[j] * g.zeros[m] / eta_n) <
                      1e-12 * g.zeros[j] * g.zeros[m] / eta_n);
            }
            CHECK(std::abs(specfun::bessel_j(g.order, g.r_nodes[j] * g.k_max)) < 1e-12);
        }
        CHECK(g.r_nodes.back() < g.r_max);
    }
    CHECK_THROWS_AS(make_dht_grid(2, 30.0, 1), ValidationError);
    CHECK_THROWS_AS(make_dht_grid(2, -1.0, 10), ValidationError);
}

TEST_CASE("DHT reproduces the Ginibre structure factor") {
    const DhtGrid g = make_dht_grid(2, 30.0, 400);
    const auto e = hankel_dht(ginibre_pcf, 1.0 / std::numbers::pi, 2, g);
    for (std::size_t m = 0; m < e.wavenumbers.size(); ++m) {
        const double k = e.wavenumbers[m];
        if (k < 0.2 || k > 5.0) continue;
        CHECK(std::abs(e.values[m] - ginibre_structure_factor(k)) < 1e-6);
    }
    CHECK_THROWS_AS(hankel_dht(ginibre_pcf, 1.0, 3, g), ValidationError);
}

TEST_CASE("kernel pcf estimate of Poisson is close to one") {
    const PointPattern p = sample_poisson(Window::box({60.0, 60.0}), 1.0, 3);
    std::vector<double> r;
    for (int i = 1; i <= 20; ++i) r.push_back(0.5 * i);
    const auto e = estimate_pcf_kernel(p, r);
    CHECK(e.bandwidth == doctest::Approx(0.15));
    double mean = 0.0;
    for (std::size_t i = 2; i < r.size(); ++i) mean += e.values[i] / static_cast<double>(r.size() - 2);
    CHECK(mean == doctest::Approx(1.0).epsilon(0.05));
    CHECK_FALSE(e.unreliable[0]);

    const std::vector<double> too_far{59.9};
    CHECK_THROWS_AS(estimate_pcf_kernel(p, too_far), ValidationError);
    CHECK_THROWS_AS(estimate_pcf_kernel(PointPattern(p.window(), {0.0, 0.0}), r), ValidationError);
    const auto serial = estimate_pcf_kernel(p, r, std::nullopt, kernels::Exec::Serial);
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(serial.values[i] == doctest::Approx(e.values[i]).epsilon(1e-10));
}

TEST_CASE("kernel pcf estimate of Ginibre follows 1 - exp(-r^2)") {
    const PointPattern p = sample_ginibre_on(Window::box({50.0, 50.0}), 4);
    std::vector<double> r;
    for (int i = 1; i <= 12; ++i) r.push_back(0.25 * i);
    const auto e = estimate_pcf_kernel(p, r, 0.2);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(std::abs(e.values[i] - ginibre_pcf(r[i])) < 0.15);
}

TEST_CASE("pcf cleaning and interpolation") {
    PcfEstimate e;
    e.radii = {0.1, 0.5, 1.0, 2.0};
    e.values = {5.0, -0.2, 1.0, 3.0};
    e.unreliable = {true, false, false, false};
    e.r_max = 2.0;
    const auto c = clean_pcf(e);
    CHECK(c.radii.size() == 3);
    CHECK(c.values[0] == 0.0);
    const PcfInterpolator g(e);
    CHECK(g(0.75) == doctest::Approx(0.5));
    CHECK(g(1.5) == doctest::Approx(2.0));
    CHECK(g(0.2) == 0.0);
    CHECK(g(2.5) == 1.0);
    CHECK(stoyan_bandwidth(4.0) == doctest::Approx(0.075));
    CHECK(default_pcf_rmax(Window::ball(2, 10.0)) == 5.0);
}
