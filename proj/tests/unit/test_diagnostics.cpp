#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "sfac/diagnostics.hpp"
#include "sfac/error.hpp"
#include "sfac/samplers.hpp"

using namespace sfac;

namespace {

SpectralEstimate tabulate(const std::function<double(double)>& s, double lo, double hi, std::size_t n) {
    SpectralEstimate e;
    for (std::size_t i = 0; i < n; ++i) {
        const double k = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        e.wavenumbers.push_back(k);
        e.values.push_back(s(k));
    }
    return e;
}

// P(Poisson(lambda) >= n) by a forward pmf recurrence, summing the upper tail
double poisson_tail_oracle(double lambda, std::size_t n) {
    double pmf = std::exp(-lambda);
    double below = 0.0;
    double above = 0.0;
    for (std::size_t i = 0; i < n + 400; ++i) {
        (i < n ? below : above) += pmf;
        pmf *= lambda / static_cast<double>(i + 1);
    }
    return n <= lambda ? 1.0 - below : above;
}

}  // namespace

TEST_CASE("H-index on exact structure factors") {
    const auto thomas = tabulate([](double k) { return thomas_structure_factor(k, 20.0, 2.0); }, 0.01, 3.0, 300);
    const auto rt = h_index(thomas, 0.3);
    // the Thomas S decreases monotonically: no interior peak, so S_peak = 1
    CHECK_FALSE(rt.k_peak.has_value());
    CHECK(rt.S_peak == 1.0);
    CHECK_FALSE(rt.effectively_hyperuniform);

    const auto gin = tabulate(ginibre_structure_factor, 0.01, 6.0, 400);
    const auto rg = h_index(gin, 0.3);
    CHECK(std::abs(rg.H) < 0.02);
}

TEST_CASE("H-index picks the first dominant peak") {
    SpectralEstimate e;
    e.wavenumbers = {0.1, 0.2, 0.3, 1.0, 1.5, 2.0, 2.5, 3.0};
    e.values = {0.01, 0.02, 0.03, 1.5, 2.0, 2.0, 1.1, 3.0};
    const auto r = h_index(e, 0.35);
    CHECK(r.S0 == doctest::Approx(0.0).scale(1.0));
    REQUIRE(r.k_peak.has_value());
    CHECK(*r.k_peak == 1.5);
    CHECK(r.S_peak == 2.0);
    CHECK(r.fit_points == 3);
    CHECK(r.effectively_hyperuniform);
    CHECK_THROWS_AS(h_index(e, 0.15), ValidationError);
}

TEST_CASE("H-index averages repeated wavenumbers") {
    SpectralEstimate e;
    e.wavenumbers = {0.1, 0.1, 0.2, 0.2, 1.0, 2.0, 3.0};
    e.values = {1.0, 3.0, 3.0, 5.0, 1.5, 2.0, 1.0};
    const auto r = h_index(e, 0.25);
    // averaged points (0.1, 2) and (0.2, 4) give intercept 0
    CHECK(r.S0 == doctest::Approx(0.0).scale(1.0));
    CHECK(r.fit_points == 2);
}

TEST_CASE("power-decay exponent") {
    for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
        const auto e = tabulate([alpha](double k) { return 3.0 * std::pow(k, alpha); }, 0.05, 1.0, 50);
        CHECK(fit_alpha(e, 0.45) == doctest::Approx(alpha).epsilon(1e-12));
    }
    const auto gin = tabulate(ginibre_structure_factor, 0.05, 0.45, 41);
    CHECK(fit_alpha(gin, 0.46) == doctest::Approx(2.0).epsilon(0.05));

    SpectralEstimate bad;
    bad.wavenumbers = {0.1, 0.2, 0.3};
    bad.values = {0.1, -0.2, 0.3};
    try {
        fit_alpha(bad, 0.5);
        FAIL("expected a validation error");
    } catch (const ValidationError& err) {
        CHECK(std::string(err.what()).find("0.2") != std::string::npos);
    }
}

TEST_CASE("coupled-sum law tails") {
    const CoupledSumLaw untruncated(3.0, 20, false);
    for (std::size_t j = 1; j <= 22; ++j) {
        CHECK(untruncated.tail(j) == doctest::Approx(poisson_tail_oracle(3.0, j - 1)).epsilon(1e-12).scale(1e-15));
    }
    CHECK(untruncated.overflow_probability() == doctest::Approx(poisson_tail_oracle(3.0, 20)).epsilon(1e-9));

    const CoupledSumLaw truncated(3.0, 5, true);
    CHECK(truncated.tail(1) == doctest::Approx(1.0));
    CHECK(truncated.tail(6) == 0.0);
    for (std::size_t j = 2; j <= 5; ++j) {
        CHECK(truncated.tail(j) < truncated.tail(j - 1));
        // conditional law of 1 + Poisson given M <= cap
        const double num = poisson_tail_oracle(3.0, j - 1) - poisson_tail_oracle(3.0, 5);
        const double den = 1.0 - poisson_tail_oracle(3.0, 5);
        CHECK(truncated.tail(j) == doctest::Approx(num / den).epsilon(1e-12));
    }
    CHECK_THROWS_AS(CoupledSumLaw(0.0, 5), ValidationError);
    CHECK_THROWS_AS(CoupledSumLaw(1.0, 0), ValidationError);
}

TEST_CASE("coupled sum telescopes to the last estimate in expectation") {
    const std::vector<double> y{0.3, 0.55, 0.6, 0.62, 0.7, 0.71, 0.74};
    for (bool truncated : {true, false}) {
        const CoupledSumLaw law(2.0, y.size(), truncated);
        double expectation = 0.0;
        for (std::size_t m = 1; m <= y.size(); ++m) {
            const double p_m = law.tail(m) - law.tail(m + 1);
            std::vector<double> tails;
            for (std::size_t j = 1; j <= m; ++j) tails.push_back(law.tail(j));
            expectation += p_m * coupled_sum(std::span(y).first(m), tails);
        }
        if (truncated) {
            CHECK(expectation == doctest::Approx(y.back()).epsilon(1e-12));
        } else {
            // untruncated mass beyond the schedule is not represented
            CHECK(std::abs(expectation - y.back()) <= law.overflow_probability() * 10.0);
        }
    }
    const std::vector<double> one{0.4};
    const std::vector<double> t1{1.0};
    CHECK(coupled_sum(one, t1) == 0.4);
    CHECK_THROWS_AS(coupled_sum(one, std::vector<double>{}), ValidationError);
}

TEST_CASE("Rhee-Glynn stub is unbiased over random M") {
    const std::vector<double> y{0.1, 0.5, 0.2, 0.9, 0.85, 0.8, 0.81, 0.8};
    const CoupledSumLaw law(3.0, y.size(), true);
    const int n = 100000;
    double mean = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const std::size_t m = law.draw(static_cast<std::uint64_t>(i));
        std::vector<double> tails;
        for (std::size_t j = 1; j <= m; ++j) tails.push_back(law.tail(j));
        const double z = coupled_sum(std::span(y).first(m), tails);
        mean += z / n;
        sq += z * z / n;
    }
    const double se = std::sqrt((sq - mean * mean) / n);
    CHECK(std::abs(mean - y.back()) < 3.0 * se);
}

TEST_CASE("overflow rule") {
    const std::size_t cap = 41;
    const double lambda = max_lambda_for_schedule(cap);
    CHECK(poisson_tail_oracle(lambda, cap) < 1e-4);
    CHECK(poisson_tail_oracle(lambda * (1.0 + 1e-6), cap) >= 1e-4 * (1.0 - 1e-3));
    CHECK_NOTHROW(check_overflow_rule(0.99 * lambda, cap));
    CHECK_THROWS_AS(check_overflow_rule(1.01 * lambda, cap), ValidationError);

    const CoupledSumLaw risky(30.0, 10, false);
    bool overflowed = false;
    for (std::uint64_t s = 0; s < 50 && !overflowed; ++s) {
        try {
            (void)risky.draw(s);
        } catch (const ResourceError&) {
            overflowed = true;
        }
    }
    CHECK(overflowed);
}

TEST_CASE("coupled-sum draws") {
    std::vector<Window> schedule;
    for (double l = 10.0; l <= 20.0; l += 2.0) schedule.push_back(Window::box({l, l}));
    const CoupledSumLaw law(2.0, schedule.size());
    const PatternSource source = [](const Window& w, std::uint64_t seed) { return sample_poisson(w, 0.5, seed); };
    const WindowEstimator est = [](const PointPattern& p) {
        return estimate_at_kmin(p, MultiscaleEstimator::ScatteringIntensity);
    };
    const auto a = coupled_sum_draw(source, est, schedule, law, 5);
    const auto b = coupled_sum_draw(source, est, schedule, law, 5);
    CHECK(a.M == b.M);
    CHECK(a.Z == b.Z);
    REQUIRE(a.Y.size() == a.M);
    for (double y : a.Y) {
        CHECK(y >= 0.0);
        CHECK(y <= 1.0);
    }
    CHECK(a.Z == doctest::Approx(coupled_sum(a.Y, a.tail_probabilities)));

    std::vector<Window> bad{Window::box({10.0, 10.0}), Window::box({10.0, 10.0})};
    CHECK_THROWS_AS(coupled_sum_draw(source, est, bad, CoupledSumLaw(1.0, 2), 1), ValidationError);
    CHECK_THROWS_AS(coupled_sum_draw(source, est, schedule, CoupledSumLaw(1.0, 3), 1), ValidationError);
}

TEST_CASE("estimates at the minimal allowed wavenumber") {
    const Window box = Window::box({10.0, 10.0});
    CHECK(estimate_at_kmin(PointPattern(box, {}), MultiscaleEstimator::ScatteringIntensity) == 0.0);
    const PointPattern one(box, {0.0, 0.0});
    CHECK(estimate_at_kmin(one, MultiscaleEstimator::SelfNormalizedSI) == doctest::Approx(1.0));
    CHECK(estimate_at_kmin(one, MultiscaleEstimator::ScatteringIntensity) == doctest::Approx(1.0));
    CHECK_THROWS_AS(estimate_at_kmin(one, MultiscaleEstimator::Bartlett), ValidationError);
    const PointPattern ball(Window::ball(2, 5.0), {0.0, 0.0});
    CHECK(estimate_at_kmin(ball, MultiscaleEstimator::Bartlett) == 1.0);
    CHECK(parse_multiscale_estimator(to_string(MultiscaleEstimator::SelfNormalizedBartlett)) ==
          MultiscaleEstimator::SelfNormalizedBartlett);
    CHECK_THROWS_AS(parse_multiscale_estimator("periodogram"), ValidationError);
}

TEST_CASE("multiscale test decision") {
    const std::vector<double> z{1.0, 2.0, 3.0, 4.0};
    const auto r = multiscale_test(z);
    CHECK(r.z_bar == doctest::Approx(2.5));
    CHECK(r.sigma_bar == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(r.ci_lo == doctest::Approx(2.5 - 3.0 * std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(r.reject);
    const std::vector<double> centered{-1.0, 1.0, -0.5, 0.5};
    CHECK_FALSE(multiscale_test(centered).reject);
    CHECK_THROWS_AS(multiscale_test(std::vector<double>{1.0}), ValidationError);
}

TEST_CASE("integrated mean squared error") {
    std::vector<SpectralEstimate> perfect, offset;
    for (int s = 0; s < 3; ++s) {
        auto e = tabulate([](double k) { return 1.0 + k; }, 0.0, 2.0, 21);
        perfect.push_back(e);
        for (double& v : e.values) v += 0.5 + 0.1 * s;
        offset.push_back(e);
    }
    const auto exact = [](double k) { return 1.0 + k; };
    const auto r0 = imse(perfect, exact, 0.5, 1.5);
    CHECK(r0.mean == doctest::Approx(0.0).scale(1.0));
    CHECK(r0.ivar == doctest::Approx(0.0).scale(1.0));
    const auto r1 = imse(offset, exact, 0.5, 1.5);
    CHECK(r1.per_seed[0] == doctest::Approx(0.25));
    CHECK(r1.per_seed[2] == doctest::Approx(0.49));
    CHECK(r1.ivar == doctest::Approx(0.01));
    CHECK(r1.k.front() == doctest::Approx(0.5));

    offset[1].wavenumbers[10] += 0.01;
    CHECK_THROWS_AS(imse(offset, exact, 0.5, 1.5), ValidationError);
    CHECK_THROWS_AS(imse(perfect, exact, 1.5, 0.5), ValidationError);
}

TEST_CASE("paired t-test") {
    const std::vector<double> a{1.0, 2.0, 3.0};
    CHECK(paired_t_test(a, a).p == 0.5);
    const std::vector<double> x{1.0, 3.0};
    const std::vector<double> zero{0.0, 0.0};
    const auto r = paired_t_test(x, zero);
    CHECK(r.t == doctest::Approx(2.0));
    CHECK(r.p == doctest::Approx(0.5 + std::atan(2.0) / std::numbers::pi));
    const auto two = paired_t_test(zero, x, false);
    CHECK(two.p == doctest::Approx(2.0 * (0.5 - std::atan(2.0) / std::numbers::pi)));
    CHECK_THROWS_AS(paired_t_test(a, x), ValidationError);
}

TEST_CASE("Poisson second moment of the scattering intensity") {
    CHECK(poisson_si_second_moment(1.0 / std::numbers::pi, Window::box({40.0, 40.0})) ==
          doctest::Approx(2.0 + std::numbers::pi / 1600.0));
    CHECK_THROWS_AS(poisson_si_second_moment(1.0, Window::ball(2, 1.0)), ValidationError);
}
