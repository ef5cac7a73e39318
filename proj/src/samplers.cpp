#include "sfac/samplers.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sfac/error.hpp"
#include "sfac/rng.hpp"

namespace sfac {

namespace {

void uniform_point(const Window& w, Rng& rng, double* out) {
    const int d = w.dim();
    if (w.is_box()) {
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        for (int j = 0; j < d; ++j) out[j] = u(rng) * w.lengths()[static_cast<std::size_t>(j)];
        return;
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (int j = 0; j < d; ++j) {
            out[j] = gauss(rng);
            norm2 += out[j] * out[j];
        }
    } while (norm2 == 0.0);
    const double r = w.radius() * std::pow(u(rng), 1.0 / d) / std::sqrt(norm2);
    for (int j = 0; j < d; ++j) out[j] *= r;
}

std::vector<double> poisson_coords(const Window& w, double rho, Rng& rng) {
    std::poisson_distribution<long long> count(rho * w.volume());
    const auto n = static_cast<std::size_t>(count(rng));
    const auto d = static_cast<std::size_t>(w.dim());
    std::vector<double> coords(n * d);
    for (std::size_t i = 0; i < n; ++i) uniform_point(w, rng, coords.data() + i * d);
    return coords;
}

Window dilate(const Window& w, double margin) {
    if (w.is_ball()) return Window::ball(w.dim(), w.radius() + margin);
    std::vector<double> lengths = w.lengths();
    for (double& l : lengths) l += 2.0 * margin;
    return Window::box(std::move(lengths));
}

}  // namespace

PointPattern sample_poisson(const Window& w, double rho, std::uint64_t seed) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw ValidationError("Poisson intensity must be positive");
    }
    Rng rng = make_rng(seed);
    return PointPattern(w, poisson_coords(w, rho, rng), rho, false);
}

PointPattern sample_thomas(const Window& w, double rho_parent, double lambda, double sigma,
                           std::uint64_t seed) {
    if (!(rho_parent > 0.0) || !(lambda > 0.0) || !(sigma > 0.0)) {
        throw ValidationError("Thomas parameters rho_parent, lambda and sigma must be positive");
    }
    Rng rng = make_rng(seed);
    const Window parent_window = dilate(w, 6.0 * sigma);
    const std::vector<double> parents = poisson_coords(parent_window, rho_parent, rng);
    const auto d = static_cast<std::size_t>(w.dim());
    std::poisson_distribution<int> offspring(lambda);
    std::normal_distribution<double> gauss(0.0, sigma);
    std::vector<double> coords;
    std::vector<double> x(d);
    for (std::size_t p = 0; p < parents.size() / d; ++p) {
        const int m = offspring(rng);
        for (int c = 0; c < m; ++c) {
            for (std::size_t j = 0; j < d; ++j) x[j] = parents[p * d + j] + gauss(rng);
            if (w.contains(x)) coords.insert(coords.end(), x.begin(), x.end());
        }
    }
    return PointPattern(w, std::move(coords), rho_parent * lambda, false);
}

PointPattern thin(const PointPattern& p, double retain_prob, std::uint64_t seed) {
    if (!(retain_prob > 0.0 && retain_prob < 1.0)) {
        throw ValidationError("retention probability must lie in (0, 1)");
    }
    Rng rng = make_rng(seed);
    std::bernoulli_distribution keep(retain_prob);
    std::vector<double> coords;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (keep(rng)) {
            auto x = p.point(i);
            coords.insert(coords.end(), x.begin(), x.end());
        }
    }
    std::optional<double> rho;
    if (p.intensity()) rho = *p.intensity() * retain_prob;
    return PointPattern(p.window(), std::move(coords), rho, false);
}

std::size_t ginibre_matrix_size(double radius, const GinibreOptions& opts) {
    if (!(radius > 0.0)) throw ValidationError("Ginibre radius must be positive");
    const double s = radius / opts.margin;
    const auto n = static_cast<std::size_t>(std::ceil(s * s));
    if (n > opts.n_max) {
        throw ResourceError("Ginibre matrix size " + std::to_string(n) + " exceeds n_max = " +
                            std::to_string(opts.n_max));
    }
    return std::max<std::size_t>(n, 1);
}

std::vector<linalg::cplx> ginibre_eigenvalues(std::size_t n, std::uint64_t seed,
                                              linalg::EigenBackend backend) {
    // A Ginibre matrix is unitarily similar to a Hessenberg matrix with
    // standard complex normal entries on and above the diagonal and
    // subdiagonal entries sqrt(Gamma(n - j - 1, 1)).
    Rng rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    std::vector<linalg::cplx> h(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i <= j; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            h[i + j * n] = {re, im};
        }
        if (j + 1 < n) {
            std::gamma_distribution<double> g(static_cast<double>(n - j - 1), 1.0);
            h[(j + 1) + j * n] = std::sqrt(g(rng));
        }
    }
    return linalg::hessenberg_eigenvalues(std::move(h), static_cast<int>(n), backend);
}

PointPattern sample_ginibre(double radius, std::uint64_t seed, const GinibreOptions& opts) {
    const std::size_t n = ginibre_matrix_size(radius, opts);
    const auto eig = ginibre_eigenvalues(n, seed, opts.backend);
    const Window w = Window::ball(2, radius);
    std::vector<double> coords;
    for (const auto& z : eig) {
        if (std::norm(z) <= radius * radius) {
            coords.push_back(z.real());
            coords.push_back(z.imag());
        }
    }
    return PointPattern(w, std::move(coords), 1.0 / std::numbers::pi, false);
}

double circumradius(const Window& w) {
    if (w.is_ball()) return w.radius();
    double s = 0.0;
    for (double l : w.lengths()) s += 0.25 * l * l;
    return std::sqrt(s);
}

PointPattern sample_ginibre_on(const Window& w, std::uint64_t seed, const GinibreOptions& opts) {
    if (w.dim() != 2) throw ValidationError("Ginibre patterns are planar (d = 2)");
    const PointPattern disk = sample_ginibre(circumradius(w), seed, opts);
    return restrict_to_window(disk, w);
}

double ginibre_pcf(double r) { return 1.0 - std::exp(-r * r); }

double ginibre_structure_factor(double k) { return 1.0 - std::exp(-0.25 * k * k); }

double thomas_pcf(double r, double rho_parent, double sigma, int dim) {
    const double s2 = sigma * sigma;
    return 1.0 + std::exp(-r * r / (4.0 * s2)) / (rho_parent * std::pow(4.0 * std::numbers::pi * s2, 0.5 * dim));
}

double thomas_structure_factor(double k, double lambda, double sigma) {
    return 1.0 + lambda * std::exp(-k * k * sigma * sigma);
}

double thinned_structure_factor(double s, double retain_prob) { return retain_prob * s + 1.0 - retain_prob; }

}  // namespace sfac
