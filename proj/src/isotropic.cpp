#include "sfac/isotropic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "sfac/error.hpp"
#include "sfac/keyvalue.hpp"
#include "sfac/specfun.hpp"

namespace sfac {

namespace {

constexpr double kPi = std::numbers::pi;

double two_pi_pow_half_d(int dim) { return std::pow(2.0 * kPi, 0.5 * dim); }

}  // namespace

SpectralEstimate bartlett_isotropic(const PointPattern& p, std::span<const double> ks, bool self_normalized,
                                    kernels::Exec exec) {
    const Window& w = p.window();
    if (!w.is_ball()) {
        throw ValidationError("Bartlett's isotropic estimator needs a ball window; "
                              "use the scattering intensity or tapered estimators on boxes");
    }
    for (double k : ks) {
        if (!(k > 0.0)) throw ValidationError("wavenumbers must be positive");
    }
    const int d = p.dim();
    const double rho = estimate_intensity(p);
    SpectralEstimate e;
    e.dim = d;
    e.wavenumbers.assign(ks.begin(), ks.end());
    e.metadata["estimator"] = self_normalized ? "bartlett_self_normalized" : "bartlett";
    e.metadata["window"] = w.describe();
    e.metadata["intensity"] = format_double(rho);
    e.metadata["intensity.source"] = p.intensity() ? "declared" : "estimated";
    e.metadata["points"] = std::to_string(p.size());

    const double omega = specfun::unit_sphere_area(d);
    const double denom = self_normalized ? static_cast<double>(p.size()) * omega : rho * w.volume() * omega;
    const double scale = two_pi_pow_half_d(d) / denom;
    e.values.assign(ks.size(), 1.0);
    if (p.size() < 2) return e;
    const auto sums = kernels::pair_kernel_sums(p.coords(), d, ks, exec);
    for (std::size_t m = 0; m < ks.size(); ++m) e.values[m] = 1.0 + scale * sums[m];
    return e;
}

double default_pcf_rmax(const Window& w) {
    if (w.is_ball()) return 0.5 * w.radius();
    return 0.25 * w.min_length();
}

double stoyan_bandwidth(double rho, double constant) { return constant / std::sqrt(rho); }

PcfEstimate estimate_pcf_kernel(const PointPattern& p, std::span<const double> r_grid,
                                std::optional<double> bandwidth, kernels::Exec exec) {
    if (p.size() < 2) throw ValidationError("pcf estimation needs at least two points");
    const Window& w = p.window();
    const double rho = estimate_intensity(p);
    const double b = bandwidth ? *bandwidth : stoyan_bandwidth(rho);
    if (!(b > 0.0)) throw ValidationError("bandwidth must be positive");

    std::vector<double> radii;
    if (r_grid.empty()) {
        const double r_max = default_pcf_rmax(w);
        constexpr int kDefaultNodes = 256;
        for (int i = 1; i <= kDefaultNodes; ++i) radii.push_back(r_max * i / kDefaultNodes);
    } else {
        radii.assign(r_grid.begin(), r_grid.end());
    }
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
            throw ValidationError("pcf radii must be positive and strictly increasing");
        }
    }
    const double extent = w.is_ball() ? 2.0 * w.radius() : w.min_length();
    if (radii.back() + b >= extent) {
        throw ValidationError("pcf radius plus bandwidth reaches the window extent; window overlap degenerates");
    }

    const auto sums = kernels::pcf_pair_sums(p.coords(), w, radii, b, exec);
    const double sphere = specfun::unit_sphere_area(p.dim());
    PcfEstimate e;
    e.radii = radii;
    e.r_max = radii.back();
    e.bandwidth = b;
    e.values.resize(radii.size());
    e.unreliable.resize(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        e.values[i] = sums[i] / (rho * rho * sphere * std::pow(r, p.dim() - 1));
        e.unreliable[i] = r < 0.5 * b;
    }
    return e;
}

PcfEstimate clean_pcf(const PcfEstimate& e) {
    PcfEstimate out;
    out.r_max = e.r_max;
    out.bandwidth = e.bandwidth;
    out.method = e.method;
    for (std::size_t i = 0; i < e.radii.size(); ++i) {
        const bool bad = (i < e.unreliable.size() && e.unreliable[i]) || !std::isfinite(e.values[i]);
        if (bad) continue;
        out.radii.push_back(e.radii[i]);
        out.values.push_back(std::max(0.0, e.values[i]));
        out.unreliable.push_back(false);
    }
    return out;
}

PcfInterpolator::PcfInterpolator(const PcfEstimate& e) : r_max_(e.r_max) {
    const PcfEstimate c = clean_pcf(e);
    if (c.radii.size() < 2) throw ValidationError("pcf interpolation needs at least two clean nodes");
    r_ = c.radii;
    g_ = c.values;
}

double PcfInterpolator::operator()(double r) const {
    if (r > r_max_) return 1.0;
    if (r <= r_.front()) return g_.front();
    if (r >= r_.back()) return g_.back();
    const auto it = std::upper_bound(r_.begin(), r_.end(), r);
    const auto i = static_cast<std::size_t>(it - r_.begin());
    const double t = (r - r_[i - 1]) / (r_[i] - r_[i - 1]);
    return g_[i - 1] + t * (g_[i] - g_[i - 1]);
}

namespace {

struct OgataNodes {
    std::vector<double> x;        // (pi / h) psi(h xi_j)
    std::vector<double> factor;   // w_j J_nu(x_j) psi'(h xi_j)
};

double psi(double t) { return t * std::tanh(0.5 * kPi * std::sinh(t)); }

double psi_prime(double t) {
    const double u = 0.5 * kPi * std::sinh(t);
    double sech2 = 0.0;
    if (std::abs(u) < 350.0) {
        const double c = std::cosh(u);
        sech2 = 1.0 / (c * c);
    }
    return std::tanh(u) + t * 0.5 * kPi * std::cosh(t) * sech2;
}

std::shared_ptr<const OgataNodes> ogata_nodes(double nu, double h, std::size_t n) {
    static std::mutex mutex;
    static std::map<std::tuple<double, double, std::size_t>, std::shared_ptr<const OgataNodes>> cache;
    const auto key = std::make_tuple(nu, h, n);
    {
        std::lock_guard lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    const auto zeros = specfun::bessel_j_zeros(nu, n).zeros;
    auto nodes = std::make_shared<OgataNodes>();
    for (double z : zeros) {
        const double xi = z / kPi;
        const double x = kPi / h * psi(h * xi);
        const double weight = specfun::bessel_y(nu, z) / specfun::bessel_j(nu + 1.0, z);
        nodes->x.push_back(x);
        nodes->factor.push_back(weight * specfun::bessel_j(nu, x) * psi_prime(h * xi));
    }
    std::lock_guard lock(mutex);
    cache.emplace(key, nodes);
    return nodes;
}

}  // namespace

double ogata_k_min(int dim, std::size_t n_nodes, double r_max) {
    return specfun::bessel_j_zeros(0.5 * dim - 1.0, n_nodes).zeros.back() / r_max;
}

SpectralEstimate hankel_ogata(const RadialFunction& g, double rho, int dim, std::span<const double> ks,
                              const OgataParams& params) {
    if (!(params.h > 0.0) || params.n_nodes < 1) {
        throw ValidationError("Ogata step h must be positive and the node count >= 1");
    }
    if (!(rho > 0.0)) throw ValidationError("intensity must be positive");
    if (dim < 1) throw ValidationError("dimension must be >= 1");
    const double nu = 0.5 * dim - 1.0;
    const double half_d = 0.5 * dim;
    const auto nodes = ogata_nodes(nu, params.h, params.n_nodes);

    SpectralEstimate e;
    e.dim = dim;
    e.wavenumbers.assign(ks.begin(), ks.end());
    e.values.resize(ks.size());
    e.metadata["estimator"] = "hankel_ogata";
    e.metadata["ogata.h"] = format_double(params.h);
    e.metadata["ogata.nodes"] = std::to_string(params.n_nodes);
    e.metadata["intensity"] = format_double(rho);
    std::size_t below = 0;
    double k_min = 0.0;
    if (params.r_max) {
        k_min = ogata_k_min(dim, params.n_nodes, *params.r_max);
        e.metadata["ogata.k_min"] = format_double(k_min);
    }
    const double prefactor = rho * two_pi_pow_half_d(dim) * kPi;
    for (std::size_t m = 0; m < ks.size(); ++m) {
        const double k = ks[m];
        if (!(k > 0.0)) throw ValidationError("wavenumbers must be positive");
        if (params.r_max && k < k_min) ++below;
        const double kscale = 1.0 / std::pow(k, half_d + 1.0);
        double sum = 0.0;
        for (std::size_t j = 0; j < nodes->x.size(); ++j) {
            const double x = nodes->x[j];
            const double h_tilde = std::pow(x, half_d) * kscale * (g(x / k) - 1.0);
            sum += nodes->factor[j] * h_tilde;
        }
        e.values[m] = 1.0 + prefactor * sum / std::pow(k, nu);
    }
    if (below > 0) {
        e.metadata["warning"] = std::to_string(below) + " wavenumber(s) below k_min = " + format_double(k_min);
    }
    return e;
}

DhtGrid make_dht_grid(int dim, double r_max, std::size_t n) {
    if (dim < 1) throw ValidationError("dimension must be >= 1");
    if (!(r_max > 0.0)) throw ValidationError("r_max must be positive");
    if (n < 2) throw ValidationError("DHT needs N >= 2");
    DhtGrid grid;
    grid.order = 0.5 * dim - 1.0;
    grid.r_max = r_max;
    grid.n = n;
    grid.zeros = specfun::bessel_j_zeros(grid.order, n).zeros;
    const double eta_n = grid.zeros.back();
    for (std::size_t j = 0; j + 1 < n; ++j) {
        grid.r_nodes.push_back(grid.zeros[j] * r_max / eta_n);
        grid.k_nodes.push_back(grid.zeros[j] / r_max);
    }
    grid.k_max = eta_n / r_max;
    return grid;
}

SpectralEstimate hankel_dht(const RadialFunction& g, double rho, int dim, const DhtGrid& grid) {
    if (!(rho > 0.0)) throw ValidationError("intensity must be positive");
    const double nu = 0.5 * dim - 1.0;
    if (grid.order != nu || grid.zeros.size() != grid.n || grid.r_nodes.size() + 1 != grid.n) {
        throw ValidationError("DHT grid does not match the dimension");
    }
    const std::size_t n1 = grid.n - 1;
    const double eta_n = grid.zeros.back();
    std::vector<double> weighted(n1);
    for (std::size_t j = 0; j < n1; ++j) {
        const double r = grid.r_nodes[j];
        const double jn1 = specfun::bessel_j(nu + 1.0, grid.zeros[j]);
        weighted[j] = 2.0 * std::pow(r, nu) * (g(r) - 1.0) / (eta_n * jn1 * jn1);
    }
    SpectralEstimate e;
    e.dim = dim;
    e.wavenumbers = grid.k_nodes;
    e.values.resize(n1);
    e.metadata["estimator"] = "hankel_dht";
    e.metadata["dht.r_max"] = format_double(grid.r_max);
    e.metadata["dht.n"] = std::to_string(grid.n);
    e.metadata["intensity"] = format_double(rho);
    const double prefactor = rho * two_pi_pow_half_d(dim) * grid.r_max * grid.r_max / eta_n;
    const auto n1_signed = static_cast<long long>(n1);
#pragma omp parallel for schedule(static)
    for (long long mm = 0; mm < n1_signed; ++mm) {
        const auto m = static_cast<std::size_t>(mm);
        double sum = 0.0;
        for (std::size_t j = 0; j < n1; ++j) {
            sum += specfun::bessel_j(nu, grid.zeros[m] * grid.zeros[j] / eta_n) * weighted[j];
        }
        e.values[m] = 1.0 + prefactor * sum / std::pow(grid.k_nodes[m], nu);
    }
    return e;
}

}  // namespace sfac
