#include "sfac/tapers.hpp"

#include <cmath>
#include <numbers>

#include "sfac/error.hpp"
#include "sfac/specfun.hpp"

namespace sfac {

namespace {

using cplx = std::complex<double>;

void require_box(const Window& w, std::size_t dim) {
    if (!w.is_box()) {
        throw ValidationError("tapers are defined on box windows; use the isotropic estimators on balls");
    }
    if (dim != static_cast<std::size_t>(w.dim())) {
        throw ValidationError("taper argument dimension does not match the window");
    }
}

// int_{-L/2}^{L/2} exp(-i u x) dx
double box_ft_1d(double u, double length) {
    const double half = 0.5 * u * length;
    if (std::abs(half) < 1e-8) return length * (1.0 - half * half / 6.0);
    return std::sin(half) / (0.5 * u);
}

class IndicatorTaper final : public Taper {
public:
    double eval(std::span<const double> x, const Window& w) const override {
        require_box(w, x.size());
        return w.contains(x) ? 1.0 / std::sqrt(w.volume()) : 0.0;
    }
    cplx ft(std::span<const double> k, const Window& w) const override {
        require_box(w, k.size());
        return specfun::ft_indicator_box(k, w.lengths()) / std::sqrt(w.volume());
    }
    std::string describe() const override { return "indicator"; }
};

class SineTaper final : public Taper {
public:
    explicit SineTaper(std::vector<int> p) : p_(std::move(p)) {}

    double eval(std::span<const double> x, const Window& w) const override {
        check(w, x.size());
        if (!w.contains(x)) return 0.0;
        double v = 1.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double l = w.lengths()[j];
            v *= std::sqrt(2.0 / l) * std::sin(std::numbers::pi * p_[j] * (x[j] + 0.5 * l) / l);
        }
        return v;
    }

    // Per coordinate, with a = pi p / L:
    //   (1 / 2i) [exp(iaL/2) B(k - a) - exp(-iaL/2) B(k + a)] sqrt(2 / L)
    // where B is the 1-d box transform; B(0) = L fills the removable
    // singularities at k = +-a.
    cplx ft(std::span<const double> k, const Window& w) const override {
        check(w, k.size());
        cplx out = 1.0;
        for (std::size_t j = 0; j < k.size(); ++j) {
            const double l = w.lengths()[j];
            const double a = std::numbers::pi * p_[j] / l;
            const cplx phase = std::polar(1.0, 0.5 * a * l);
            const cplx value = (phase * box_ft_1d(k[j] - a, l) - std::conj(phase) * box_ft_1d(k[j] + a, l)) /
                               cplx(0.0, 2.0);
            out *= std::sqrt(2.0 / l) * value;
        }
        return out;
    }

    std::string describe() const override {
        std::string s = "sine(";
        for (std::size_t j = 0; j < p_.size(); ++j) s += (j ? "," : "") + std::to_string(p_[j]);
        return s + ")";
    }

private:
    void check(const Window& w, std::size_t dim) const {
        require_box(w, dim);
        if (p_.size() != dim) throw ValidationError("sine taper index dimension does not match the window");
    }
    std::vector<int> p_;
};

}  // namespace

TaperPtr indicator_taper() { return std::make_shared<IndicatorTaper>(); }

TaperPtr sine_taper(std::vector<int> p) {
    if (p.empty()) throw ValidationError("sine taper needs a non-empty index");
    for (int v : p) {
        if (v < 1) throw ValidationError("sine taper indices must be >= 1");
    }
    return std::make_shared<SineTaper>(std::move(p));
}

std::vector<std::vector<int>> sine_taper_indices(std::size_t count, int dim) {
    if (count < 1) throw ValidationError("taper count must be >= 1");
    if (dim < 1) throw ValidationError("dimension must be >= 1");
    auto side = static_cast<int>(std::ceil(std::pow(static_cast<double>(count), 1.0 / dim) - 1e-12));
    side = std::max(side, 1);
    std::size_t total = 1;
    for (int j = 0; j < dim; ++j) total *= static_cast<std::size_t>(side);
    while (total < count) {  // guards rounding in the root
        ++side;
        total = 1;
        for (int j = 0; j < dim; ++j) total *= static_cast<std::size_t>(side);
    }
    std::vector<std::vector<int>> out;
    std::vector<int> idx(static_cast<std::size_t>(dim), 1);
    while (out.size() < count) {
        out.push_back(idx);
        for (int j = dim - 1; j >= 0; --j) {
            if (++idx[static_cast<std::size_t>(j)] <= side) break;
            idx[static_cast<std::size_t>(j)] = 1;
        }
    }
    return out;
}

std::vector<TaperPtr> sine_taper_family(std::size_t count, int dim) {
    std::vector<TaperPtr> out;
    for (auto& p : sine_taper_indices(count, dim)) out.push_back(sine_taper(std::move(p)));
    return out;
}

}  // namespace sfac
