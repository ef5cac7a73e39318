#include "sfac/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sfac/error.hpp"
#include "sfac/specfun.hpp"

namespace sfac::kernels {

namespace {

using cplx = std::complex<double>;

constexpr std::size_t kSumBlock = 64;
constexpr std::size_t kRowBlock = 32;

// Blocked pairwise summation: naive sums over blocks of kSumBlock terms,
// blocks combined as a binary counter.
class PairwiseSum {
public:
    void add(cplx v) {
        block_ += v;
        if (++in_block_ == kSumBlock) flush();
    }
    cplx total() {
        if (in_block_) flush();
        cplx s = 0.0;
        for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) s += it->first;
        return s;
    }

private:
    void flush() {
        cplx v = block_;
        std::size_t level = 0;
        while (!stack_.empty() && stack_.back().second == level) {
            v = stack_.back().first + v;
            stack_.pop_back();
            ++level;
        }
        stack_.emplace_back(v, level);
        block_ = 0.0;
        in_block_ = 0;
    }
    cplx block_ = 0.0;
    std::size_t in_block_ = 0;
    std::vector<std::pair<cplx, std::size_t>> stack_;
};

cplx exp_sum_one(std::span<const double> coords, std::span<const double> weights, std::size_t d,
                 const double* k) {
    const std::size_t n = coords.size() / d;
    PairwiseSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        double phase = 0.0;
        for (std::size_t j = 0; j < d; ++j) phase += k[j] * coords[i * d + j];
        const double w = weights.empty() ? 1.0 : weights[i];
        acc.add(cplx(w * std::cos(phase), -w * std::sin(phase)));
    }
    return acc.total();
}

// Combines per-block vectors pairwise in index order.
std::vector<double> tree_reduce(std::vector<std::vector<double>> parts, std::size_t width) {
    if (parts.empty()) return std::vector<double>(width, 0.0);
    for (std::size_t stride = 1; stride < parts.size(); stride *= 2) {
        for (std::size_t i = 0; i + stride < parts.size(); i += 2 * stride) {
            for (std::size_t m = 0; m < width; ++m) parts[i][m] += parts[i + stride][m];
        }
    }
    return std::move(parts[0]);
}

double distance(const double* a, const double* b, std::size_t d) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        const double t = a[j] - b[j];
        s += t * t;
    }
    return std::sqrt(s);
}

void check_coords(std::span<const double> coords, int dim) {
    if (dim < 1 || coords.size() % static_cast<std::size_t>(dim) != 0) {
        throw ValidationError("coordinate array does not match the dimension");
    }
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
    if (n < 1) throw ValidationError("thread count must be >= 1");
#ifdef _OPENMP
    omp_set_num_threads(n);
#endif
}

std::vector<cplx> exp_sums(std::span<const double> coords, std::span<const double> weights, int dim,
                           std::span<const double> wavevectors, Exec exec) {
    check_coords(coords, dim);
    check_coords(wavevectors, dim);
    const auto d = static_cast<std::size_t>(dim);
    if (!weights.empty() && weights.size() * d != coords.size()) {
        throw ValidationError("weight count does not match the number of points");
    }
    const std::size_t nk = wavevectors.size() / d;
    std::vector<cplx> out(nk);
    if (exec == Exec::Serial) {
        const std::size_t n = coords.size() / d;
        for (std::size_t m = 0; m < nk; ++m) {
            cplx s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double phase = 0.0;
                for (std::size_t j = 0; j < d; ++j) phase += wavevectors[m * d + j] * coords[i * d + j];
                s += (weights.empty() ? 1.0 : weights[i]) * std::exp(cplx(0.0, -phase));
            }
            out[m] = s;
        }
        return out;
    }
    const auto nk_signed = static_cast<long long>(nk);
#pragma omp parallel for schedule(dynamic, 4)
    for (long long m = 0; m < nk_signed; ++m) {
        const auto um = static_cast<std::size_t>(m);
        out[um] = exp_sum_one(coords, weights, d, wavevectors.data() + um * d);
    }
    return out;
}

double radial_kernel(int dim, double x) {
    switch (dim) {
        case 1:
            return std::sqrt(2.0 / std::numbers::pi) * std::cos(x);
        case 2:
            return specfun::bessel_j(0.0, x);
        case 3:
            return std::sqrt(2.0 / std::numbers::pi) * (x == 0.0 ? 1.0 : std::sin(x) / x);
        default: {
            const double nu = 0.5 * dim - 1.0;
            if (x == 0.0) return 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
            return specfun::bessel_j(nu, x) / std::pow(x, nu);
        }
    }
}

std::vector<double> pair_kernel_sums(std::span<const double> coords, int dim, std::span<const double> ks,
                                     Exec exec) {
    check_coords(coords, dim);
    const auto d = static_cast<std::size_t>(dim);
    const std::size_t n = coords.size() / d;
    const std::size_t nk = ks.size();
    if (exec == Exec::Serial) {
        std::vector<double> out(nk, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double r = distance(&coords[i * d], &coords[j * d], d);
                for (std::size_t m = 0; m < nk; ++m) out[m] += 2.0 * radial_kernel(dim, ks[m] * r);
            }
        }
        return out;
    }
    const std::size_t blocks = (n + kRowBlock - 1) / kRowBlock;
    std::vector<std::vector<double>> parts(blocks, std::vector<double>(nk, 0.0));
    const auto blocks_signed = static_cast<long long>(blocks);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long b = 0; b < blocks_signed; ++b) {
        auto& part = parts[static_cast<std::size_t>(b)];
        const std::size_t lo = static_cast<std::size_t>(b) * kRowBlock;
        const std::size_t hi = std::min(n, lo + kRowBlock);
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double r = distance(&coords[i * d], &coords[j * d], d);
                for (std::size_t m = 0; m < nk; ++m) part[m] += 2.0 * radial_kernel(dim, ks[m] * r);
            }
        }
    }
    return tree_reduce(std::move(parts), nk);
}

double translation_overlap(const Window& w, std::span<const double> z) {
    if (w.is_box()) {
        double v = 1.0;
        for (std::size_t j = 0; j < z.size(); ++j) v *= std::max(0.0, w.lengths()[j] - std::abs(z[j]));
        return v;
    }
    double s2 = 0.0;
    for (double t : z) s2 += t * t;
    const double s = std::sqrt(s2);
    const double r = w.radius();
    if (s >= 2.0 * r) return 0.0;
    if (w.dim() == 2) {
        return 2.0 * r * r * std::acos(s / (2.0 * r)) - 0.5 * s * std::sqrt(4.0 * r * r - s2);
    }
    const double x = 1.0 - s2 / (4.0 * r * r);
    return w.volume() * specfun::regularized_incomplete_beta(0.5 * (w.dim() + 1), 0.5, x);
}

double epanechnikov(double u, double b) {
    const double t = u / b;
    if (std::abs(t) >= 1.0) return 0.0;
    return 0.75 / b * (1.0 - t * t);
}

std::vector<double> pcf_pair_sums(std::span<const double> coords, const Window& w,
                                  std::span<const double> r_grid, double bandwidth, Exec exec) {
    const int dim = w.dim();
    check_coords(coords, dim);
    if (!(bandwidth > 0.0)) throw ValidationError("bandwidth must be positive");
    if (!std::is_sorted(r_grid.begin(), r_grid.end())) throw ValidationError("r grid must be increasing");
    const auto d = static_cast<std::size_t>(dim);
    const std::size_t n = coords.size() / d;
    const std::size_t nr = r_grid.size();
    if (nr == 0) return {};
    const double reach = r_grid.back() + bandwidth;

    auto accumulate_row = [&](std::size_t i, std::vector<double>& part) {
        std::vector<double> z(d);
        for (std::size_t j = i + 1; j < n; ++j) {
            bool far = false;
            for (std::size_t c = 0; c < d; ++c) {
                z[c] = coords[i * d + c] - coords[j * d + c];
                if (std::abs(z[c]) > reach) far = true;
            }
            if (far) continue;
            const double r = distance(&coords[i * d], &coords[j * d], d);
            if (r >= reach) continue;
            const double overlap = translation_overlap(w, z);
            if (!(overlap > 0.0)) continue;
            auto first = std::lower_bound(r_grid.begin(), r_grid.end(), r - bandwidth);
            for (auto it = first; it != r_grid.end() && *it < r + bandwidth; ++it) {
                part[static_cast<std::size_t>(it - r_grid.begin())] += 2.0 * epanechnikov(*it - r, bandwidth) / overlap;
            }
        }
    };

    if (exec == Exec::Serial) {
        std::vector<double> out(nr, 0.0);
        for (std::size_t i = 0; i < n; ++i) accumulate_row(i, out);
        return out;
    }
    const std::size_t blocks = (n + kRowBlock - 1) / kRowBlock;
    std::vector<std::vector<double>> parts(blocks, std::vector<double>(nr, 0.0));
    const auto blocks_signed = static_cast<long long>(blocks);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long b = 0; b < blocks_signed; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kRowBlock;
        const std::size_t hi = std::min(n, lo + kRowBlock);
        for (std::size_t i = lo; i < hi; ++i) accumulate_row(i, parts[static_cast<std::size_t>(b)]);
    }
    return tree_reduce(std::move(parts), nr);
}

}  // namespace sfac::kernels
