#include "sfac/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "sfac/error.hpp"
#include "sfac/specfun.hpp"

namespace sfac {

Window Window::box(std::vector<double> lengths) {
    if (lengths.empty()) {
        throw ValidationError("box window needs at least one side length");
    }
    for (double l : lengths) {
        if (!(l > 0.0) || !std::isfinite(l)) {
            throw ValidationError("box side lengths must be positive and finite");
        }
    }
    Window w;
    w.kind_ = Kind::Box;
    w.dim_ = static_cast<int>(lengths.size());
    w.lengths_ = std::move(lengths);
    return w;
}

Window Window::ball(int dim, double radius) {
    if (dim < 1) {
        throw ValidationError("ball window dimension must be >= 1");
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ValidationError("ball radius must be positive and finite");
    }
    Window w;
    w.kind_ = Kind::Ball;
    w.dim_ = dim;
    w.radius_ = radius;
    return w;
}

const std::vector<double>& Window::lengths() const {
    if (!is_box()) throw ValidationError("window is not a box");
    return lengths_;
}

double Window::radius() const {
    if (!is_ball()) throw ValidationError("window is not a ball");
    return radius_;
}

double Window::volume() const {
    if (is_ball()) return specfun::ball_volume(dim_, radius_);
    return std::accumulate(lengths_.begin(), lengths_.end(), 1.0, std::multiplies<>());
}

double Window::max_length() const {
    if (is_ball()) return 2.0 * radius_;
    return *std::max_element(lengths_.begin(), lengths_.end());
}

double Window::min_length() const {
    if (is_ball()) return 2.0 * radius_;
    return *std::min_element(lengths_.begin(), lengths_.end());
}

bool Window::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) return false;
    if (is_box()) {
        for (int j = 0; j < dim_; ++j) {
            if (!(std::abs(x[j]) <= 0.5 * lengths_[j])) return false;
        }
        return true;
    }
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return r2 <= radius_ * radius_;
}

bool Window::contains(const Window& inner) const {
    if (inner.dim_ != dim_) return false;
    if (is_box() && inner.is_box()) {
        for (int j = 0; j < dim_; ++j) {
            if (inner.lengths_[j] > lengths_[j]) return false;
        }
        return true;
    }
    if (is_ball() && inner.is_ball()) return inner.radius_ <= radius_;
    if (is_box()) return 2.0 * inner.radius_ <= min_length();
    double half_diag2 = 0.0;
    for (double l : inner.lengths_) half_diag2 += 0.25 * l * l;
    return std::sqrt(half_diag2) <= radius_;
}

std::string Window::describe() const {
    std::ostringstream os;
    os.precision(17);
    if (is_ball()) {
        os << "Ball(d=" << dim_ << ", R=" << radius_ << ")";
    } else {
        os << "Box(";
        for (int j = 0; j < dim_; ++j) os << (j ? ", " : "") << lengths_[j];
        os << ")";
    }
    return os.str();
}

PointPattern::PointPattern(Window window, std::vector<double> coords,
                           std::optional<double> intensity, bool check_distinct)
    : window_(std::move(window)), coords_(std::move(coords)), intensity_(intensity) {
    const auto d = static_cast<std::size_t>(window_.dim());
    if (coords_.size() % d != 0) {
        throw ValidationError("coordinate count is not a multiple of the window dimension");
    }
    if (intensity_ && !(*intensity_ > 0.0 && std::isfinite(*intensity_))) {
        throw ValidationError("declared intensity must be positive and finite");
    }
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!window_.contains(point(i))) {
            throw ValidationError("point " + std::to_string(i) + " lies outside the window " +
                                  window_.describe());
        }
    }
    if (check_distinct && n > 1) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        auto less = [&](std::size_t a, std::size_t b) {
            return std::lexicographical_compare(coords_.begin() + a * d, coords_.begin() + (a + 1) * d,
                                                coords_.begin() + b * d, coords_.begin() + (b + 1) * d);
        };
        std::sort(order.begin(), order.end(), less);
        for (std::size_t i = 1; i < n; ++i) {
            if (std::equal(coords_.begin() + order[i - 1] * d, coords_.begin() + (order[i - 1] + 1) * d,
                           coords_.begin() + order[i] * d)) {
                throw ValidationError("points " + std::to_string(order[i - 1]) + " and " +
                                      std::to_string(order[i]) + " coincide (pattern must be simple)");
            }
        }
    }
}

std::span<const double> PointPattern::point(std::size_t i) const {
    const auto d = static_cast<std::size_t>(window_.dim());
    return {coords_.data() + i * d, d};
}

double estimate_intensity(const PointPattern& p) {
    if (p.intensity()) return *p.intensity();
    if (p.empty()) {
        throw ValidationError("cannot infer intensity from an empty pattern");
    }
    return static_cast<double>(p.size()) / p.window().volume();
}

PointPattern restrict_to_window(const PointPattern& p, const Window& w) {
    if (!p.window().contains(w)) {
        throw ValidationError("restriction window " + w.describe() + " is not contained in " +
                              p.window().describe());
    }
    std::vector<double> kept;
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto x = p.point(i);
        if (w.contains(x)) kept.insert(kept.end(), x.begin(), x.end());
    }
    return PointPattern(w, std::move(kept), p.intensity(), false);
}

std::span<const double> WaveGrid::vector(std::size_t i) const {
    const auto d = static_cast<std::size_t>(dim);
    return {wavevectors.data() + i * d, d};
}

WaveGrid WaveGrid::from_wavevectors(int dim, std::vector<double> vectors) {
    if (dim < 1 || vectors.size() % static_cast<std::size_t>(dim) != 0) {
        throw ValidationError("wavevector array does not match the dimension");
    }
    WaveGrid g;
    g.dim = dim;
    g.wavevectors = std::move(vectors);
    const std::size_t n = g.wavevectors.size() / static_cast<std::size_t>(dim);
    g.wavenumbers.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (double v : g.vector(i)) s += v * v;
        if (s == 0.0) throw ValidationError("the zero wavevector is not allowed");
        g.wavenumbers[i] = std::sqrt(s);
    }
    return g;
}

WaveGrid WaveGrid::from_wavenumbers(std::vector<double> ks) {
    for (double k : ks) {
        if (!(k > 0.0) || !std::isfinite(k)) {
            throw ValidationError("wavenumbers must be positive and finite");
        }
    }
    WaveGrid g;
    g.wavenumbers = std::move(ks);
    return g;
}

double min_accessible_wavenumber(const Window& box) {
    return std::numbers::pi / (std::sqrt(static_cast<double>(box.dim())) * box.max_length());
}

std::vector<double> min_restricted_wavevector(const Window& box) {
    std::vector<double> k;
    for (double l : box.lengths()) k.push_back(2.0 * std::numbers::pi / l);
    return k;
}

WaveGrid allowed_wavevectors(const Window& box, double k_max, bool restricted,
                             std::span<const double> free_grid) {
    if (!box.is_box()) {
        throw ValidationError("allowed wavevectors are defined for box windows");
    }
    if (!(k_max > 0.0) || !std::isfinite(k_max)) {
        throw ValidationError("k_max must be positive and finite");
    }
    const int d = box.dim();
    const double k_floor = min_accessible_wavenumber(box);

    // candidate values per coordinate: quantized (flag true) and free values
    std::vector<std::vector<std::pair<double, bool>>> choices(static_cast<std::size_t>(d));
    std::vector<double> free_values;
    if (!restricted) {
        if (free_grid.empty()) {
            constexpr int kFree = 64;
            for (int i = 1; i <= kFree; ++i) {
                free_values.push_back(k_floor + (k_max - k_floor) * i / kFree);
            }
        } else {
            free_values.assign(free_grid.begin(), free_grid.end());
        }
    }
    for (int j = 0; j < d; ++j) {
        const double step = 2.0 * std::numbers::pi / box.lengths()[static_cast<std::size_t>(j)];
        const auto n_max = static_cast<long>(std::floor(k_max / step));
        for (long n = -n_max; n <= n_max; ++n) {
            if (n != 0) choices[static_cast<std::size_t>(j)].emplace_back(step * static_cast<double>(n), true);
        }
        for (double v : free_values) {
            if (v > 0.0 && v <= k_max) {
                choices[static_cast<std::size_t>(j)].emplace_back(v, false);
                choices[static_cast<std::size_t>(j)].emplace_back(-v, false);
            }
        }
    }

    std::set<std::vector<double>> unique;
    std::vector<double> current(static_cast<std::size_t>(d));
    std::function<void(int, double, bool)> recurse = [&](int j, double norm2, bool any_quantized) {
        if (norm2 > k_max * k_max) return;
        if (j == d) {
            if (!any_quantized) return;
            const double k = std::sqrt(norm2);
            if (k > k_floor && k <= k_max) unique.insert(current);
            return;
        }
        for (const auto& [v, quantized] : choices[static_cast<std::size_t>(j)]) {
            current[static_cast<std::size_t>(j)] = v;
            recurse(j + 1, norm2 + v * v, any_quantized || quantized);
        }
    };
    recurse(0, 0.0, false);
    if (unique.empty()) {
        throw ValidationError("no allowed wavevector with norm in (" + std::to_string(k_floor) + ", " +
                              std::to_string(k_max) + "]");
    }

    std::vector<std::vector<double>> sorted(unique.begin(), unique.end());
    auto norm2 = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return s;
    };
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](const auto& a, const auto& b) { return norm2(a) < norm2(b); });
    std::vector<double> flat;
    flat.reserve(sorted.size() * static_cast<std::size_t>(d));
    for (const auto& v : sorted) flat.insert(flat.end(), v.begin(), v.end());
    return WaveGrid::from_wavevectors(d, std::move(flat));
}

std::vector<double> allowed_wavenumbers_ball(const Window& ball, std::size_t n) {
    if (!ball.is_ball()) {
        throw ValidationError("allowed wavenumbers are defined for ball windows");
    }
    auto table = specfun::bessel_j_zeros(0.5 * ball.dim(), n);
    for (double& z : table.zeros) z /= ball.radius();
    return table.zeros;
}

std::vector<double> allowed_wavenumbers_ball_upto(const Window& ball, double k_max) {
    if (!ball.is_ball()) {
        throw ValidationError("allowed wavenumbers are defined for ball windows");
    }
    // zeros of J_{d/2} are spaced by about pi, the first one exceeding d/2
    const double span = k_max * ball.radius();
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(span / std::numbers::pi) + 2.0));
    auto ks = allowed_wavenumbers_ball(ball, n);
    std::vector<double> out;
    for (double k : ks) {
        if (k <= k_max) out.push_back(k);
    }
    return out;
}

}  // namespace sfac
