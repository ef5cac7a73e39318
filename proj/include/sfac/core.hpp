#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sfac {

/// Observation window centered at the origin: a box with side lengths L or a
/// ball of radius R.
class Window {
public:
    static Window box(std::vector<double> lengths);
    static Window ball(int dim, double radius);

    bool is_box() const { return kind_ == Kind::Box; }
    bool is_ball() const { return kind_ == Kind::Ball; }
    int dim() const { return dim_; }

    /// Side lengths; throws for balls.
    const std::vector<double>& lengths() const;
    /// Radius; throws for boxes.
    double radius() const;

    double volume() const;
    double max_length() const;
    double min_length() const;

    /// Closed containment of a point.
    bool contains(std::span<const double> x) const;
    /// True when `inner` lies inside this window.
    bool contains(const Window& inner) const;

    std::string describe() const;

    friend bool operator==(const Window& a, const Window& b) = default;

private:
    enum class Kind { Box, Ball };
    Kind kind_ = Kind::Box;
    int dim_ = 0;
    std::vector<double> lengths_;
    double radius_ = 0.0;
};

/// Points observed in a window. Coordinates are stored row-major, one point
/// per `dim()` consecutive entries.
class PointPattern {
public:
    /// Validates dimensions, containment and (optionally) pairwise distinctness.
    PointPattern(Window window, std::vector<double> coords,
                 std::optional<double> intensity = std::nullopt, bool check_distinct = true);

    std::size_t size() const { return coords_.size() / static_cast<std::size_t>(window_.dim()); }
    bool empty() const { return coords_.empty(); }
    int dim() const { return window_.dim(); }
    std::span<const double> point(std::size_t i) const;
    const std::vector<double>& coords() const { return coords_; }
    const Window& window() const { return window_; }
    std::optional<double> intensity() const { return intensity_; }

private:
    Window window_;
    std::vector<double> coords_;
    std::optional<double> intensity_;
};

/// Declared intensity if present, else N/|W|.
double estimate_intensity(const PointPattern& p);

/// Points of `p` lying in `w`; `w` must be contained in `p.window()`.
PointPattern restrict_to_window(const PointPattern& p, const Window& w);

/// Wavevectors (row-major, optional) and their norms.
struct WaveGrid {
    int dim = 0;
    std::vector<double> wavevectors;
    std::vector<double> wavenumbers;

    std::size_t size() const { return wavenumbers.size(); }
    bool has_vectors() const { return !wavevectors.empty(); }
    std::span<const double> vector(std::size_t i) const;

    static WaveGrid from_wavevectors(int dim, std::vector<double> vectors);
    static WaveGrid from_wavenumbers(std::vector<double> ks);
};

/// Smallest wavenumber considered accessible in a box: pi / (sqrt(d) max L_j).
double min_accessible_wavenumber(const Window& box);

/// Minimal restricted allowed wavevector (2 pi / L_1, ..., 2 pi / L_d).
std::vector<double> min_restricted_wavevector(const Window& box);

/// Allowed wavevectors of a box with norm <= k_max, sorted by norm.
///
/// Restricted: every coordinate is 2 pi n_j / L_j with n_j != 0.
/// Unrestricted: at least one coordinate is quantized; the others take the
/// values +/- free_grid (default: 64 equispaced values in
/// (min_accessible_wavenumber, k_max]).
WaveGrid allowed_wavevectors(const Window& box, double k_max, bool restricted,
                             std::span<const double> free_grid = {});

/// First n positive zeros of J_{d/2} divided by R.
std::vector<double> allowed_wavenumbers_ball(const Window& ball, std::size_t n);

/// Allowed ball wavenumbers up to k_max.
std::vector<double> allowed_wavenumbers_ball_upto(const Window& ball, double k_max);

}  // namespace sfac
