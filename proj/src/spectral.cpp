#include "sfac/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "sfac/error.hpp"
#include "sfac/keyvalue.hpp"

namespace sfac {

namespace {

void require_vectors(const PointPattern& p, const WaveGrid& grid) {
    if (!grid.has_vectors()) throw ValidationError("this estimator needs wavevectors, not bare wavenumbers");
    if (grid.dim != p.dim()) throw ValidationError("wavevector dimension does not match the pattern");
}

SpectralEstimate skeleton(const PointPattern& p, const WaveGrid& grid, const std::string& name, double rho) {
    SpectralEstimate e;
    e.dim = grid.dim;
    e.wavevectors = grid.wavevectors;
    e.wavenumbers = grid.wavenumbers;
    e.metadata["estimator"] = name;
    e.metadata["window"] = p.window().describe();
    e.metadata["intensity"] = format_double(rho);
    e.metadata["intensity.source"] = p.intensity() ? "declared" : "estimated";
    e.metadata["points"] = std::to_string(p.size());
    return e;
}

}  // namespace

std::string to_string(Debias d) {
    switch (d) {
        case Debias::None: return "none";
        case Debias::Direct: return "direct";
        case Debias::Undirect: return "undirect";
    }
    return "none";
}

Debias parse_debias(const std::string& s) {
    if (s == "none") return Debias::None;
    if (s == "direct") return Debias::Direct;
    if (s == "undirect") return Debias::Undirect;
    throw ValidationError("debias must be none, direct or undirect, got '" + s + "'");
}

SpectralEstimate scattering_intensity(const PointPattern& p, const WaveGrid& grid, bool self_normalized,
                                      kernels::Exec exec) {
    require_vectors(p, grid);
    if (p.empty()) throw ValidationError("scattering intensity needs at least one point");
    const double rho = estimate_intensity(p);
    SpectralEstimate e = skeleton(p, grid, self_normalized ? "si_self_normalized" : "si", rho);
    const double denom = self_normalized ? static_cast<double>(p.size()) : rho * p.window().volume();
    const auto sums = kernels::exp_sums(p.coords(), {}, p.dim(), grid.wavevectors, exec);
    e.values.resize(sums.size());
    for (std::size_t m = 0; m < sums.size(); ++m) e.values[m] = std::norm(sums[m]) / denom;
    return e;
}

SpectralEstimate tapered(const PointPattern& p, const WaveGrid& grid, const Taper& t, Debias debias,
                         kernels::Exec exec) {
    require_vectors(p, grid);
    const Window& w = p.window();
    if (!w.is_box()) throw ValidationError("tapered estimators need a box window");
    const double rho = estimate_intensity(p);
    SpectralEstimate e = skeleton(p, grid, "tapered", rho);
    e.metadata["taper"] = t.describe();
    e.metadata["debias"] = to_string(debias);

    std::vector<double> weights(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) weights[i] = t.eval(p.point(i), w);
    std::vector<std::complex<double>> sums;
    if (p.empty()) {
        sums.assign(grid.size(), 0.0);
    } else {
        sums = kernels::exp_sums(p.coords(), weights, p.dim(), grid.wavevectors, exec);
    }
    e.values.resize(grid.size());
    for (std::size_t m = 0; m < grid.size(); ++m) {
        if (debias == Debias::None) {
            e.values[m] = std::norm(sums[m]) / rho;
            continue;
        }
        const std::complex<double> ft = t.ft(grid.vector(m), w);
        if (debias == Debias::Direct) {
            e.values[m] = std::norm(sums[m] - rho * ft) / rho;
        } else {
            e.values[m] = std::norm(sums[m]) / rho - rho * std::norm(ft);
        }
    }
    return e;
}

SpectralEstimate multitaper(const PointPattern& p, const WaveGrid& grid, std::span<const TaperPtr> tapers,
                            Debias debias, kernels::Exec exec) {
    if (tapers.empty()) throw ValidationError("multitaper needs at least one taper");
    SpectralEstimate out;
    std::string names;
    for (std::size_t q = 0; q < tapers.size(); ++q) {
        SpectralEstimate e = tapered(p, grid, *tapers[q], debias, exec);
        names += (q ? ";" : "") + tapers[q]->describe();
        if (q == 0) {
            out = std::move(e);
        } else {
            for (std::size_t m = 0; m < out.values.size(); ++m) out.values[m] += e.values[m];
        }
    }
    for (double& v : out.values) v /= static_cast<double>(tapers.size());
    out.metadata["estimator"] = "multitaper";
    out.metadata["taper"] = names;
    out.metadata["tapers"] = std::to_string(tapers.size());
    return out;
}

SpectralEstimate bin_by_wavenumber(const SpectralEstimate& e, std::size_t n_bins) {
    if (n_bins < 1) throw ValidationError("bin count must be >= 1");
    if (e.values.empty() || e.values.size() != e.wavenumbers.size()) {
        throw ValidationError("binning needs raw values paired with wavenumbers");
    }
    const auto [lo_it, hi_it] = std::minmax_element(e.wavenumbers.begin(), e.wavenumbers.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    const double width = (hi > lo) ? (hi - lo) / static_cast<double>(n_bins) : 1.0;
    std::vector<std::vector<double>> members(n_bins);
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        auto b = static_cast<std::size_t>((e.wavenumbers[i] - lo) / width);
        members[std::min(b, n_bins - 1)].push_back(e.values[i]);
    }
    SpectralEstimate out = e;
    out.bins.clear();
    for (std::size_t b = 0; b < n_bins; ++b) {
        const auto& v = members[b];
        if (v.empty()) continue;
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        const double n = static_cast<double>(v.size());
        const double sem = v.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
        const double center = (hi > lo) ? lo + (static_cast<double>(b) + 0.5) * width : lo;
        out.bins.push_back(Bin{center, mean, sem, v.size()});
    }
    out.metadata["bins"] = std::to_string(n_bins);
    return out;
}

}  // namespace sfac
