#include "sfac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "sfac/error.hpp"
#include "sfac/isotropic.hpp"
#include "sfac/keyvalue.hpp"
#include "sfac/rng.hpp"
#include "sfac/specfun.hpp"

namespace sfac {

namespace {

struct LineFit {
    double intercept;
    double slope;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw ValidationError("least-squares fit needs at least two distinct abscissae");
    const double slope = sxy / sxx;
    return {my - slope * mx, slope};
}

// Values averaged per distinct wavenumber, sorted by wavenumber.
std::pair<std::vector<double>, std::vector<double>> per_wavenumber(const SpectralEstimate& e) {
    if (e.values.size() != e.wavenumbers.size()) {
        throw ValidationError("estimate values and wavenumbers differ in length");
    }
    std::map<double, std::pair<double, std::size_t>> acc;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        auto& slot = acc[e.wavenumbers[i]];
        slot.first += e.values[i];
        ++slot.second;
    }
    std::vector<double> k;
    std::vector<double> s;
    for (const auto& [kk, v] : acc) {
        k.push_back(kk);
        s.push_back(v.first / static_cast<double>(v.second));
    }
    return {k, s};
}

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v, double mean) {
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double poisson_pmf(double lambda, std::size_t i) {
    if (lambda == 0.0) return i == 0 ? 1.0 : 0.0;
    const double di = static_cast<double>(i);
    return std::exp(-lambda + di * std::log(lambda) - std::lgamma(di + 1.0));
}

// P(Poisson(lambda) >= i), summed upwards to avoid cancellation.
double poisson_upper_tail(double lambda, std::size_t i) {
    const auto stop = static_cast<std::size_t>(lambda + 40.0 * std::sqrt(lambda + 1.0) + 60.0);
    if (i == 0) return 1.0;
    if (static_cast<double>(i) <= lambda) {
        double below = 0.0;
        for (std::size_t m = 0; m < i; ++m) below += poisson_pmf(lambda, m);
        return 1.0 - below;
    }
    double s = 0.0;
    for (std::size_t m = i; m <= std::max(stop, i + 60); ++m) s += poisson_pmf(lambda, m);
    return s;
}

}  // namespace

HIndexReport h_index(const SpectralEstimate& e, double fit_k_max) {
    if (!(fit_k_max > 0.0)) throw ValidationError("fit_k_max must be positive");
    const auto [k, s] = per_wavenumber(e);
    std::vector<double> fx;
    std::vector<double> fy;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] < fit_k_max) {
            fx.push_back(k[i]);
            fy.push_back(s[i]);
        }
    }
    if (fx.size() < 2) {
        throw ValidationError("H-index needs at least two estimates with k < fit_k_max");
    }
    HIndexReport rep;
    rep.fit_k_max = fit_k_max;
    rep.fit_points = fx.size();
    rep.S0 = least_squares(fx, fy).intercept;
    for (std::size_t i = 1; i + 1 < k.size(); ++i) {
        if (!(s[i] > 1.0) || !(s[i] > s[i - 1])) continue;
        std::size_t j = i + 1;
        while (j < k.size() && s[j] == s[i]) ++j;
        if (j < k.size() && s[j] < s[i]) {
            rep.k_peak = k[i];
            rep.S_peak = s[i];
            break;
        }
    }
    rep.H = rep.S0 / rep.S_peak;
    rep.effectively_hyperuniform = rep.H < 1e-3;
    return rep;
}

double fit_alpha(const SpectralEstimate& e, double fit_k_max) {
    if (!(fit_k_max > 0.0)) throw ValidationError("fit_k_max must be positive");
    const auto [k, s] = per_wavenumber(e);
    std::vector<double> lx;
    std::vector<double> ly;
    std::string offending;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (!(k[i] > 0.0) || !(k[i] < fit_k_max)) continue;
        if (!(s[i] > 0.0)) {
            offending += (offending.empty() ? "" : ", ") + format_double(k[i]);
            continue;
        }
        lx.push_back(std::log(k[i]));
        ly.push_back(std::log(s[i]));
    }
    if (!offending.empty()) {
        throw ValidationError("nonpositive estimates in the fit range at k = " + offending);
    }
    if (lx.size() < 2) throw ValidationError("power-decay fit needs at least two points with k < fit_k_max");
    return least_squares(lx, ly).slope;
}

CoupledSumLaw::CoupledSumLaw(double lambda, std::size_t cap, bool truncated)
    : lambda_(lambda), cap_(cap), truncated_(truncated) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be positive");
    if (cap < 1) throw ValidationError("window schedule must contain at least one window");
    pmf_.resize(cap);
    for (std::size_t m = 1; m <= cap; ++m) pmf_[m - 1] = poisson_pmf(lambda, m - 1);
    tail_.assign(cap + 1, 0.0);
    if (truncated) {
        double mass = 0.0;
        for (std::size_t m = cap; m >= 1; --m) {
            mass += pmf_[m - 1];
            tail_[m - 1] = mass;
        }
        for (double& t : tail_) t /= mass;
    } else {
        for (std::size_t j = 1; j <= cap + 1; ++j) tail_[j - 1] = poisson_upper_tail(lambda, j - 1);
    }
}

double CoupledSumLaw::tail(std::size_t j) const {
    if (j < 1) throw ValidationError("tail index starts at 1");
    if (j > cap_ + 1) return truncated_ ? 0.0 : poisson_upper_tail(lambda_, j - 1);
    return tail_[j - 1];
}

double CoupledSumLaw::overflow_probability() const { return poisson_upper_tail(lambda_, cap_); }

std::size_t CoupledSumLaw::draw(std::uint64_t seed) const {
    Rng rng = make_rng(seed);
    if (!truncated_) {
        std::poisson_distribution<long long> poisson(lambda_);
        const auto m = static_cast<std::size_t>(poisson(rng)) + 1;
        if (m > cap_) {
            throw ResourceError("drawn M = " + std::to_string(m) + " exceeds the window schedule length " +
                                std::to_string(cap_));
        }
        return m;
    }
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double x = u(rng);
    // P(M <= m) = 1 - tail(m + 1)
    for (std::size_t m = 1; m < cap_; ++m) {
        if (x < 1.0 - tail_[m]) return m;
    }
    return cap_;
}

double coupled_sum(std::span<const double> y, std::span<const double> tail_probabilities) {
    if (y.size() != tail_probabilities.size()) throw ValidationError("Y and tail probabilities differ in length");
    double z = 0.0;
    double prev = 0.0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        z += (y[j] - prev) / tail_probabilities[j];
        prev = y[j];
    }
    return z;
}

double max_lambda_for_schedule(std::size_t cap, double tolerance) {
    if (cap < 1) throw ValidationError("window schedule must contain at least one window");
    double lo = 0.0;
    double hi = static_cast<double>(cap);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid > 0.0 && poisson_upper_tail(mid, cap) < tolerance) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (!(lo > 0.0)) throw ValidationError("no lambda satisfies the overflow rule for this schedule");
    return lo;
}

void check_overflow_rule(double lambda, std::size_t cap, double tolerance) {
    const double p = CoupledSumLaw(lambda, cap, false).overflow_probability();
    if (!(p < tolerance)) {
        throw ValidationError("lambda = " + format_double(lambda) + " gives P(M > " + std::to_string(cap) +
                              ") = " + format_double(p) + " >= " + format_double(tolerance) +
                              "; lower lambda or extend the schedule (max lambda = " +
                              format_double(max_lambda_for_schedule(cap, tolerance)) + ")");
    }
}

std::string to_string(MultiscaleEstimator e) {
    switch (e) {
        case MultiscaleEstimator::ScatteringIntensity: return "si";
        case MultiscaleEstimator::SelfNormalizedSI: return "si_self_normalized";
        case MultiscaleEstimator::Bartlett: return "bartlett";
        case MultiscaleEstimator::SelfNormalizedBartlett: return "bartlett_self_normalized";
    }
    return "si";
}

MultiscaleEstimator parse_multiscale_estimator(const std::string& s) {
    if (s == "si") return MultiscaleEstimator::ScatteringIntensity;
    if (s == "si_self_normalized") return MultiscaleEstimator::SelfNormalizedSI;
    if (s == "bartlett") return MultiscaleEstimator::Bartlett;
    if (s == "bartlett_self_normalized") return MultiscaleEstimator::SelfNormalizedBartlett;
    throw ValidationError("unknown test estimator '" + s + "'");
}

double estimate_at_kmin(const PointPattern& p, MultiscaleEstimator estimator) {
    const Window& w = p.window();
    const bool self_normalized = estimator == MultiscaleEstimator::SelfNormalizedSI ||
                                 estimator == MultiscaleEstimator::SelfNormalizedBartlett;
    if (estimator == MultiscaleEstimator::ScatteringIntensity ||
        estimator == MultiscaleEstimator::SelfNormalizedSI) {
        if (!w.is_box()) throw ValidationError("the scattering intensity test needs box windows");
        if (p.empty()) return 0.0;
        const WaveGrid grid = WaveGrid::from_wavevectors(w.dim(), min_restricted_wavevector(w));
        return scattering_intensity(p, grid, self_normalized).values[0];
    }
    if (!w.is_ball()) throw ValidationError("the Bartlett test needs ball windows");
    const double k = allowed_wavenumbers_ball(w, 1)[0];
    if (p.empty()) return 1.0;
    return bartlett_isotropic(p, std::span<const double>(&k, 1), self_normalized).values[0];
}

CoupledSumDraw coupled_sum_draw(const PatternSource& source, const WindowEstimator& estimator,
                                std::span<const Window> schedule, const CoupledSumLaw& law, std::uint64_t seed) {
    if (schedule.size() != law.cap()) throw ValidationError("law cap differs from the schedule length");
    for (std::size_t j = 1; j < schedule.size(); ++j) {
        if (!schedule[j].contains(schedule[j - 1]) || schedule[j] == schedule[j - 1]) {
            throw ValidationError("window schedule must be strictly increasing");
        }
    }
    CoupledSumDraw draw;
    draw.M = law.draw(derive_seed(seed, 0));
    const PointPattern full = source(schedule[draw.M - 1], derive_seed(seed, 1));
    for (std::size_t j = 1; j <= draw.M; ++j) {
        const PointPattern part = restrict_to_window(full, schedule[j - 1]);
        draw.Y.push_back(std::clamp(estimator(part), 0.0, 1.0));
        draw.tail_probabilities.push_back(law.tail(j));
    }
    draw.Z = coupled_sum(draw.Y, draw.tail_probabilities);
    return draw;
}

TestReport multiscale_test(std::span<const double> z_values, double z) {
    if (z_values.size() < 2) throw ValidationError("the multiscale test needs A >= 2 draws");
    if (!(z > 0.0)) throw ValidationError("CI multiplier must be positive");
    TestReport rep;
    rep.A = z_values.size();
    rep.z_multiplier = z;
    rep.z_bar = mean_of(z_values);
    rep.sigma_bar = sample_std(z_values, rep.z_bar);
    const double half = z * rep.sigma_bar / std::sqrt(static_cast<double>(rep.A));
    rep.ci_lo = rep.z_bar - half;
    rep.ci_hi = rep.z_bar + half;
    rep.reject = !(rep.ci_lo <= 0.0 && 0.0 <= rep.ci_hi);
    return rep;
}

TestReport multiscale_test(std::span<const CoupledSumDraw> draws, double z) {
    std::vector<double> values;
    for (const auto& d : draws) values.push_back(d.Z);
    return multiscale_test(values, z);
}

ImseResult imse(std::span<const SpectralEstimate> estimates, const std::function<double(double)>& exact,
                double k_lo, double k_hi) {
    if (estimates.empty()) throw ValidationError("iMSE needs at least one estimate");
    if (!(k_hi > k_lo)) throw ValidationError("iMSE range must have k_hi > k_lo");
    std::vector<std::vector<double>> curves;
    std::vector<double> common;
    for (std::size_t s = 0; s < estimates.size(); ++s) {
        const auto [k, v] = per_wavenumber(estimates[s]);
        std::vector<double> kk;
        std::vector<double> vv;
        for (std::size_t i = 0; i < k.size(); ++i) {
            if (k[i] >= k_lo && k[i] <= k_hi) {
                kk.push_back(k[i]);
                vv.push_back(v[i]);
            }
        }
        if (kk.size() < 2) throw ValidationError("iMSE needs at least two wavenumbers in range");
        if (s == 0) {
            common = kk;
        } else {
            bool same = kk.size() == common.size();
            for (std::size_t i = 0; same && i < kk.size(); ++i) {
                same = std::abs(kk[i] - common[i]) <= 1e-12 * std::max(1.0, common[i]);
            }
            if (!same) throw ValidationError("estimates do not share a common k subdivision");
        }
        curves.push_back(std::move(vv));
    }
    auto trapezoid = [&](const std::vector<double>& f) {
        double s = 0.0;
        for (std::size_t i = 1; i < common.size(); ++i) s += 0.5 * (f[i] + f[i - 1]) * (common[i] - common[i - 1]);
        return s;
    };
    ImseResult out;
    out.k = common;
    std::vector<double> truth(common.size());
    for (std::size_t i = 0; i < common.size(); ++i) truth[i] = exact(common[i]);
    for (const auto& c : curves) {
        std::vector<double> sq(common.size());
        for (std::size_t i = 0; i < common.size(); ++i) sq[i] = (c[i] - truth[i]) * (c[i] - truth[i]);
        out.per_seed.push_back(trapezoid(sq));
    }
    out.mean = mean_of(out.per_seed);
    const std::size_t a = curves.size();
    const double sem = a > 1 ? sample_std(out.per_seed, out.mean) / std::sqrt(static_cast<double>(a)) : 0.0;
    out.ci_lo = out.mean - 3.0 * sem;
    out.ci_hi = out.mean + 3.0 * sem;
    if (a > 1) {
        std::vector<double> var(common.size(), 0.0);
        for (std::size_t i = 0; i < common.size(); ++i) {
            double m = 0.0;
            for (const auto& c : curves) m += c[i];
            m /= static_cast<double>(a);
            for (const auto& c : curves) var[i] += (c[i] - m) * (c[i] - m);
            var[i] /= static_cast<double>(a - 1);
        }
        out.ivar = trapezoid(var);
    }
    return out;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, bool one_sided) {
    if (a.size() != b.size()) throw ValidationError("paired t-test needs samples of equal length");
    if (a.size() < 2) throw ValidationError("paired t-test needs at least two pairs");
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    const double mean = mean_of(diff);
    const double sd = sample_std(diff, mean);
    TTestResult r;
    if (sd == 0.0) {
        if (mean == 0.0) return r;
        r.t = mean > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    } else {
        r.t = mean / (sd / std::sqrt(static_cast<double>(diff.size())));
    }
    const double cdf = specfun::student_t_cdf(r.t, static_cast<double>(diff.size() - 1));
    r.p = one_sided ? cdf : 2.0 * std::min(cdf, 1.0 - cdf);
    return r;
}

double poisson_si_second_moment(double rho, const Window& box) {
    if (!box.is_box()) throw ValidationError("the second-moment identity is stated for box windows");
    if (!(rho > 0.0)) throw ValidationError("intensity must be positive");
    return 1.0 / (rho * box.volume()) + 2.0;
}

}  // namespace sfac
