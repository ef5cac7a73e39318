#include "sfac/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>

#include "sfac/error.hpp"

namespace sfac::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

// Taylor coefficients of 1/Gamma(1 + z) around z = 0.
constexpr std::array<double, 30> kRecipGamma1p = {
    1.0,
    0.5772156649015328606065,
    -0.655878071520253881077,
    -0.042002635034095235529,
    0.1665386113822914895017,
    -0.04219773455554433674821,
    -0.009621971527876973562115,
    0.007218943246663099542395,
    -0.001165167591859065112114,
    -0.0002152416741149509728157,
    0.0001280502823881161861532,
    -0.00002013485478078823865569,
    -0.000001250493482142670657345,
    0.000001133027231981695882374,
    -2.05633841697760710345e-7,
    6.116095104481415817862e-9,
    5.002007644469222930056e-9,
    -1.181274570487020144588e-9,
    1.043426711691100510492e-10,
    7.78226343990507125405e-12,
    -3.696805618642205708188e-12,
    5.100370287454475979015e-13,
    -2.058326053566506783222e-14,
    -5.34812253942301798237e-15,
    1.226778628238260790159e-15,
    -1.181259301697458769514e-16,
    1.18669225475160033258e-18,
    1.412380655318031781556e-18,
    -2.298745684435370206592e-19,
    1.714406321927337433384e-20,
};

bool is_integer(double nu) { return nu == std::floor(nu); }

void check_order(double nu) {
    if (!(nu >= -0.5)) {
        throw ValidationError("Bessel order must be >= -1/2, got " + std::to_string(nu));
    }
}

double j_series(double nu, double x) {
    const double half = 0.5 * x;
    const double q = -half * half;
    double term = (nu == 0.0) ? 1.0 : std::exp(nu * std::log(half) - std::lgamma(nu + 1.0));
    double sum = term;
    for (int k = 1; k < 300; ++k) {
        term *= q / (k * (k + nu));
        sum += term;
        if (std::abs(term) < kEps * 1e-2 * std::abs(sum) && k > 2) {
            break;
        }
    }
    return sum;
}

// Hankel's expansion. Returns false when the series stops decreasing before
// reaching double precision.
bool hankel_asymptotic(double nu, double x, double& j, double& y) {
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    bool converged = false;
    const double inv8x = 0.125 / x;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) * inv8x / k;
        const double mag = std::abs(term);
        if (term == 0.0) {
            converged = true;
            break;
        }
        if (mag > prev) {
            break;
        }
        prev = mag;
        // terms alternate between Q (odd k) and P (even k) with sign (-1)^{floor(k/2)}
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 1) {
            q += sign * term;
        } else {
            p += sign * term;
        }
        if (mag < kEps * 0.1) {
            converged = true;
            break;
        }
    }
    const double chi = x - (0.5 * nu + 0.25) * kPi;
    const double amp = std::sqrt(2.0 / (kPi * x));
    const double c = std::cos(chi);
    const double s = std::sin(chi);
    j = amp * (p * c - q * s);
    y = amp * (p * s + q * c);
    return converged;
}

double asymptotic_threshold(double nu) { return 20.0 + nu * nu; }

// Miller's backward recurrence normalized by J_0 + 2 sum J_{2k} = 1.
double j_miller(int n, double x) {
    int start = n + static_cast<int>(x) + 40;
    start += start % 2;
    const double two_over_x = 2.0 / x;
    double next = 0.0;  // J_{m+1}
    double cur = 1e-30;  // J_m
    double even_sum = 0.0;
    double result = (start == n) ? cur : 0.0;
    for (int m = start; m > 0; --m) {
        const double lower = m * two_over_x * cur - next;  // J_{m-1}
        next = cur;
        cur = lower;
        if ((m - 1) % 2 == 0 && m - 1 > 0) {
            even_sum += cur;
        }
        if (m - 1 == n) {
            result = cur;
        }
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            even_sum *= 1e-250;
            result *= 1e-250;
        }
    }
    const double norm = cur + 2.0 * even_sum;
    return result / norm;
}

// 1/Gamma(1+mu), 1/Gamma(1-mu) and the two Temme combinations, |mu| <= 1/2.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
    double odd = 0.0;
    double even = 0.0;
    double power = 1.0;  // mu^k
    for (std::size_t k = 0; k < kRecipGamma1p.size(); ++k) {
        if (k % 2 == 0) {
            even += kRecipGamma1p[k] * power;
        } else {
            odd += kRecipGamma1p[k] * power;
        }
        power *= mu;
    }
    gampl = even + odd;
    gammi = even - odd;
    gam2 = even;
    // (gammi - gampl) / (2 mu) = -odd / mu, evaluated without the division
    double g1 = 0.0;
    power = 1.0;
    for (std::size_t k = 1; k < kRecipGamma1p.size(); k += 2) {
        g1 -= kRecipGamma1p[k] * power;
        power *= mu * mu;
    }
    gam1 = g1;
}

// Temme's series (x < 2) and Steed's continued fractions (x >= 2) for nu >= 0.
BesselValues steed(double nu, double x) {
    constexpr double kXmin = 2.0;
    constexpr double kFpmin = 1e-300;
    constexpr int kMaxIt = 100000;

    const int nl = (x < kXmin) ? static_cast<int>(nu + 0.5)
                               : std::max(0, static_cast<int>(nu - x + 1.5));
    const double mu = nu - nl;
    const double mu2 = mu * mu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    const double w = xi2 / kPi;

    // CF1: J'_nu / J_nu
    int isign = 1;
    double h = std::max(nu * xi, kFpmin);
    double b = xi2 * nu;
    double d = 0.0;
    double c = h;
    int it = 0;
    for (; it < kMaxIt; ++it) {
        b += xi2;
        d = b - d;
        if (std::abs(d) < kFpmin) d = kFpmin;
        c = b - 1.0 / c;
        if (std::abs(c) < kFpmin) c = kFpmin;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0) isign = -isign;
        if (std::abs(del - 1.0) < kEps) break;
    }
    if (it == kMaxIt) {
        throw NumericalError("bessel_jy: continued fraction CF1 did not converge");
    }
    double rjl = isign * 1e-30;
    double rjpl = h * rjl;
    const double rjl1 = rjl;
    const double rjp1 = rjpl;
    double fact = nu * xi;
    for (int l = nl; l >= 1; --l) {
        const double tmp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * tmp - rjl;
        rjl = tmp;
    }
    if (rjl == 0.0) rjl = kEps;
    const double f = rjpl / rjl;

    double rjmu;
    double rymu;
    double rymup;
    double ry1;
    if (x < kXmin) {
        const double x2 = 0.5 * x;
        const double pimu = kPi * mu;
        const double fct = (std::abs(pimu) < kEps) ? 1.0 : pimu / std::sin(pimu);
        const double dd = -std::log(x2);
        double e = mu * dd;
        const double fct2 = (std::abs(e) < kEps) ? 1.0 : std::sinh(e) / e;
        double gam1, gam2, gampl, gammi;
        temme_gammas(mu, gam1, gam2, gampl, gammi);
        double ff = 2.0 / kPi * fct * (gam1 * std::cosh(e) + gam2 * fct2 * dd);
        e = std::exp(e);
        double p = e / (gampl * kPi);
        double q = 1.0 / (e * kPi * gammi);
        const double pimu2 = 0.5 * pimu;
        const double fct3 = (std::abs(pimu2) < kEps) ? 1.0 : std::sin(pimu2) / pimu2;
        const double r = kPi * pimu2 * fct3 * fct3;
        double cc = 1.0;
        const double dq = -x2 * x2;
        double sum = ff + r * q;
        double sum1 = p;
        int i = 1;
        for (; i < kMaxIt; ++i) {
            ff = (i * ff + p + q) / (i * i - mu2);
            cc *= dq / i;
            p /= (i - mu);
            q /= (i + mu);
            const double del = cc * (ff + r * q);
            sum += del;
            const double del1 = cc * p - i * del;
            sum1 += del1;
            if (std::abs(del) < (1.0 + std::abs(sum)) * kEps) break;
        }
        if (i == kMaxIt) {
            throw NumericalError("bessel_jy: Temme series did not converge");
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        rymup = mu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        // CF2: p + iq = (J' + iY') / (J + iY)
        double a = 0.25 - mu2;
        double p = -0.5 * xi;
        double q = 1.0;
        const double br = 2.0 * x;
        double bi = 2.0;
        double fct = a * xi / (p * p + q * q);
        double cr = br + q * fct;
        double ci = bi + p * fct;
        double den = br * br + bi * bi;
        double dr = br / den;
        double di = -bi / den;
        double dlr = cr * dr - ci * di;
        double dli = cr * di + ci * dr;
        double temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        int i = 2;
        for (; i < kMaxIt; ++i) {
            a += 2 * (i - 1);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if (std::abs(dr) + std::abs(di) < kFpmin) dr = kFpmin;
            fct = a / (cr * cr + ci * ci);
            cr = br + cr * fct;
            ci = bi - ci * fct;
            if (std::abs(cr) + std::abs(ci) < kFpmin) cr = kFpmin;
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (std::abs(dlr - 1.0) + std::abs(dli) < kEps) break;
        }
        if (i == kMaxIt) {
            throw NumericalError("bessel_jy: continued fraction CF2 did not converge");
        }
        const double gam = (p - f) / q;
        rjmu = std::sqrt(w / ((p - f) * gam + q));
        rjmu = std::copysign(rjmu, rjl);
        rymu = rjmu * gam;
        rymup = rymu * (p + q / gam);
        ry1 = mu * xi * rymu - rymup;
    }
    const double scale = rjmu / rjl;
    BesselValues out{};
    out.j = rjl1 * scale;
    out.jp = rjp1 * scale;
    for (int i = 1; i <= nl; ++i) {
        const double tmp = (mu + i) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = tmp;
    }
    out.y = rymu;
    out.yp = nu * xi * rymu - ry1;
    return out;
}

BesselValues jy_nonnegative(double nu, double x) {
    if (x >= asymptotic_threshold(nu)) {
        BesselValues out{};
        double j1 = 0.0;
        double y1 = 0.0;
        const bool ok0 = hankel_asymptotic(nu, x, out.j, out.y);
        const bool ok1 = hankel_asymptotic(nu + 1.0, x, j1, y1);
        if (ok0 && ok1) {
            out.jp = nu / x * out.j - j1;
            out.yp = nu / x * out.y - y1;
            return out;
        }
    }
    return steed(nu, x);
}

}  // namespace

BesselValues bessel_jy(double nu, double x) {
    check_order(nu);
    if (!(x > 0.0)) {
        throw ValidationError("bessel_jy requires x > 0");
    }
    if (nu >= 0.0) {
        return jy_nonnegative(nu, x);
    }
    // reflection from order m = -nu in (0, 1/2]
    const double m = -nu;
    const BesselValues pos = jy_nonnegative(m, x);
    const double c = std::cos(m * kPi);
    const double s = std::sin(m * kPi);
    return BesselValues{c * pos.j - s * pos.y, s * pos.j + c * pos.y,
                        c * pos.jp - s * pos.yp, s * pos.jp + c * pos.yp};
}

double bessel_j(double nu, double x) {
    check_order(nu);
    if (!(x >= 0.0)) {
        throw ValidationError("bessel_j requires x >= 0");
    }
    if (x == 0.0) {
        if (nu == 0.0) return 1.0;
        return nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (x <= nu + 12.0) {
        return j_series(nu, x);
    }
    if (x >= asymptotic_threshold(nu)) {
        double j = 0.0;
        double y = 0.0;
        if (hankel_asymptotic(nu, x, j, y)) {
            return j;
        }
    }
    if (is_integer(nu)) {
        return j_miller(static_cast<int>(nu), x);
    }
    return bessel_jy(nu, x).j;
}

double bessel_y(double nu, double x) {
    check_order(nu);
    if (!(x > 0.0)) {
        throw ValidationError("bessel_y requires x > 0 (Y diverges at the origin)");
    }
    return bessel_jy(nu, x).y;
}

namespace {

double mcmahon_guess(double nu, std::size_t j) {
    const double beta = (static_cast<double>(j) + 0.5 * nu - 0.25) * kPi;
    const double mu = 4.0 * nu * nu;
    const double b8 = 8.0 * beta;
    return beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
}

// Safeguarded Newton inside a sign-change bracket.
double polish_zero(double nu, double lo, double hi, double guess) {
    double flo = bessel_j(nu, lo);
    double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fx = bessel_j(nu, x);
        if (fx == 0.0) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        const double dfx = nu / x * fx - bessel_j(nu + 1.0, x);
        double next = x - fx / dfx;
        if (!(next > lo && next < hi) || !std::isfinite(next)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 1e-15 * x || hi - lo <= 4e-16 * x) {
            return next;
        }
        x = next;
    }
    return x;
}

std::vector<double> compute_zeros(double nu, std::vector<double> zeros, std::size_t n) {
    constexpr double kStep = 0.05;
    while (zeros.size() < n) {
        const std::size_t j = zeros.size() + 1;
        const double prev = zeros.empty() ? 0.0 : zeros.back();
        // J_nu is positive before its first zero and alternates afterwards.
        const bool positive_before = (j % 2 == 1);
        const double floor_start = zeros.empty() ? 1e-3 : prev + 0.5;
        double start = std::max(floor_start, mcmahon_guess(nu, j) - 0.3);
        double fstart = bessel_j(nu, start);
        if ((fstart > 0.0) != positive_before) {
            start = floor_start;
            fstart = bessel_j(nu, start);
        }
        double a = start;
        double fa = fstart;
        double b = a + kStep;
        double fb = bessel_j(nu, b);
        int guard = 0;
        while ((fa > 0.0) == (fb > 0.0) && fb != 0.0) {
            a = b;
            fa = fb;
            b += kStep;
            fb = bessel_j(nu, b);
            if (++guard > 1000000) {
                throw NumericalError("bessel_j_zeros: failed to bracket zero");
            }
        }
        zeros.push_back(fb == 0.0 ? b : polish_zero(nu, a, b, mcmahon_guess(nu, j)));
    }
    return zeros;
}

std::shared_mutex g_zero_mutex;
std::map<double, std::vector<double>> g_zero_cache;

}  // namespace

BesselZeroTable bessel_j_zeros(double nu, std::size_t n) {
    check_order(nu);
    if (n == 0) {
        throw ValidationError("bessel_j_zeros requires n >= 1");
    }
    std::vector<double> existing;
    {
        std::shared_lock lock(g_zero_mutex);
        auto it = g_zero_cache.find(nu);
        if (it != g_zero_cache.end()) {
            if (it->second.size() >= n) {
                return BesselZeroTable{nu, std::vector<double>(it->second.begin(),
                                                               it->second.begin() + static_cast<std::ptrdiff_t>(n))};
            }
            existing = it->second;
        }
    }
    std::vector<double> zeros = compute_zeros(nu, std::move(existing), n);
    {
        std::unique_lock lock(g_zero_mutex);
        auto& slot = g_zero_cache[nu];
        if (slot.size() < zeros.size()) {
            slot = zeros;
        }
    }
    return BesselZeroTable{nu, std::move(zeros)};
}

double ft_indicator_box(std::span<const double> k, std::span<const double> lengths) {
    if (k.size() != lengths.size()) {
        throw ValidationError("ft_indicator_box: dimension mismatch");
    }
    double out = 1.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
        const double half_arg = 0.5 * k[j] * lengths[j];
        if (std::abs(half_arg) < 1e-8) {
            out *= lengths[j] * (1.0 - half_arg * half_arg / 6.0);
        } else {
            out *= std::sin(half_arg) / (0.5 * k[j]);
        }
    }
    return out;
}

double ft_alpha0_box(std::span<const double> k, std::span<const double> lengths) {
    double volume = 1.0;
    for (double l : lengths) volume *= l;
    const double f = ft_indicator_box(k, lengths);
    return f * f / volume;
}

double ft_alpha0_ball(double k, double radius, int dim) {
    if (!(k > 0.0)) {
        throw ValidationError("ft_alpha0_ball requires k > 0; the k = 0 limit is |W|");
    }
    const double half_d = 0.5 * dim;
    const double jv = bessel_j(half_d, k * radius);
    return std::pow(2.0, dim) * std::pow(kPi, half_d) * std::tgamma(1.0 + half_d) * jv * jv /
           std::pow(k, dim);
}

double unit_sphere_area(int dim) {
    const double half_d = 0.5 * dim;
    return 2.0 * std::pow(kPi, half_d) / std::tgamma(half_d);
}

double ball_volume(int dim, double radius) {
    const double half_d = 0.5 * dim;
    return std::pow(kPi, half_d) * std::pow(radius, dim) / std::tgamma(half_d + 1.0);
}

namespace {

double beta_continued_fraction(double a, double b, double x) {
    constexpr double kFpmin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpmin) d = kFpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < 10000; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpmin) d = kFpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpmin) c = kFpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpmin) d = kFpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpmin) c = kFpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) return h;
    }
    throw NumericalError("regularized_incomplete_beta: continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw ValidationError("regularized_incomplete_beta requires a, b > 0");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw ValidationError("regularized_incomplete_beta requires x in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) return x;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
    if (!(dof > 0.0)) {
        throw ValidationError("student_t_cdf requires positive degrees of freedom");
    }
    if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
    const double x = dof / (dof + t * t);
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

}  // namespace sfac::specfun
