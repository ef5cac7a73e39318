#include "sfac/complex_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sfac/error.hpp"

#ifdef SFAC_HAVE_LAPACK
extern "C" void zhseqr_(const char* job, const char* compz, const int* n, const int* ilo,
                        const int* ihi, std::complex<double>* h, const int* ldh,
                        std::complex<double>* w, std::complex<double>* z, const int* ldz,
                        std::complex<double>* work, const int* lwork, int* info,
                        std::size_t job_len, std::size_t compz_len);
#endif

namespace sfac::linalg {

namespace {

void check_size(const std::vector<cplx>& a, int n) {
    if (n < 1 || a.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw ValidationError("matrix storage does not match n x n");
    }
}

std::vector<cplx> qr_reference(std::vector<cplx> h, int n) {
    auto at = [&](int i, int j) -> cplx& {
        return h[static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * static_cast<std::size_t>(n)];
    };
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<cplx> eig(static_cast<std::size_t>(n));
    int hi = n - 1;
    int iter = 0;
    int total = 0;
    while (hi >= 0) {
        if (hi == 0) {
            eig[0] = at(0, 0);
            break;
        }
        int l = hi;
        for (; l > 0; --l) {
            const double scale = std::abs(at(l - 1, l - 1)) + std::abs(at(l, l));
            if (std::abs(at(l, l - 1)) <= eps * (scale > 0.0 ? scale : 1.0)) {
                at(l, l - 1) = 0.0;
                break;
            }
        }
        if (l == hi) {
            eig[static_cast<std::size_t>(hi)] = at(hi, hi);
            --hi;
            iter = 0;
            continue;
        }
        if (++total > 60 * n) {
            throw NumericalError("Hessenberg QR failed to converge");
        }
        ++iter;

        // Wilkinson shift from the trailing 2x2 block
        cplx mu;
        if (iter % 11 == 10) {
            mu = at(hi, hi) + 0.75 * std::abs(at(hi, hi - 1));
        } else {
            const cplx a = at(hi - 1, hi - 1);
            const cplx b = at(hi - 1, hi);
            const cplx c = at(hi, hi - 1);
            const cplx d = at(hi, hi);
            const cplx half_tr = 0.5 * (a + d);
            const cplx disc = std::sqrt(half_tr * half_tr - (a * d - b * c));
            const cplx mu1 = half_tr + disc;
            const cplx mu2 = half_tr - disc;
            mu = (std::abs(mu1 - d) < std::abs(mu2 - d)) ? mu1 : mu2;
        }

        cplx x = at(l, l) - mu;
        cplx y = at(l + 1, l);
        for (int k = l; k < hi; ++k) {
            if (k > l) {
                x = at(k, k - 1);
                y = at(k + 1, k - 1);
            }
            const double r = std::hypot(std::abs(x), std::abs(y));
            if (r == 0.0) continue;
            double c;
            cplx s;
            if (std::abs(x) == 0.0) {
                c = 0.0;
                s = std::conj(y) / std::abs(y);
            } else {
                c = std::abs(x) / r;
                s = (x / std::abs(x)) * std::conj(y) / r;
            }
            for (int j = (k > l ? k - 1 : l); j <= hi; ++j) {
                const cplx u = at(k, j);
                const cplx v = at(k + 1, j);
                at(k, j) = c * u + s * v;
                at(k + 1, j) = -std::conj(s) * u + c * v;
            }
            if (k > l) at(k + 1, k - 1) = 0.0;
            const int row_end = std::min(k + 2, hi);
            for (int i = l; i <= row_end; ++i) {
                const cplx u = at(i, k);
                const cplx v = at(i, k + 1);
                at(i, k) = c * u + std::conj(s) * v;
                at(i, k + 1) = -s * u + c * v;
            }
        }
    }
    return eig;
}

#ifdef SFAC_HAVE_LAPACK
std::vector<cplx> qr_lapack(std::vector<cplx> h, int n) {
    const int one = 1;
    int info = 0;
    std::vector<cplx> w(static_cast<std::size_t>(n));
    cplx z_dummy;
    cplx work_query;
    int lwork = -1;
    zhseqr_("E", "N", &n, &one, &n, h.data(), &n, w.data(), &z_dummy, &one, &work_query, &lwork,
            &info, 1, 1);
    lwork = std::max(n, static_cast<int>(work_query.real()));
    std::vector<cplx> work(static_cast<std::size_t>(lwork));
    zhseqr_("E", "N", &n, &one, &n, h.data(), &n, w.data(), &z_dummy, &one, work.data(), &lwork,
            &info, 1, 1);
    if (info != 0) {
        throw NumericalError("zhseqr failed with info = " + std::to_string(info));
    }
    return w;
}
#endif

}  // namespace

bool lapack_available() {
#ifdef SFAC_HAVE_LAPACK
    return true;
#else
    return false;
#endif
}

void hessenberg_reduce(std::vector<cplx>& a, int n) {
    check_size(a, n);
    auto at = [&](int i, int j) -> cplx& {
        return a[static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * static_cast<std::size_t>(n)];
    };
    std::vector<cplx> v(static_cast<std::size_t>(n));
    for (int k = 0; k + 2 < n; ++k) {
        double norm2 = 0.0;
        for (int i = k + 1; i < n; ++i) norm2 += std::norm(at(i, k));
        const double alpha_abs = std::sqrt(norm2);
        if (alpha_abs == 0.0) continue;
        const cplx x0 = at(k + 1, k);
        const cplx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cplx(1.0);
        const cplx alpha = -phase * alpha_abs;
        // v = x - alpha e1, H = I - 2 v v^H / (v^H v)
        double vnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[static_cast<std::size_t>(i)] = at(i, k);
            if (i == k + 1) v[static_cast<std::size_t>(i)] -= alpha;
            vnorm2 += std::norm(v[static_cast<std::size_t>(i)]);
        }
        if (vnorm2 == 0.0) continue;
        const double beta = 2.0 / vnorm2;
        for (int j = k; j < n; ++j) {
            cplx dot = 0.0;
            for (int i = k + 1; i < n; ++i) dot += std::conj(v[static_cast<std::size_t>(i)]) * at(i, j);
            dot *= beta;
            for (int i = k + 1; i < n; ++i) at(i, j) -= v[static_cast<std::size_t>(i)] * dot;
        }
        for (int i = 0; i < n; ++i) {
            cplx dot = 0.0;
            for (int j = k + 1; j < n; ++j) dot += at(i, j) * v[static_cast<std::size_t>(j)];
            dot *= beta;
            for (int j = k + 1; j < n; ++j) at(i, j) -= dot * std::conj(v[static_cast<std::size_t>(j)]);
        }
        at(k + 1, k) = alpha;
        for (int i = k + 2; i < n; ++i) at(i, k) = 0.0;
    }
}

std::vector<cplx> hessenberg_eigenvalues(std::vector<cplx> h, int n, EigenBackend backend) {
    check_size(h, n);
    if (backend == EigenBackend::Lapack && !lapack_available()) {
        throw ResourceError("LAPACK backend requested but not compiled in");
    }
#ifdef SFAC_HAVE_LAPACK
    if (backend != EigenBackend::Reference) return qr_lapack(std::move(h), n);
#endif
    return qr_reference(std::move(h), n);
}

std::vector<cplx> eigenvalues(std::vector<cplx> a, int n, EigenBackend backend) {
    hessenberg_reduce(a, n);
    return hessenberg_eigenvalues(std::move(a), n, backend);
}

}  // namespace sfac::linalg
