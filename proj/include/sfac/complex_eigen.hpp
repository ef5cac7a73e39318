#pragma once

#include <complex>
#include <vector>

/// Eigenvalues of dense complex non-symmetric matrices. Matrices are n x n,
/// column-major: a(i, j) = a[i + j * n].
namespace sfac::linalg {

using cplx = std::complex<double>;

enum class EigenBackend {
    Auto,       ///< LAPACK when compiled in, otherwise Reference
    Lapack,     ///< zhseqr; throws ResourceError when not compiled in
    Reference,  ///< built-in single-shift QR
};

bool lapack_available();

/// Householder reduction to upper Hessenberg form, in place. Entries below
/// the first subdiagonal are set to zero.
void hessenberg_reduce(std::vector<cplx>& a, int n);

/// Eigenvalues of an upper Hessenberg matrix.
std::vector<cplx> hessenberg_eigenvalues(std::vector<cplx> h, int n,
                                         EigenBackend backend = EigenBackend::Auto);

/// Eigenvalues of a general square matrix (reduction followed by QR).
std::vector<cplx> eigenvalues(std::vector<cplx> a, int n, EigenBackend backend = EigenBackend::Auto);

}  // namespace sfac::linalg
