#ifndef LINFLOW_SPECTRAL_HPP
#define LINFLOW_SPECTRAL_HPP

#include <array>
#include <complex>
#include <optional>

#include "linflow/state.hpp"

// Eigenvalue computation and real Jordan-form classification, specialized to
// trace-free 3x3 matrices. Because tr(M) = 0 the characteristic polynomial is
// the depressed cubic rho^3 + p rho + q with p = -tr(M^2)/2 and q = -det(M),
// and exactly three spectral classes occur:
//   real_diagonalizable   J = diag(rho1, rho2, rho3)
//   complex_pair          J carries the 2x2 block [[l, a], [-a, l]]  (l +- i a)
//   defective_repeated    J = diag plus a single superdiagonal 1
// (A defective triple eigenvalue forces all eigenvalues to 0; the nilpotent
// fallbacks keep jordan_decompose total but are flagged defective_repeated.)

namespace linflow {

enum class SpectralClass { real_diagonalizable, complex_pair, defective_repeated };

/// Roots of the characteristic polynomial, ascending by (Re, Im), with the
/// sum pinned to exactly zero.
std::array<std::complex<double>, 3> eigenvalues_tracefree(const TraceFreeMatrix& m);

struct JordanDecomposition {
    SpectralClass cls = SpectralClass::real_diagonalizable;
    Mat3 q;                                      // M = q * j * q^-1
    Mat3 j;                                      // real canonical form
    std::array<std::complex<double>, 3> eigenvalues{};  // ascending (Re, Im)
    /// Set when the class decision sits inside the tolerance band (eigenvalue
    /// gap and defectiveness test both ambiguous at tol).
    bool ill_conditioned = false;

    Mat3 reconstruct() const { return q * j * inverse(q); }

    /// (lambda, a) of the complex block, a > 0; nullopt for other classes.
    std::optional<std::pair<double, double>> complex_block() const;
    /// Repeated eigenvalue of the defective class; nullopt otherwise.
    std::optional<double> repeated_eigenvalue() const;
};

/// Classify and factor M = Q J Q^-1. Eigenvalues within tol*(1 + max|rho|)
/// of each other are treated as repeated; defectiveness is then decided by
/// the rank of M - rho I at the same relative tolerance.
JordanDecomposition jordan_decompose(const TraceFreeMatrix& m, double tol = 1e-8);

struct FamilyEigenbasis {
    Vec3 v1;  // eigenvector for -2r (axial compression direction)
    Vec3 v2;  // = e2, eigenvector for r
    Vec3 v3;  // eigenvector for r
    Mat3 q;   // columns v1, v2, v3
};

/// Closed-form eigenbasis of the invariant-family matrix
/// [[-(1+r), 0, k], [0, r, 0], [-k, 0, 1]]:
///   v1 = (1+2r, 0, k)/sqrt(k^2+(1+2r)^2), v2 = e2,
///   v3 = (k, 0, 1+2r)/sqrt(k^2+(1+2r)^2).
/// Requires r in (0, 1] and k^2 = 1 + r - 2r^2 to 1e-12. The basis is not
/// orthogonal for k != 0: v1 . v3 = 2k(1+2r)/(k^2+(1+2r)^2).
FamilyEigenbasis family_eigenbasis(double r, double k);

/// dJ/dt = -J^2 + (1/3) tr(J^2) I. Maps each canonical shape to a derivative
/// of the same shape (diagonal stays diagonal, the complex block reduces to
/// d(lambda) = lambda^2 + a^2/3, da = -2 lambda a, the defective shape to
/// d(lambda) = lambda^2, d(off) = -2 lambda off).
Mat3 jordan_evolution_rhs(const Mat3& j);

/// Singular values of a 3x3 matrix, descending, via the eigenvalues of m^T m.
/// Accurate for well-separated values; near zero they carry a sqrt(eps)*s1
/// noise floor (the usual normal-equations loss), which is why the rank
/// decisions inside jordan_decompose use a column-pivoted QR instead.
std::array<double, 3> singular_values(const Mat3& m);

}  // namespace linflow

#endif  // LINFLOW_SPECTRAL_HPP
