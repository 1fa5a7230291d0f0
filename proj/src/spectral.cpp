#include "linflow/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace linflow {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// ---- depressed cubic rho^3 + p rho + q ------------------------------------

struct CubicRoots {
    // Either three real roots, or one real root and a conjugate pair
    // real +- i imag (imag > 0).
    bool complex_pair;
    double r0, r1, r2;  // real roots ascending (three-real case)
    double real_root;   // complex case
    double pair_re, pair_im;
};

double cubic_value(double p, double q, double x) { return (x * x + p) * x + q; }

// One-two Newton polish steps; skipped near double roots where f' ~ 0.
double polish_root(double p, double q, double x, double scale) {
    for (int it = 0; it < 2; ++it) {
        const double fp = 3.0 * x * x + p;
        if (std::abs(fp) < 1e-8 * scale * scale) break;
        x -= cubic_value(p, q, x) / fp;
    }
    return x;
}

CubicRoots solve_depressed_cubic(double p, double q) {
    CubicRoots out{};
    const double scale = std::max({1.0, std::sqrt(std::abs(p)), std::cbrt(std::abs(q))});

    if (p == 0.0 && q == 0.0) {
        out.complex_pair = false;
        out.r0 = out.r1 = out.r2 = 0.0;
        return out;
    }

    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    if (disc >= 0.0) {
        // Three real roots; p <= 0 here. Trigonometric form is branch-stable
        // through the double-root boundary disc = 0.
        const double m = 2.0 * std::sqrt(-p / 3.0);
        double c = 3.0 * q / (p * m);
        c = std::clamp(c, -1.0, 1.0);
        const double phi = std::acos(c);
        double r[3];
        for (int k = 0; k < 3; ++k)
            r[k] = m * std::cos(phi / 3.0 - 2.0 * M_PI * k / 3.0);
        for (double& x : r) x = polish_root(p, q, x, scale);
        std::sort(r, r + 3);
        // Exact zero sum (the cubic has no quadratic term).
        const double mean = (r[0] + r[1] + r[2]) / 3.0;
        out.complex_pair = false;
        out.r0 = r[0] - mean;
        out.r1 = r[1] - mean;
        out.r2 = r[2] - mean;
        return out;
    }

    // One real root via Cardano with the cancellation-free branch.
    const double half_q = 0.5 * q;
    const double rad = std::sqrt(half_q * half_q + p * p * p / 27.0);
    const double big = -half_q >= 0.0 ? -half_q + rad : -half_q - rad;
    const double u = std::cbrt(big);
    const double v = u != 0.0 ? -p / (3.0 * u) : 0.0;
    double mu = polish_root(p, q, u + v, scale);
    // Deflate: remaining quadratic is rho^2 + mu rho + (p + mu^2), so the
    // pair is -mu/2 +- i sqrt(3 mu^2/4 + p); the real part makes the total
    // sum exactly zero.
    const double im_sq = 0.75 * mu * mu + p;
    out.complex_pair = true;
    out.real_root = mu;
    out.pair_re = -0.5 * mu;
    out.pair_im = std::sqrt(std::max(im_sq, 0.0));
    return out;
}

// ---- small complex 3-vector helpers ----------------------------------------

using Cplx = std::complex<double>;

struct CVec3 {
    Cplx x, y, z;
};

CVec3 cplx_row(const Mat3& m, int i, Cplx shift) {
    return {Cplx(m(i, 0)) - (i == 0 ? shift : 0.0), Cplx(m(i, 1)) - (i == 1 ? shift : 0.0),
            Cplx(m(i, 2)) - (i == 2 ? shift : 0.0)};
}

CVec3 cplx_cross(const CVec3& a, const CVec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double cplx_norm(const CVec3& a) {
    return std::sqrt(std::norm(a.x) + std::norm(a.y) + std::norm(a.z));
}

// Null vector of M - z I via the largest cross product of two rows (the
// bilinear cross is orthogonal to both rows, real or complex).
CVec3 cplx_null_vector(const Mat3& m, Cplx z) {
    const CVec3 r0 = cplx_row(m, 0, z), r1 = cplx_row(m, 1, z), r2 = cplx_row(m, 2, z);
    CVec3 best = cplx_cross(r0, r1);
    double bn = cplx_norm(best);
    for (const CVec3& c : {cplx_cross(r0, r2), cplx_cross(r1, r2)}) {
        const double n = cplx_norm(c);
        if (n > bn) {
            best = c;
            bn = n;
        }
    }
    if (bn == 0.0) return {1.0, 0.0, 0.0};
    return {best.x / bn, best.y / bn, best.z / bn};
}

Vec3 real_null_vector(const Mat3& m, double rho) {
    const CVec3 v = cplx_null_vector(m, Cplx(rho));
    Vec3 out{v.x.real(), v.y.real(), v.z.real()};
    const double n = norm(out);
    if (n == 0.0) return {1.0, 0.0, 0.0};
    out = out / n;
    // Deterministic sign: largest-magnitude component positive.
    double big = out.x;
    if (std::abs(out.y) > std::abs(big)) big = out.y;
    if (std::abs(out.z) > std::abs(big)) big = out.z;
    return big < 0.0 ? -out : out;
}

// Particular solution of B w = v for (numerically) rank-deficient B: full
// pivoting, near-zero pivots skipped with the corresponding variable set to 0.
Vec3 solve_rank_deficient(Mat3 b, Vec3 v, double pivot_tol) {
    int col_of[3] = {0, 1, 2};
    double rhs[3] = {v.x, v.y, v.z};
    int row_of[3] = {0, 1, 2};

    for (int step = 0; step < 3; ++step) {
        int pi = step, pj = step;
        double best = 0.0;
        for (int i = step; i < 3; ++i)
            for (int j = step; j < 3; ++j)
                if (std::abs(b(row_of[i], col_of[j])) > best) {
                    best = std::abs(b(row_of[i], col_of[j]));
                    pi = i;
                    pj = j;
                }
        if (best <= pivot_tol) break;  // remaining block ~ 0; free vars stay 0
        std::swap(row_of[step], row_of[pi]);
        std::swap(col_of[step], col_of[pj]);
        const double piv = b(row_of[step], col_of[step]);
        for (int i = step + 1; i < 3; ++i) {
            const double f = b(row_of[i], col_of[step]) / piv;
            for (int j = step; j < 3; ++j)
                b(row_of[i], col_of[j]) -= f * b(row_of[step], col_of[j]);
            rhs[row_of[i]] -= f * rhs[row_of[step]];
        }
    }

    double w_perm[3] = {0.0, 0.0, 0.0};
    for (int step = 2; step >= 0; --step) {
        const double piv = b(row_of[step], col_of[step]);
        if (std::abs(piv) <= pivot_tol) continue;
        double acc = rhs[row_of[step]];
        for (int j = step + 1; j < 3; ++j) acc -= b(row_of[step], col_of[j]) * w_perm[j];
        w_perm[step] = acc / piv;
    }
    Vec3 w{};
    for (int j = 0; j < 3; ++j) w[col_of[j]] = w_perm[j];
    return w;
}

// |diag(R)| of a column-pivoted Householder QR of b, descending. Unlike
// singular values computed through b^T b, these rank diagnostics are
// backward-stable near zero (absolute error ~ eps * |b|, no sqrt(eps)
// amplification) and track the singular values within small constant factors.
std::array<double, 3> pivoted_qr_diag(Mat3 b) {
    int perm[3] = {0, 1, 2};
    std::array<double, 3> out{};
    for (int k = 0; k < 3; ++k) {
        double best = -1.0;
        int bj = k;
        for (int j = k; j < 3; ++j) {
            double s = 0.0;
            for (int i = k; i < 3; ++i) s += b(i, perm[j]) * b(i, perm[j]);
            if (s > best) {
                best = s;
                bj = j;
            }
        }
        std::swap(perm[k], perm[bj]);
        const double alpha = std::sqrt(best);
        out[k] = alpha;
        if (alpha == 0.0) continue;
        // Householder reflector on rows k..2 of the pivot column, applied to
        // the remaining columns.
        double v[3] = {0.0, 0.0, 0.0};
        double v_sq = 0.0;
        const int c = perm[k];
        const double sign = b(k, c) >= 0.0 ? 1.0 : -1.0;
        for (int i = k; i < 3; ++i) v[i] = b(i, c);
        v[k] += sign * alpha;
        for (int i = k; i < 3; ++i) v_sq += v[i] * v[i];
        if (v_sq == 0.0) continue;
        for (int j = k + 1; j < 3; ++j) {
            const int cc = perm[j];
            double dot_vc = 0.0;
            for (int i = k; i < 3; ++i) dot_vc += v[i] * b(i, cc);
            const double f = 2.0 * dot_vc / v_sq;
            for (int i = k; i < 3; ++i) b(i, cc) -= f * v[i];
        }
    }
    return out;
}

// Orthonormal basis of the plane orthogonal to u.
void plane_basis(Vec3 u, Vec3& n1, Vec3& n2) {
    const Vec3 axis = std::abs(u.x) <= std::abs(u.y) && std::abs(u.x) <= std::abs(u.z)
                          ? Vec3{1.0, 0.0, 0.0}
                          : (std::abs(u.y) <= std::abs(u.z) ? Vec3{0.0, 1.0, 0.0}
                                                            : Vec3{0.0, 0.0, 1.0});
    n1 = normalized(cross(u, axis));
    n2 = normalized(cross(u, n1));
}

bool in_band(double x, double ref) { return x > 0.1 * ref && x < 10.0 * ref; }

}  // namespace

std::array<double, 3> singular_values(const Mat3& m) {
    const Mat3 a = transpose(m) * m;
    const double third_tr = trace(a) / 3.0;
    // Shift to trace-free and reuse the depressed-cubic solver; a symmetric
    // matrix always has three real eigenvalues (tiny imaginary dust from the
    // discriminant boundary is dropped).
    Mat3 a0 = a;
    a0(0, 0) -= third_tr;
    a0(1, 1) -= third_tr;
    a0(2, 2) -= third_tr;
    const double p = -0.5 * trace(a0 * a0);
    const double q = -det(a0);
    const CubicRoots roots = solve_depressed_cubic(p, q);
    std::array<double, 3> ev{};
    if (!roots.complex_pair) {
        ev = {roots.r2, roots.r1, roots.r0};
    } else {
        ev = {roots.real_root, roots.pair_re, roots.pair_re};
        std::sort(ev.begin(), ev.end(), std::greater<>());
    }
    std::array<double, 3> sv{};
    for (int i = 0; i < 3; ++i) sv[i] = std::sqrt(std::max(ev[i] + third_tr, 0.0));
    return sv;
}

std::array<std::complex<double>, 3> eigenvalues_tracefree(const TraceFreeMatrix& tf) {
    const Mat3& m = tf.matrix();
    const double p = -0.5 * trace(m * m);
    const double q = -det(m);
    const CubicRoots roots = solve_depressed_cubic(p, q);
    std::array<Cplx, 3> ev;
    if (!roots.complex_pair) {
        ev = {Cplx(roots.r0), Cplx(roots.r1), Cplx(roots.r2)};
    } else {
        ev = {Cplx(roots.real_root), Cplx(roots.pair_re, -roots.pair_im),
              Cplx(roots.pair_re, roots.pair_im)};
    }
    std::sort(ev.begin(), ev.end(), [](Cplx a, Cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return ev;
}

std::optional<std::pair<double, double>> JordanDecomposition::complex_block() const {
    if (cls != SpectralClass::complex_pair) return std::nullopt;
    if (j(1, 0) != 0.0) return std::make_pair(j(0, 0), j(0, 1));  // block in rows 0-1
    return std::make_pair(j(1, 1), j(1, 2));                      // block in rows 1-2
}

std::optional<double> JordanDecomposition::repeated_eigenvalue() const {
    if (cls != SpectralClass::defective_repeated) return std::nullopt;
    if (j(0, 1) != 0.0) return j(0, 0);
    return j(1, 1);
}

JordanDecomposition jordan_decompose(const TraceFreeMatrix& tf, double tol) {
    if (!(tol > 0.0)) throw std::domain_error("jordan_decompose: tol must be positive");
    const Mat3& m = tf.matrix();
    JordanDecomposition out;
    out.eigenvalues = eigenvalues_tracefree(tf);

    double rho_max = 0.0;
    for (const Cplx& e : out.eigenvalues) rho_max = std::max(rho_max, std::abs(e));
    const double scale = 1.0 + rho_max;
    const double gap_tol = tol * scale;
    // A defective pair splits by ~sqrt(eps) under eps-level coefficient
    // noise; clustering tighter than that chases noise.
    const double cluster_floor = std::max(tol, 45.0 * std::sqrt(kEps)) * scale;

    const Cplx e0 = out.eigenvalues[0], e1 = out.eigenvalues[1], e2 = out.eigenvalues[2];
    const bool has_complex = e0.imag() != 0.0 || e1.imag() != 0.0 || e2.imag() != 0.0;
    const double a_imag = std::max({std::abs(e0.imag()), std::abs(e1.imag()),
                                    std::abs(e2.imag())});

    if (has_complex && a_imag > gap_tol) {
        // Complex-conjugate pair plus one real eigenvalue.
        const int real_idx = e0.imag() == 0.0 ? 0 : (e1.imag() == 0.0 ? 1 : 2);
        const double mu = out.eigenvalues[real_idx].real();
        const double lam = -0.5 * mu;  // exact: trace-free
        const double a = a_imag;

        const Vec3 u = real_null_vector(m, mu);
        const CVec3 v = cplx_null_vector(m, Cplx(lam, a));
        Vec3 x{v.x.real(), v.y.real(), v.z.real()};
        Vec3 y{v.x.imag(), v.y.imag(), v.z.imag()};
        const double s = 1.0 / std::max(norm(x), norm(y));
        x = s * x;
        y = s * y;

        out.cls = SpectralClass::complex_pair;
        out.ill_conditioned = in_band(a, gap_tol);
        out.j = Mat3::zero();
        if (mu < lam) {
            out.q = Mat3::from_columns(u, x, y);
            out.j(0, 0) = mu;
            out.j(1, 1) = out.j(2, 2) = lam;
            out.j(1, 2) = a;
            out.j(2, 1) = -a;
        } else {
            out.q = Mat3::from_columns(x, y, u);
            out.j(0, 0) = out.j(1, 1) = lam;
            out.j(0, 1) = a;
            out.j(1, 0) = -a;
            out.j(2, 2) = mu;
        }
        return out;
    }

    // All-real spectrum (a squashed imaginary pair collapses to its real part).
    double r[3];
    if (has_complex) {
        // Rebuild the sorted triple from the real root and the collapsed pair.
        const int real_idx = e0.imag() == 0.0 ? 0 : (e1.imag() == 0.0 ? 1 : 2);
        const double mu = out.eigenvalues[real_idx].real();
        const double dbl = -0.5 * mu;
        if (mu < dbl) {
            r[0] = mu;
            r[1] = r[2] = dbl;
        } else {
            r[0] = r[1] = dbl;
            r[2] = mu;
        }
        out.eigenvalues = {Cplx(r[0]), Cplx(r[1]), Cplx(r[2])};
    } else {
        r[0] = e0.real();
        r[1] = e1.real();
        r[2] = e2.real();
    }

    const double gap01 = r[1] - r[0];
    const double gap12 = r[2] - r[1];
    const double gmin = std::min(gap01, gap12);

    if (r[2] - r[0] <= cluster_floor) {
        // Triple root: trace-free forces it to 0, so M is (numerically)
        // nilpotent. Measure-zero corner, handled for totality.
        const std::array<double, 3> sv = pivoted_qr_diag(m);
        out.eigenvalues = {Cplx(0.0), Cplx(0.0), Cplx(0.0)};
        out.j = Mat3::zero();
        if (sv[0] <= gap_tol) {  // the zero matrix
            out.cls = SpectralClass::real_diagonalizable;
            out.q = Mat3::identity();
            return out;
        }
        out.cls = SpectralClass::defective_repeated;
        out.ill_conditioned = in_band(sv[1], tol * (1.0 + sv[0]));
        const Mat3 m2 = m * m;
        if (frobenius_norm(m2) > tol * (1.0 + frobenius_norm_sq(m))) {
            // Geometric multiplicity 1: full nilpotent chain w, Mw, M^2 w.
            Vec3 w{1.0, 0.0, 0.0};
            double best = 0.0;
            for (const Vec3& cand :
                 {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}, Vec3{1, 1, 1}}) {
                const double n = norm(m2 * cand);
                if (n > best) {
                    best = n;
                    w = cand;
                }
            }
            out.q = Mat3::from_columns(m2 * w, m * w, w);
            out.j(0, 1) = 1.0;
            out.j(1, 2) = 1.0;
        } else {
            // Geometric multiplicity 2: one 2-chain plus a null direction.
            Vec3 w{1.0, 0.0, 0.0};
            double best = 0.0;
            for (const Vec3& cand : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}) {
                const double n = norm(m * cand);
                if (n > best) {
                    best = n;
                    w = cand;
                }
            }
            Vec3 v = m * w;
            const double c = 1.0 / norm(v);
            v = c * v;
            w = c * w;
            // Null plane of a rank-1 matrix: orthogonal to its dominant row.
            Vec3 rbig = m.row(0);
            for (int i = 1; i < 3; ++i)
                if (norm(m.row(i)) > norm(rbig)) rbig = m.row(i);
            Vec3 n1, n2;
            plane_basis(normalized(rbig), n1, n2);
            const Vec3 u =
                std::abs(dot(v, n1)) < std::abs(dot(v, n2)) ? n1 : n2;
            out.q = Mat3::from_columns(v, w, u);
            out.j(0, 1) = 1.0;
        }
        return out;
    }

    if (gmin > cluster_floor) {
        // Three well-separated real eigenvalues.
        out.cls = SpectralClass::real_diagonalizable;
        out.j = Mat3::diag(r[0], r[1], r[2]);
        out.q = Mat3::from_columns(real_null_vector(m, r[0]), real_null_vector(m, r[1]),
                                   real_null_vector(m, r[2]));
        out.ill_conditioned = in_band(gmin, gap_tol);
        return out;
    }

    // A repeated real pair plus an isolated eigenvalue. The isolated root mu
    // is simple (accurate to ~eps); the doubled value is exactly -mu/2 by the
    // zero-trace constraint, which is far more accurate than the split pair.
    const double mu = gap01 < gap12 ? r[2] : r[0];
    const double dbl = -0.5 * mu;
    const Mat3 b = m - dbl * Mat3::identity();
    const std::array<double, 3> sv = pivoted_qr_diag(b);
    const double rank_tol = tol * (1.0 + sv[0]);
    const double singular_floor = std::max(tol * tol, 1e4 * kEps) * (1.0 + sv[0]);

    out.eigenvalues = mu < dbl ? std::array<Cplx, 3>{Cplx(mu), Cplx(dbl), Cplx(dbl)}
                               : std::array<Cplx, 3>{Cplx(dbl), Cplx(dbl), Cplx(mu)};
    const Vec3 u = real_null_vector(m, mu);

    if (sv[1] <= rank_tol) {
        // rank(M - dbl I) = 1: the repeated eigenvalue is semisimple and its
        // eigenspace is the plane orthogonal to the dominant row.
        Vec3 rbig = b.row(0);
        for (int i = 1; i < 3; ++i)
            if (norm(b.row(i)) > norm(rbig)) rbig = b.row(i);
        Vec3 n1, n2;
        plane_basis(normalized(rbig), n1, n2);
        out.cls = SpectralClass::real_diagonalizable;
        out.ill_conditioned = in_band(gmin, gap_tol) && in_band(sv[1], rank_tol);
        if (mu < dbl) {
            out.q = Mat3::from_columns(u, n1, n2);
            out.j = Mat3::diag(mu, dbl, dbl);
        } else {
            out.q = Mat3::from_columns(n1, n2, u);
            out.j = Mat3::diag(dbl, dbl, mu);
        }
        return out;
    }

    if (sv[2] <= singular_floor) {
        // Geometric multiplicity 1: genuinely defective. Jordan chain
        // (v, w) with B v = 0 and B w = v.
        Vec3 v = real_null_vector(m, dbl);
        Vec3 w = solve_rank_deficient(b, v, rank_tol);
        w = w - dot(v, w) * v;  // fix the +alpha*v gauge freedom
        const double c = 1.0 / norm(w);
        v = c * v;
        w = c * w;
        out.cls = SpectralClass::defective_repeated;
        out.ill_conditioned = in_band(gmin, gap_tol) && in_band(sv[1], rank_tol);
        out.j = Mat3::zero();
        if (mu < dbl) {
            out.q = Mat3::from_columns(u, v, w);
            out.j(0, 0) = mu;
            out.j(1, 1) = out.j(2, 2) = dbl;
            out.j(1, 2) = 1.0;
        } else {
            out.q = Mat3::from_columns(v, w, u);
            out.j(0, 0) = out.j(1, 1) = dbl;
            out.j(0, 1) = 1.0;
            out.j(2, 2) = mu;
        }
        return out;
    }

    // The eigenvalues look repeated at tol but M - dbl I is not numerically
    // singular: a genuinely small (but real) gap. Treat as diagonalizable
    // with nearly parallel eigenvectors and flag the ambiguity.
    out.cls = SpectralClass::real_diagonalizable;
    out.ill_conditioned = true;
    const double lo = gap01 < gap12 ? r[0] : r[1];
    const double hi = gap01 < gap12 ? r[1] : r[2];
    double rr[3];
    if (gap01 < gap12) {
        rr[0] = lo;
        rr[1] = hi;
        rr[2] = r[2];
    } else {
        rr[0] = r[0];
        rr[1] = lo;
        rr[2] = hi;
    }
    out.eigenvalues = {Cplx(rr[0]), Cplx(rr[1]), Cplx(rr[2])};
    out.j = Mat3::diag(rr[0], rr[1], rr[2]);
    out.q = Mat3::from_columns(real_null_vector(m, rr[0]), real_null_vector(m, rr[1]),
                               real_null_vector(m, rr[2]));
    return out;
}

FamilyEigenbasis family_eigenbasis(double r, double k) {
    if (!(r > 0.0) || r > 1.0)
        throw std::domain_error("family_eigenbasis: r must be in (0, 1]");
    if (std::abs(k * k - (1.0 + r - 2.0 * r * r)) > 1e-12)
        throw std::domain_error("family_eigenbasis: (r, k) not on the invariant family");
    const double opp = 1.0 + 2.0 * r;
    const double n = std::sqrt(k * k + opp * opp);
    FamilyEigenbasis out;
    out.v1 = Vec3{opp, 0.0, k} / n;
    out.v2 = Vec3{0.0, 1.0, 0.0};
    out.v3 = Vec3{k, 0.0, opp} / n;
    out.q = Mat3::from_columns(out.v1, out.v2, out.v3);
    return out;
}

Mat3 jordan_evolution_rhs(const Mat3& j) {
    const Mat3 j2 = j * j;
    const double third_tr = trace(j2) / 3.0;
    Mat3 d = -j2;
    d(0, 0) += third_tr;
    d(1, 1) += third_tr;
    d(2, 2) += third_tr;
    return d;
}

}  // namespace linflow
