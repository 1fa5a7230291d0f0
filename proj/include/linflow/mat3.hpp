#ifndef LINFLOW_MAT3_HPP
#define LINFLOW_MAT3_HPP

#include <array>
#include <cmath>

// Minimal fixed-size linear algebra for 3-vectors and real 3x3 matrices.
// Everything is a value type; all operations are pure.

namespace linflow {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return (&x)[i]; }
    double operator[](int i) const { return (&x)[i]; }
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline Vec3 operator*(Vec3 a, double s) { return s * a; }
inline Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) { return a / norm(a); }

// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> m{};

    double& operator()(int i, int j) { return m[3 * i + j]; }
    double operator()(int i, int j) const { return m[3 * i + j]; }

    static Mat3 zero() { return {}; }
    static Mat3 identity() { return diag(1.0, 1.0, 1.0); }
    static Mat3 diag(double a, double b, double c) {
        Mat3 d;
        d(0, 0) = a;
        d(1, 1) = b;
        d(2, 2) = c;
        return d;
    }
    static Mat3 from_rows(Vec3 r0, Vec3 r1, Vec3 r2) {
        return {{r0.x, r0.y, r0.z, r1.x, r1.y, r1.z, r2.x, r2.y, r2.z}};
    }
    static Mat3 from_columns(Vec3 c0, Vec3 c1, Vec3 c2) {
        return {{c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z}};
    }

    Vec3 row(int i) const { return {(*this)(i, 0), (*this)(i, 1), (*this)(i, 2)}; }
    Vec3 column(int j) const { return {(*this)(0, j), (*this)(1, j), (*this)(2, j)}; }
};

inline Mat3 operator+(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (int i = 0; i < 9; ++i) c.m[i] = a.m[i] + b.m[i];
    return c;
}
inline Mat3 operator-(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (int i = 0; i < 9; ++i) c.m[i] = a.m[i] - b.m[i];
    return c;
}
inline Mat3 operator-(const Mat3& a) {
    Mat3 c;
    for (int i = 0; i < 9; ++i) c.m[i] = -a.m[i];
    return c;
}
inline Mat3 operator*(double s, const Mat3& a) {
    Mat3 c;
    for (int i = 0; i < 9; ++i) c.m[i] = s * a.m[i];
    return c;
}
inline Mat3 operator*(const Mat3& a, double s) { return s * a; }

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return c;
}

inline Vec3 operator*(const Mat3& a, Vec3 v) {
    return {dot(a.row(0), v), dot(a.row(1), v), dot(a.row(2), v)};
}

inline Mat3 transpose(const Mat3& a) {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t(i, j) = a(j, i);
    return t;
}

inline double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

inline double det(const Mat3& a) {
    return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
           a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
           a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

// Inverse via the adjugate; callers are responsible for non-singularity.
inline Mat3 inverse(const Mat3& a) {
    const double d = det(a);
    Mat3 inv;
    inv(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / d;
    inv(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / d;
    inv(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / d;
    inv(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / d;
    inv(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / d;
    inv(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / d;
    inv(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / d;
    inv(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / d;
    inv(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / d;
    return inv;
}

inline Mat3 outer(Vec3 a, Vec3 b) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c(i, j) = a[i] * b[j];
    return c;
}

inline double frobenius_norm_sq(const Mat3& a) {
    double s = 0.0;
    for (double v : a.m) s += v * v;
    return s;
}
inline double frobenius_norm(const Mat3& a) { return std::sqrt(frobenius_norm_sq(a)); }

inline double max_abs_entry(const Mat3& a) {
    double s = 0.0;
    for (double v : a.m) s = std::max(s, std::abs(v));
    return s;
}

// The antisymmetric matrix [[0, w3, -w2], [-w3, 0, w1], [w2, -w1, 0]].
// With this orientation, vorticity_matrix(w) * x == -cross(w, x).
inline Mat3 vorticity_matrix(Vec3 w) {
    Mat3 a;
    a(0, 1) = w.z;
    a(0, 2) = -w.y;
    a(1, 0) = -w.z;
    a(1, 2) = w.x;
    a(2, 0) = w.y;
    a(2, 1) = -w.x;
    return a;
}

// Inverse of vorticity_matrix on antisymmetric input.
inline Vec3 axial_vector(const Mat3& a) {
    return {a(1, 2), a(2, 0), a(0, 1)};
}

}  // namespace linflow

#endif  // LINFLOW_MAT3_HPP
