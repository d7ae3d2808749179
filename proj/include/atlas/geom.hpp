// Small fixed-size planar linear algebra used throughout: vectors, 2x2
// matrices, eigen-decomposition and QR with positive diagonal.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "atlas/dd.hpp"

namespace atlas {

template <class S>
struct V2 {
    S x{}, y{};
    V2() = default;
    V2(S xx, S yy) : x(xx), y(yy) {}

    friend V2 operator+(const V2& a, const V2& b) { return {a.x + b.x, a.y + b.y}; }
    friend V2 operator-(const V2& a, const V2& b) { return {a.x - b.x, a.y - b.y}; }
    friend V2 operator*(const S& s, const V2& a) { return {s * a.x, s * a.y}; }
    friend V2 operator*(const V2& a, const S& s) { return {a.x * s, a.y * s}; }
    friend V2 operator/(const V2& a, const S& s) { return {a.x / s, a.y / s}; }
    V2& operator+=(const V2& o) { x += o.x; y += o.y; return *this; }
    V2& operator-=(const V2& o) { x -= o.x; y -= o.y; return *this; }
};

using Vec2 = V2<double>;

template <class S>
S dot(const V2<S>& a, const V2<S>& b) { return a.x * b.x + a.y * b.y; }

template <class S>
S cross(const V2<S>& a, const V2<S>& b) { return a.x * b.y - a.y * b.x; }

template <class S>
S norm(const V2<S>& a) { return scalar::ssqrt(dot(a, a)); }

inline Vec2 to_vec2d(const V2<DD>& v) { return {v.x.hi, v.y.hi}; }
inline Vec2 to_vec2d(const Vec2& v) { return v; }

// Row-major: [a b; c d]
template <class S>
struct M2 {
    S a{}, b{}, c{}, d{};
    M2() = default;
    M2(S aa, S bb, S cc, S dd_) : a(aa), b(bb), c(cc), d(dd_) {}
    static M2 identity() { return {S(1), S(0), S(0), S(1)}; }

    friend M2 operator*(const M2& m, const M2& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
                m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }
    friend V2<S> operator*(const M2& m, const V2<S>& v) {
        return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
    }
    friend M2 operator+(const M2& m, const M2& n) {
        return {m.a + n.a, m.b + n.b, m.c + n.c, m.d + n.d};
    }
    friend M2 operator-(const M2& m, const M2& n) {
        return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
    }
    friend M2 operator*(const S& s, const M2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }

    S det() const { return a * d - b * c; }
    S trace() const { return a + d; }
    M2 inverse() const {
        S dt = det();
        S ia = d / dt, ib = S(0) - b / dt, ic = S(0) - c / dt, id = a / dt;
        return {ia, ib, ic, id};
    }
};

using Mat2 = M2<double>;

inline Mat2 to_mat2d(const M2<DD>& m) { return {m.a.hi, m.b.hi, m.c.hi, m.d.hi}; }
inline Mat2 to_mat2d(const Mat2& m) { return m; }

template <class S>
V2<S> solve2(const M2<S>& m, const V2<S>& rhs) {
    S dt = m.det();
    return {(rhs.x * m.d - rhs.y * m.b) / dt, (m.a * rhs.y - m.c * rhs.x) / dt};
}

// Real eigen-decomposition of a 2x2 matrix, eigenvalues sorted by modulus
// ascending. Empty when the spectrum is complex.
struct EigenPair {
    double lam1 = 0.0, lam2 = 0.0; // |lam1| <= |lam2|
    Vec2 v1{}, v2{};               // unit eigenvectors
};

inline std::optional<EigenPair> real_eigs(const Mat2& m) {
    double tr = m.trace(), dt = m.det();
    double disc = tr * tr - 4.0 * dt;
    if (disc < 0.0) return std::nullopt;
    double sq = std::sqrt(disc);
    double l1 = 0.5 * (tr - sq), l2 = 0.5 * (tr + sq);
    if (std::fabs(l1) > std::fabs(l2)) std::swap(l1, l2);
    auto eigvec = [&](double l) -> Vec2 {
        // (m - l I) v = 0; pick the better-conditioned row
        Vec2 r1{m.a - l, m.b}, r2{m.c, m.d - l};
        Vec2 v = (std::hypot(r1.x, r1.y) > std::hypot(r2.x, r2.y)) ? Vec2{-r1.y, r1.x}
                                                                   : Vec2{-r2.y, r2.x};
        double n = std::hypot(v.x, v.y);
        if (n == 0.0) return {1.0, 0.0};
        return v / n;
    };
    EigenPair e;
    e.lam1 = l1;
    e.lam2 = l2;
    e.v1 = eigvec(l1);
    e.v2 = eigvec(l2);
    return e;
}

// QR factorization A = Q R with R upper triangular, positive diagonal.
template <class S>
void qr2(const M2<S>& A, M2<S>& Q, M2<S>& R) {
    V2<S> q1{A.a, A.c};
    S n1 = norm(q1);
    if (to_double(n1) == 0.0) { // degenerate first column: fall back to identity frame
        Q = M2<S>::identity();
        R = A;
        return;
    }
    q1 = q1 / n1;
    V2<S> a2{A.b, A.d};
    S r12 = dot(q1, a2);
    V2<S> q2 = a2 - r12 * q1;
    S n2 = norm(q2);
    if (to_double(n2) == 0.0) {
        q2 = V2<S>{S(0) - q1.y, q1.x};
        n2 = S(0);
    } else {
        q2 = q2 / n2;
    }
    // enforce positive diagonal
    S r22 = dot(q2, a2);
    if (to_double(r22) < 0.0) {
        q2 = S(-1) * q2;
        r22 = S(0) - r22;
    }
    Q = {q1.x, q2.x, q1.y, q2.y};
    R = {n1, r12, S(0), r22};
}

} // namespace atlas
