// Compensated double-double arithmetic (~106-bit significand).
//
// Standard error-free transformations (Dekker/Knuth two-sum, FMA product)
// assembled into an unevaluated hi+lo pair. This is the "extended" precision
// mode used where parameter strips shrink below double resolution; it is not
// arbitrary precision.

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace atlas {

namespace eft {

inline double two_sum(double a, double b, double& err) {
    double s = a + b;
    double bb = s - a;
    err = (a - (s - bb)) + (b - bb);
    return s;
}

// requires |a| >= |b|
inline double quick_two_sum(double a, double b, double& err) {
    double s = a + b;
    err = b - (s - a);
    return s;
}

inline double two_prod(double a, double b, double& err) {
    double p = a * b;
    err = std::fma(a, b, -p);
    return p;
}

} // namespace eft

struct DD {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DD() = default;
    constexpr DD(double h) : hi(h), lo(0.0) {}
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi; }

    static constexpr double eps() { return 4.93038065763132e-32; } // 2^-104

    DD operator-() const { return DD(-hi, -lo); }

    friend DD operator+(const DD& a, const DD& b) {
        double s1, s2, t1, t2;
        s1 = eft::two_sum(a.hi, b.hi, s2);
        t1 = eft::two_sum(a.lo, b.lo, t2);
        s2 += t1;
        s1 = eft::quick_two_sum(s1, s2, s2);
        s2 += t2;
        s1 = eft::quick_two_sum(s1, s2, s2);
        return DD(s1, s2);
    }
    friend DD operator-(const DD& a, const DD& b) { return a + (-b); }
    friend DD operator*(const DD& a, const DD& b) {
        double p1, p2;
        p1 = eft::two_prod(a.hi, b.hi, p2);
        p2 += a.hi * b.lo + a.lo * b.hi;
        p1 = eft::quick_two_sum(p1, p2, p2);
        return DD(p1, p2);
    }
    friend DD operator/(const DD& a, const DD& b) {
        double q1 = a.hi / b.hi;
        DD r = a - b * DD(q1);
        double q2 = r.hi / b.hi;
        r = r - b * DD(q2);
        double q3 = r.hi / b.hi;
        double s1, s2;
        s1 = eft::quick_two_sum(q1, q2, s2);
        DD q(s1, s2);
        return q + DD(q3);
    }

    DD& operator+=(const DD& o) { *this = *this + o; return *this; }
    DD& operator-=(const DD& o) { *this = *this - o; return *this; }
    DD& operator*=(const DD& o) { *this = *this * o; return *this; }
    DD& operator/=(const DD& o) { *this = *this / o; return *this; }

    friend bool operator<(const DD& a, const DD& b) {
        return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
    }
    friend bool operator>(const DD& a, const DD& b) { return b < a; }
    friend bool operator<=(const DD& a, const DD& b) { return !(b < a); }
    friend bool operator>=(const DD& a, const DD& b) { return !(a < b); }
    friend bool operator==(const DD& a, const DD& b) { return a.hi == b.hi && a.lo == b.lo; }
    friend bool operator!=(const DD& a, const DD& b) { return !(a == b); }
};

inline DD abs(const DD& a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline DD sqrt(const DD& a) {
    if (a.hi == 0.0 && a.lo == 0.0) return DD(0.0);
    // one Karp/Markstein correction step on the double estimate
    double x = 1.0 / std::sqrt(a.hi);
    double ax = a.hi * x;
    DD axd(ax);
    DD err = a - axd * axd;
    return axd + DD(err.hi * (x * 0.5));
}

inline bool isfinite(const DD& a) { return std::isfinite(a.hi) && std::isfinite(a.lo); }

inline double to_double(const DD& a) { return a.hi; }
inline double to_double(double a) { return a; }

// Scalar shims so numeric kernels template cleanly over double and DD.
namespace scalar {
inline double sabs(double x) { return std::fabs(x); }
inline DD sabs(const DD& x) { return abs(x); }
inline double ssqrt(double x) { return std::sqrt(x); }
inline DD ssqrt(const DD& x) { return sqrt(x); }
inline bool sfinite(double x) { return std::isfinite(x); }
inline bool sfinite(const DD& x) { return isfinite(x); }
template <class S> struct eps_of;
template <> struct eps_of<double> { static constexpr double value = std::numeric_limits<double>::epsilon(); };
template <> struct eps_of<DD> { static constexpr double value = DD::eps(); };
} // namespace scalar

} // namespace atlas
