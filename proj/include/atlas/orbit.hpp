// Precision-controlled orbit iteration with a per-step orthogonal-triangular
// cocycle. The cocycle gives DF^n = Q_n R_n ... R_1 without overflow and is
// what the Lyapunov and Collet-Eckmann diagnostics consume.

#pragma once

#include <vector>

#include "atlas/family.hpp"
#include "atlas/geom.hpp"

namespace atlas {

struct CocycleStep {
    double r11 = 1.0, r12 = 0.0, r22 = 1.0; // R factor, positive diagonal
};

struct OrbitSegment {
    std::vector<Vec2> points;        // length n+1 when no escape
    std::vector<CocycleStep> cocycle; // one per step taken
    Mat2 q_final = Mat2::identity();
    Precision mode = Precision::dbl;
    bool escaped = false;
    int escape_index = -1; // first index with |z| > bailout
    double condition_bound = 1.0;
};

struct OrbitOptions {
    double bailout = 1e6;
    bool with_cocycle = true;
};

OrbitSegment iterate_orbit(const MapFamily& fam, const ParamPoint& p, Vec2 z0, int n,
                           Precision mode = Precision::dbl, const OrbitOptions& opts = {});

// DF^n by direct matrix products (test oracle for the cocycle).
Mat2 df_power(const MapFamily& fam, const ParamPoint& p, Vec2 z0, int n);

// Product of the cocycle factors Q_n R_n ... R_1.
Mat2 cocycle_product(const OrbitSegment& seg);

template <class S>
V2<S> iterate_point(const MapFamily& fam, const std::vector<S>& p, V2<S> z, int n) {
    for (int i = 0; i < n; ++i) z = eval(fam, p, z);
    return z;
}

template <class S>
M2<S> df_power_at(const MapFamily& fam, const std::vector<S>& p, V2<S> z, int n) {
    M2<S> J = M2<S>::identity();
    for (int i = 0; i < n; ++i) {
        J = jacobian(fam, p, z) * J;
        z = eval(fam, p, z);
    }
    return J;
}

} // namespace atlas
