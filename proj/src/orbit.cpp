#include "atlas/orbit.hpp"

#include <cmath>

namespace atlas {

namespace {

template <class S>
OrbitSegment run(const MapFamily& fam, const std::vector<S>& p, Vec2 z0d, int n,
                 Precision mode, const OrbitOptions& opts) {
    OrbitSegment seg;
    seg.mode = mode;
    seg.points.reserve(std::size_t(n) + 1);
    V2<S> z{S(z0d.x), S(z0d.y)};
    M2<S> Q = M2<S>::identity();
    seg.points.push_back(to_vec2d(z));
    double cond = 1.0;
    for (int k = 0; k < n; ++k) {
        if (opts.with_cocycle) {
            M2<S> A = jacobian(fam, p, z) * Q;
            M2<S> R;
            qr2(A, Q, R);
            seg.cocycle.push_back({to_double(R.a), to_double(R.b), to_double(R.d)});
            double rmax = std::max({std::fabs(to_double(R.a)), std::fabs(to_double(R.b)),
                                    std::fabs(to_double(R.d)), 1.0});
            cond = std::max(cond, rmax);
        }
        z = eval(fam, p, z);
        Vec2 zd = to_vec2d(z);
        if (!std::isfinite(zd.x) || !std::isfinite(zd.y) ||
            std::hypot(zd.x, zd.y) > opts.bailout) {
            seg.escaped = true;
            seg.escape_index = k + 1;
            seg.points.push_back(zd);
            break;
        }
        seg.points.push_back(zd);
    }
    seg.q_final = to_mat2d(Q);
    seg.condition_bound = cond;
    return seg;
}

} // namespace

OrbitSegment iterate_orbit(const MapFamily& fam, const ParamPoint& p, Vec2 z0, int n,
                           Precision mode, const OrbitOptions& opts) {
    if (n < 1) throw DomainError("iterate_orbit needs n >= 1");
    if (!std::isfinite(z0.x) || !std::isfinite(z0.y)) throw DomainError("non-finite seed");
    if (mode == Precision::extended) return run<DD>(fam, as_dd(ParamPoint{p}), z0, n, mode, opts);
    return run<double>(fam, p.v, z0, n, mode, opts);
}

Mat2 df_power(const MapFamily& fam, const ParamPoint& p, Vec2 z0, int n) {
    return df_power_at(fam, p.v, V2<double>{z0.x, z0.y}, n);
}

Mat2 cocycle_product(const OrbitSegment& seg) {
    Mat2 R = Mat2::identity();
    for (const CocycleStep& s : seg.cocycle) {
        Mat2 Rk{s.r11, s.r12, 0.0, s.r22};
        R = Rk * R;
    }
    return seg.q_final * R;
}

} // namespace atlas
