#include <algorithm>
#include <cmath>

#include "atlas/manifold.hpp"

namespace atlas {

namespace {

struct Foot {
    Vec2 q{};
    Vec2 tangent{};
    double dist = 0.0;   // unsigned
    double side = 0.0;   // sign of cross(tangent, p - q)
    bool valid = false;
};

Foot nearest_on_arc(const ManifoldArc& arc, Vec2 pnt) {
    Foot best;
    double bd = 1e300;
    for (std::size_t j = 0; j + 1 < arc.nodes.size(); ++j) {
        Vec2 a = arc.nodes[j].z, b = arc.nodes[j + 1].z;
        Vec2 d = b - a;
        double dd = dot(d, d);
        if (dd == 0.0) continue;
        double t = std::clamp(dot(pnt - a, d) / dd, 0.0, 1.0);
        Vec2 q = a + t * d;
        double dist = norm(pnt - q);
        if (dist < bd) {
            bd = dist;
            best.q = q;
            best.tangent = d / std::sqrt(dd);
            best.dist = dist;
            best.side = cross(best.tangent, pnt - q) >= 0.0 ? 1.0 : -1.0;
            best.valid = true;
        }
    }
    return best;
}

bool in_window(Vec2 z, Vec2 lo, Vec2 hi) {
    return z.x >= lo.x && z.x <= hi.x && z.y >= lo.y && z.y <= hi.y;
}

} // namespace

GapInfo tangency_gap(const ManifoldArc& moving, const ManifoldArc& target, Vec2 lo, Vec2 hi) {
    GapInfo g;
    if (moving.nodes.size() < 2 || target.nodes.size() < 2) return g;
    // the advancing fold tip = node of the moving arc extremal toward the target:
    // smallest signed distance, where the sign is the side of the target curve
    double best = 1e300;
    for (const ArcNode& nd : moving.nodes) {
        if (!in_window(nd.z, lo, hi)) continue;
        Foot f = nearest_on_arc(target, nd.z);
        if (!f.valid) continue;
        double sd = f.side * f.dist;
        if (sd < best) {
            best = sd;
            g.gap = sd;
            g.tip = nd.z;
            g.foot = f.q;
            g.target_tangent = f.tangent;
            g.valid = true;
        }
    }
    return g;
}

namespace {

// quadratic contact coefficient of the moving arc against the target arc,
// measured in the (tangent, normal) frame of the target at the tangency foot
double fit_quad_coeff(const ManifoldArc& moving, const ManifoldArc& target, const GapInfo& gap) {
    Vec2 t = gap.target_tangent;
    Vec2 n{-t.y, t.x};
    auto collect = [&](const ManifoldArc& arc, Vec2 origin, double span) {
        std::vector<Vec2> loc; // (xi, eta)
        for (const ArcNode& nd : arc.nodes) {
            Vec2 d = nd.z - origin;
            double xi = dot(d, t), eta = dot(d, n);
            if (std::fabs(xi) <= span) loc.push_back({xi, eta});
        }
        return loc;
    };
    // pick the fitting span from local node spacing near the tip
    Foot f0 = nearest_on_arc(moving, gap.tip);
    (void)f0;
    double span = 0.0;
    {
        double dmin = 1e300;
        std::size_t itip = 0;
        for (std::size_t i = 0; i < moving.nodes.size(); ++i) {
            double d = norm(moving.nodes[i].z - gap.tip);
            if (d < dmin) { dmin = d; itip = i; }
        }
        std::size_t a = itip >= 6 ? itip - 6 : 0;
        std::size_t b = std::min(moving.nodes.size() - 1, itip + 6);
        span = std::max(norm(moving.nodes[a].z - gap.tip), norm(moving.nodes[b].z - gap.tip));
        if (span == 0.0) span = 1e-6;
    }
    auto lsq_quad = [&](const std::vector<Vec2>& pts, bool& ok) -> double {
        // eta = c0 + c1 xi + c2 xi^2 by normal equations
        double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0, b0 = 0, b1 = 0, b2 = 0;
        for (const Vec2& q : pts) {
            double x = q.x, y = q.y;
            double x2 = x * x;
            s0 += 1; s1 += x; s2 += x2; s3 += x2 * x; s4 += x2 * x2;
            b0 += y; b1 += x * y; b2 += x2 * y;
        }
        ok = pts.size() >= 5;
        if (!ok) return 0.0;
        // solve 3x3 normal system by Cramer
        double A[3][3] = {{s0, s1, s2}, {s1, s2, s3}, {s2, s3, s4}};
        double B[3] = {b0, b1, b2};
        auto det3 = [](double m[3][3]) {
            return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                   m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                   m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        };
        double D = det3(A);
        if (D == 0.0) { ok = false; return 0.0; }
        double M2[3][3];
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) M2[r][c] = (c == 2) ? B[r] : A[r][c];
        return det3(M2) / D;
    };
    bool okm = false, okt = false;
    double cm = lsq_quad(collect(moving, gap.foot, span), okm);
    double ct = lsq_quad(collect(target, gap.foot, span), okt);
    if (!okm) return 0.0;
    return cm - (okt ? ct : 0.0);
}

} // namespace

TangencyEvent detect_tangency_scan(const ArcGenerator& gen, double a_lo, double a_hi,
                                   const TangencyOptions& opts) {
    auto gap_at = [&](double a) -> GapInfo {
        auto arcs = gen(a);
        return tangency_gap(arcs.first, arcs.second, opts.window_lo, opts.window_hi);
    };
    GapInfo glo = gap_at(a_lo), ghi = gap_at(a_hi);
    if (!glo.valid || !ghi.valid)
        throw BracketError("tangency bracket: gap functional undefined at an endpoint");
    if ((glo.gap > 0.0) == (ghi.gap > 0.0))
        throw BracketError("tangency bracket: no sign change of the fold gap (intersection count "
                           "does not jump)");
    double lo = a_lo, hi = a_hi, flo = glo.gap;
    for (int it = 0; it < opts.max_bisect && (hi - lo) > opts.tang_tol; ++it) {
        double mid = 0.5 * (lo + hi);
        GapInfo gm = gap_at(mid);
        if (!gm.valid) throw BracketError("gap functional lost during bisection");
        if ((gm.gap > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = gm.gap;
        } else {
            hi = mid;
        }
    }
    double a_star = 0.5 * (lo + hi);
    auto arcs = gen(a_star);
    GapInfo g = tangency_gap(arcs.first, arcs.second, opts.window_lo, opts.window_hi);
    TangencyEvent ev;
    ev.a = a_star;
    ev.q1 = g.tip;
    ev.quad_coeff = fit_quad_coeff(arcs.first, arcs.second, g);
    if (std::fabs(ev.quad_coeff) <= opts.nondeg_floor)
        throw ConvergenceError("degenerate tangency: quadratic contact coefficient below floor");
    return ev;
}

double unfolding_speed(const ArcGenerator& gen, const TangencyEvent& ev, double h,
                       const TangencyOptions& opts) {
    auto gap_at = [&](double a) -> double {
        auto arcs = gen(a);
        GapInfo g = tangency_gap(arcs.first, arcs.second, opts.window_lo, opts.window_hi);
        if (!g.valid) throw BracketError("gap undefined while estimating unfolding speed");
        return g.gap;
    };
    return (gap_at(ev.a + h) - gap_at(ev.a - h)) / (2.0 * h);
}

TangencyEvent detect_tangency(const MapFamily& fam, const ParamPoint& base, int ia, double a_lo,
                              double a_hi, const Saddle& seed_saddle, Vec2 saddle_seed,
                              double budget_u, double budget_s, const GrowOptions& gopts,
                              const TangencyOptions& topts) {
    ArcGenerator gen = [&](double a) {
        ParamPoint p = base;
        p[std::size_t(ia)] = a;
        PeriodicPoint pp = find_periodic_point(fam, p, seed_saddle.period, saddle_seed);
        Saddle s = pp.as_saddle();
        GrowOptions gu = gopts;
        ManifoldArc wu = grow_manifold(fam, p, s, ManifoldSide::unstable, budget_u, gu);
        ManifoldArc ws = grow_manifold(fam, p, s, ManifoldSide::stable, budget_s, gu);
        return std::pair<ManifoldArc, ManifoldArc>{wu, ws};
    };
    TangencyEvent ev = detect_tangency_scan(gen, a_lo, a_hi, topts);
    ev.param = base;
    ev.param[std::size_t(ia)] = ev.a;
    ev.unfolding_speed = unfolding_speed(gen, ev, (a_hi - a_lo) * 1e-3, topts);
    return ev;
}

std::vector<LocusSample> continue_tangency_locus(
    const std::function<ArcGenerator(double)>& gen_at, const std::vector<double>& t_grid,
    const TangencyEvent& seed, double halfwidth, const TangencyOptions& opts) {
    std::vector<LocusSample> out;
    long g1 = -1, g2 = -1; // indices of the last two good samples
    for (double t : t_grid) {
        double a_pred = seed.a;
        if (g1 >= 0 && g2 >= 0 && out[g1].t != out[g2].t)
            a_pred = out[g1].a +
                     (out[g1].a - out[g2].a) / (out[g1].t - out[g2].t) * (t - out[g1].t);
        else if (g1 >= 0)
            a_pred = out[g1].a;
        LocusSample smp;
        smp.t = t;
        try {
            ArcGenerator gen = gen_at(t);
            TangencyEvent ev =
                detect_tangency_scan(gen, a_pred - halfwidth, a_pred + halfwidth, opts);
            smp.a = ev.a;
            smp.quad_coeff = ev.quad_coeff;
            smp.speed = unfolding_speed(gen, ev, halfwidth * 1e-2, opts);
            smp.ok = true;
        } catch (const Error&) {
            smp.ok = false; // gap recorded, continuation proceeds from last good point
        }
        out.push_back(smp);
        if (smp.ok) {
            g2 = g1;
            g1 = long(out.size()) - 1;
        }
    }
    return out;
}

} // namespace atlas
