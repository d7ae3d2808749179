#include "atlas/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "atlas/orbit.hpp"

namespace atlas {

namespace {

double turn_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
    Vec2 u = b - a, v = c - b;
    double nu = std::hypot(u.x, u.y), nv = std::hypot(v.x, v.y);
    if (nu == 0.0 || nv == 0.0) return 0.0;
    double ct = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
    return std::acos(ct);
}

} // namespace

ManifoldArc make_arc(std::vector<Vec2> pts, ManifoldSide side) {
    ManifoldArc arc;
    arc.side = side;
    double s = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) s += norm(pts[i] - pts[i - 1]);
        arc.nodes.push_back({pts[i], s});
    }
    return arc;
}

std::vector<ArcNode> push_segment(const MapFamily& fam, const ParamPoint& p,
                                  const std::function<Vec2(double)>& seed, int iterations,
                                  const GrowOptions& opts, bool* truncated) {
    struct Item {
        double tau;
        Vec2 z;
        bool ok;
    };
    auto image = [&](double tau) -> Item {
        Vec2 z0 = seed(tau);
        if (!std::isfinite(z0.x) || !std::isfinite(z0.y) || std::hypot(z0.x, z0.y) > opts.bailout)
            return {tau, z0, false};
        V2<double> z{z0.x, z0.y};
        for (int i = 0; i < iterations; ++i) {
            z = eval(fam, p.v, z);
            if (!std::isfinite(z.x) || !std::isfinite(z.y) || std::hypot(z.x, z.y) > opts.bailout)
                return {tau, Vec2{z.x, z.y}, false};
        }
        return {tau, Vec2{z.x, z.y}, true};
    };

    std::deque<Item> items;
    int coarse = 16;
    for (int i = 0; i <= coarse; ++i) items.push_back(image(double(i) / coarse));

    if (truncated) *truncated = false;
    std::vector<ArcNode> out;
    // refine left-to-right: ensure |seg| <= cap and turn <= cap by inserting midpoints
    std::vector<Item> acc;
    acc.push_back(items.front());
    items.pop_front();
    while (!items.empty()) {
        Item next = items.front();
        const Item& prev = acc.back();
        bool need_split = false;
        if (prev.ok && next.ok) {
            double seg = norm(next.z - prev.z);
            if (seg > opts.seg_cap) need_split = true;
            if (!need_split && acc.size() >= 2 && acc[acc.size() - 2].ok) {
                if (turn_angle(acc[acc.size() - 2].z, prev.z, next.z) > opts.angle_cap)
                    need_split = true;
            }
        } else if (prev.ok != next.ok) {
            need_split = true; // bracket the escape boundary finely
        }
        double dtau = next.tau - prev.tau;
        if (need_split && dtau > opts.min_dp) {
            items.push_front(image(prev.tau + 0.5 * dtau));
            if (acc.size() + items.size() > opts.node_cap)
                throw BudgetError("push_segment exceeded node cap");
            continue;
        }
        if (need_split && truncated) *truncated = true; // cap unreachable at min step
        items.pop_front();
        acc.push_back(next);
    }
    double s = 0.0;
    Vec2 last{};
    bool have_last = false;
    for (const Item& it : acc) {
        if (!it.ok) { have_last = false; continue; }
        if (have_last) s += norm(it.z - last);
        out.push_back({it.z, s});
        last = it.z;
        have_last = true;
    }
    return out;
}

ManifoldArc grow_manifold(const MapFamily& fam, const ParamPoint& p, const Saddle& s,
                          ManifoldSide side, double arclength_budget, const GrowOptions& opts) {
    if (arclength_budget <= 0.0) throw DomainError("arclength budget must be positive");
    ManifoldArc arc;
    arc.side = side;
    arc.source = s;

    const bool unstable = (side == ManifoldSide::unstable);
    Vec2 dir = unstable ? s.ev_unstable : s.ev_stable;
    double eig = unstable ? s.mu : s.lambda;
    if (!unstable && eig == 0.0)
        throw DomainError("stable side of a non-invertible slice; use preimage curves");
    double ratio = std::fabs(unstable ? eig : 1.0 / eig);
    int steps_per_ring = (eig < 0.0) ? 2 * s.period : s.period; // negative eigenvalue: use F^2
    if (eig < 0.0) ratio *= ratio;

    // inverse map for the stable side (Newton; analytic for the Henon kind)
    auto inv = [&](Vec2 w, Vec2 seed_z) -> Vec2 {
        if (fam.kind == FamilyKind::henon && p[1] != 0.0) {
            return {w.y, (p[0] + w.y * w.y - w.x) / p[1]};
        }
        Vec2 z = seed_z;
        for (int it = 0; it < 60; ++it) {
            Vec2 fz = to_vec2d(eval(fam, p.v, V2<double>{z.x, z.y}));
            Vec2 r = fz - w;
            if (norm(r) < 1e-13) return z;
            Mat2 J = to_mat2d(jacobian(fam, p.v, V2<double>{z.x, z.y}));
            z = z - solve2(J, r);
        }
        throw ConvergenceError("inverse-map Newton failed growing stable arc");
    };

    // fundamental ring [delta0, delta0*ratio] along the eigenvector
    auto ring = [&](double tau) -> Vec2 {
        double r = opts.delta0 * std::pow(ratio, tau);
        return s.location + (double(opts.branch) * r) * dir;
    };

    auto apply_m = [&](Vec2 z, int m) -> std::optional<Vec2> {
        if (unstable) {
            V2<double> w{z.x, z.y};
            for (int i = 0; i < m * steps_per_ring; ++i) {
                w = eval(fam, p.v, w);
                if (!std::isfinite(w.x) || !std::isfinite(w.y) ||
                    std::hypot(w.x, w.y) > opts.bailout)
                    return std::nullopt;
            }
            return Vec2{w.x, w.y};
        }
        Vec2 w = z;
        Vec2 guide = z; // previous preimage as Newton seed
        for (int i = 0; i < m * steps_per_ring; ++i) {
            w = inv(w, guide);
            guide = w;
            if (std::hypot(w.x, w.y) > opts.bailout) return std::nullopt;
        }
        return w;
    };

    arc.nodes.push_back({ring(0.0), 0.0});
    int m = 0;
    while (arc.length() < arclength_budget && arc.nodes.size() < opts.node_cap) {
        bool trunc = false;
        bool bad = false;
        std::vector<ArcNode> img = push_segment(
            fam, p,
            [&](double tau) {
                auto w = apply_m(ring(tau), m);
                if (!w) { bad = true; return Vec2{std::nan(""), std::nan("")}; }
                return *w;
            },
            0, opts, &trunc);
        if (bad) break;
        if (trunc) arc.truncated = true;
        // append, skipping the duplicated junction node
        for (std::size_t i = (m == 0 ? 0 : 1); i < img.size(); ++i) {
            const ArcNode& nd = img[i];
            if (!arc.nodes.empty()) {
                double seg = norm(nd.z - arc.nodes.back().z);
                arc.max_seg = std::max(arc.max_seg, seg);
                if (arc.nodes.size() >= 2)
                    arc.max_turn = std::max(
                        arc.max_turn, turn_angle(arc.nodes[arc.nodes.size() - 2].z,
                                                 arc.nodes.back().z, nd.z));
                arc.nodes.push_back({nd.z, arc.nodes.back().s + seg});
            } else {
                arc.nodes.push_back({nd.z, 0.0});
            }
            if (arc.nodes.back().s >= arclength_budget) break;
        }
        ++m;
        if (m > 200) break;
    }
    if (arc.nodes.size() >= opts.node_cap)
        throw BudgetError("manifold refinement exceeded node cap");
    return arc;
}

namespace {

// segment-segment intersection with orientation tests
struct SegHit {
    bool hit = false;
    bool collinear_overlap = false;
    double tu = 0.0, tv = 0.0;
    Vec2 q{};
};

SegHit seg_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
    SegHit h;
    Vec2 r = a1 - a0, s = b1 - b0;
    double rxs = cross(r, s);
    Vec2 qp = b0 - a0;
    double qpxr = cross(qp, r);
    if (rxs == 0.0) {
        if (qpxr == 0.0) {
            // collinear: overlap test via projections
            double rr = dot(r, r);
            if (rr == 0.0) return h;
            double t0 = dot(qp, r) / rr;
            double t1 = t0 + dot(s, r) / rr;
            if (t1 < t0) std::swap(t0, t1);
            if (t1 >= 0.0 && t0 <= 1.0 && t1 - t0 > 1e-15) h.collinear_overlap = true;
        }
        return h;
    }
    double t = cross(qp, s) / rxs;
    double u = qpxr / rxs;
    if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) {
        h.hit = true;
        h.tu = t;
        h.tv = u;
        h.q = a0 + t * r;
    }
    return h;
}

} // namespace

IntersectionResult find_homoclinic_intersections(const ManifoldArc& arcU, const ManifoldArc& arcS,
                                                 const IntersectOptions& opts) {
    IntersectionResult res;
    if (arcU.nodes.size() < 2 || arcS.nodes.size() < 2) return res;

    // bucket the target arc segments on a uniform grid for the sweep
    double cell = std::max(1e-12, 4.0 * std::max(arcS.length(), 1e-12) / double(arcS.nodes.size()));
    auto key = [&](double x, double y) {
        return std::pair<long long, long long>{(long long)std::floor(x / cell),
                                               (long long)std::floor(y / cell)};
    };
    std::map<std::pair<long long, long long>, std::vector<std::size_t>> grid;
    for (std::size_t j = 0; j + 1 < arcS.nodes.size(); ++j) {
        Vec2 a = arcS.nodes[j].z, b = arcS.nodes[j + 1].z;
        double x0 = std::min(a.x, b.x), x1 = std::max(a.x, b.x);
        double y0 = std::min(a.y, b.y), y1 = std::max(a.y, b.y);
        auto k0 = key(x0, y0), k1 = key(x1, y1);
        for (long long gx = k0.first; gx <= k1.first; ++gx)
            for (long long gy = k0.second; gy <= k1.second; ++gy)
                grid[{gx, gy}].push_back(j);
    }

    for (std::size_t i = 0; i + 1 < arcU.nodes.size(); ++i) {
        Vec2 a = arcU.nodes[i].z, b = arcU.nodes[i + 1].z;
        double x0 = std::min(a.x, b.x), x1 = std::max(a.x, b.x);
        double y0 = std::min(a.y, b.y), y1 = std::max(a.y, b.y);
        auto k0 = key(x0, y0), k1 = key(x1, y1);
        std::vector<std::size_t> cand;
        for (long long gx = k0.first; gx <= k1.first; ++gx)
            for (long long gy = k0.second; gy <= k1.second; ++gy) {
                auto it = grid.find({gx, gy});
                if (it != grid.end()) cand.insert(cand.end(), it->second.begin(), it->second.end());
            }
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (std::size_t j : cand) {
            SegHit h = seg_intersect(a, b, arcS.nodes[j].z, arcS.nodes[j + 1].z);
            if (h.collinear_overlap) {
                res.degenerate_overlap = true;
                res.points.clear();
                return res;
            }
            if (!h.hit) continue;
            Vec2 tu = b - a;
            Vec2 tv = arcS.nodes[j + 1].z - arcS.nodes[j].z;
            double ang = std::asin(std::clamp(
                std::fabs(cross(tu, tv)) / (std::hypot(tu.x, tu.y) * std::hypot(tv.x, tv.y)), 0.0,
                1.0));
            if (ang <= opts.trans_floor) continue;
            HomoclinicPoint hp;
            hp.q = h.q;
            hp.angle = ang;
            hp.su = arcU.nodes[i].s + h.tu * (arcU.nodes[i + 1].s - arcU.nodes[i].s);
            hp.ss = arcS.nodes[j].s + h.tv * (arcS.nodes[j + 1].s - arcS.nodes[j].s);
            res.points.push_back(hp);
        }
    }
    // deduplicate hits at shared segment endpoints
    std::sort(res.points.begin(), res.points.end(),
              [](const HomoclinicPoint& a, const HomoclinicPoint& b) { return a.su < b.su; });
    std::vector<HomoclinicPoint> uniq;
    for (const auto& hp : res.points) {
        if (!uniq.empty() && std::fabs(uniq.back().su - hp.su) < 1e-12 &&
            norm(uniq.back().q - hp.q) < 1e-12)
            continue;
        uniq.push_back(hp);
    }
    res.points = std::move(uniq);
    return res;
}

} // namespace atlas
