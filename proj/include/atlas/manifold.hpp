// Stable/unstable manifold arcs, homoclinic intersections, quadratic
// tangency detection and continuation of the tangency locus.

#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "atlas/family.hpp"
#include "atlas/saddle.hpp"

namespace atlas {

enum class ManifoldSide { stable, unstable };

struct ArcNode {
    Vec2 z{};
    double s = 0.0; // accumulated arclength
};

struct ManifoldArc {
    ManifoldSide side = ManifoldSide::unstable;
    std::vector<ArcNode> nodes;
    Saddle source{};
    double max_turn = 0.0;   // refinement stats
    double max_seg = 0.0;
    bool truncated = false;  // fold sharper than the angle cap

    double length() const { return nodes.empty() ? 0.0 : nodes.back().s; }
};

struct GrowOptions {
    double delta0 = 1e-6;      // fundamental-domain seed offset along the eigenvector
    double angle_cap = 0.2;    // max turning angle between consecutive segments (rad)
    double seg_cap = 1e-2;     // max segment length
    std::size_t node_cap = 400000;
    double bailout = 1e4;      // stop a branch wandering off
    double min_dp = 1e-14;     // forbid parameter steps below this (fold truncation)
    int branch = +1;           // which side of the eigenvector to grow
};

// Adaptive push-forward of a seed curve: tau in [0,1] -> plane, mapped m times.
// Inserts parameter midpoints until segment-length and turning caps hold.
std::vector<ArcNode> push_segment(const MapFamily& fam, const ParamPoint& p,
                                  const std::function<Vec2(double)>& seed, int iterations,
                                  const GrowOptions& opts, bool* truncated = nullptr);

ManifoldArc grow_manifold(const MapFamily& fam, const ParamPoint& p, const Saddle& s,
                          ManifoldSide side, double arclength_budget, const GrowOptions& opts = {});

struct HomoclinicPoint {
    Vec2 q{};
    double angle = 0.0;      // crossing angle, in (0, pi/2]
    double su = 0.0, ss = 0.0; // arclength positions on the two arcs
};

struct IntersectOptions {
    double trans_floor = 0.0;  // discard crossings at angle <= floor
};

struct IntersectionResult {
    std::vector<HomoclinicPoint> points;
    bool degenerate_overlap = false; // arcs share a sub-segment
};

IntersectionResult find_homoclinic_intersections(const ManifoldArc& arcU, const ManifoldArc& arcS,
                                                 const IntersectOptions& opts = {});

enum class TangencyKind { primary, secondary };

struct TangencyEvent {
    ParamPoint param;        // full parameter point of the family
    double t = 0.0;          // slice coordinate
    double a = 0.0;          // located unfolding coordinate
    Vec2 q1{};               // tangency point
    double quad_coeff = 0.0; // second-order contact coefficient
    double unfolding_speed = 0.0;
    TangencyKind kind = TangencyKind::primary;
    int n = 0, n0 = 0;       // labels for secondary events
};

// Arc pair at a given scan parameter; first = moving/folding arc, second = target.
using ArcGenerator = std::function<std::pair<ManifoldArc, ManifoldArc>(double)>;

struct TangencyOptions {
    double tang_tol = 1e-10;      // bisection tolerance on the scan parameter
    double nondeg_floor = 1e-6;   // |quad_coeff| below this is a degenerate tangency
    Vec2 window_lo{-1e300, -1e300}, window_hi{1e300, 1e300};
    int max_bisect = 200;
};

// Signed extremal distance between the advancing fold of `moving` and `target`,
// oriented by the fold normal. Changes sign exactly when the local intersection
// count jumps by two.
struct GapInfo {
    double gap = 0.0;
    Vec2 tip{}, foot{};
    Vec2 target_tangent{};
    bool valid = false;
};
GapInfo tangency_gap(const ManifoldArc& moving, const ManifoldArc& target, Vec2 window_lo,
                     Vec2 window_hi);

TangencyEvent detect_tangency_scan(const ArcGenerator& gen, double a_lo, double a_hi,
                                   const TangencyOptions& opts = {});

// Family-level wrapper: arcs recomputed per a at fixed t (parameter index ia
// varies, it is the unfolding direction).
TangencyEvent detect_tangency(const MapFamily& fam, const ParamPoint& base, int ia, double a_lo,
                              double a_hi, const Saddle& seed_saddle, Vec2 saddle_seed,
                              double budget_u, double budget_s, const GrowOptions& gopts = {},
                              const TangencyOptions& topts = {});

// Central difference of the tangency gap with respect to the scan parameter.
double unfolding_speed(const ArcGenerator& gen, const TangencyEvent& ev, double h_step,
                       const TangencyOptions& opts = {});

struct LocusSample {
    double t = 0.0, a = 0.0;
    double quad_coeff = 0.0, speed = 0.0;
    bool ok = false;
};

// Predictor-corrector continuation of a = tang(t). gen_at(t) produces the
// a-scan generator for that slice.
std::vector<LocusSample> continue_tangency_locus(
    const std::function<ArcGenerator(double)>& gen_at, const std::vector<double>& t_grid,
    const TangencyEvent& seed, double bracket_halfwidth, const TangencyOptions& opts = {});

// Helper used by tests and by the secondary-tangency scan: wrap explicit
// polylines as arcs.
ManifoldArc make_arc(std::vector<Vec2> pts, ManifoldSide side);

} // namespace atlas
