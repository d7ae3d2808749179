// Periodic point location, saddle eigendata, spectral hypothesis checks and
// finite-order polynomial linearizing charts.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atlas/family.hpp"
#include "atlas/geom.hpp"

namespace atlas {

enum class OrbitClass { saddle, sink, source, complex_pair, neutral };

struct Saddle {
    Vec2 location{};
    int period = 1;
    double lambda = 0.0; // stable eigenvalue, |lambda| < 1
    double mu = 0.0;     // unstable eigenvalue, |mu| > 1
    Vec2 ev_stable{};    // unit eigenvectors
    Vec2 ev_unstable{};
    bool dissipative3 = false; // |lambda| |mu|^3 < 1, checked in extended precision
    int nonres_order = 0;      // largest kappa verified
    double newton_residual = 0.0;
};

struct PeriodicPoint {
    Vec2 location{};
    int period = 1;
    Mat2 monodromy{};
    OrbitClass cls = OrbitClass::saddle;
    double eig1 = 0.0, eig2 = 0.0; // real parts; for complex pairs the modulus is stored in both
    Vec2 v1{}, v2{};
    double newton_residual = 0.0;

    bool is_saddle() const { return cls == OrbitClass::saddle; }
    Saddle as_saddle() const; // throws SpectralError unless a saddle
};

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 60;
};

// Damped Newton on G(z) = F^period(z) - z.
PeriodicPoint find_periodic_point(const MapFamily& fam, const ParamPoint& p, int period,
                                  Vec2 seed, const NewtonOptions& opts = {});

struct NonresonanceReport {
    bool ok = true;
    int k1 = 0, k2 = 0;       // offending pair when !ok
    std::string which;        // "lambda=mu^k1" or "mu=lambda^k2"
    int kappa_checked = 0;
};

// Scans lambda != mu^k1 and mu != lambda^k2 for 2 <= k1+k2 <= kappa.
NonresonanceReport check_nonresonance(double lambda, double mu, int kappa, double res_tol = 1e-8);

// Dense polynomial in two variables, coeff(i,j) of u^i v^j, total degree <= deg.
struct Poly2 {
    int deg = 0;
    std::vector<double> c; // (deg+1)*(deg+2)/2 entries, graded-lex

    explicit Poly2(int d = 0) : deg(d), c(std::size_t((d + 1) * (d + 2) / 2), 0.0) {}
    static std::size_t index(int i, int j) {
        int d = i + j;
        return std::size_t(d * (d + 1) / 2 + j);
    }
    double& at(int i, int j) { return c[index(i, j)]; }
    double at(int i, int j) const { return c[index(i, j)]; }
    double eval(double u, double v) const;
};

struct Poly2Map { // planar polynomial map (pair of Poly2)
    Poly2 f, g;
    Vec2 eval(Vec2 u) const { return {f.eval(u.x, u.y), g.eval(u.x, u.y)}; }
};

struct LinearizationChart {
    int degree = 2;
    double lambda = 0.0, mu = 0.0;
    Vec2 saddle{};
    Mat2 frame{}, frame_inv{}; // columns: stable, unstable eigenvectors
    Poly2Map forward;  // h : eigenframe displacement -> linear coordinates
    Poly2Map inverse;  // truncated compositional inverse
    double domain_radius = 0.0;
    double residual_bound = 0.0;     // measured sup |h(G(w)) - L h(w)| on the ball
    double inverse_residual = 0.0;   // measured sup |h^-1(h(w)) - w|

    Vec2 to_linear(Vec2 z) const { return forward.eval(frame_inv * (z - saddle)); }
    Vec2 from_linear(Vec2 u) const { return saddle + frame * inverse.eval(u); }
    std::string to_json_text() const;
};

struct LinearizeOptions {
    double div_tol = 1e-8;        // relative small-divisor guard
    double residual_cap = 1e-2;   // error out when the chart is junk on the ball
    int residual_grid = 24;
};

// Solves h(G(w)) = L h(w) order by order in the Taylor expansion at the
// saddle; requires non-resonance to order >= degree. Saddles of period k
// linearize F^k.
LinearizationChart linearize(const MapFamily& fam, const ParamPoint& p, const Saddle& s,
                             int degree, double radius, const LinearizeOptions& opts = {});

} // namespace atlas
