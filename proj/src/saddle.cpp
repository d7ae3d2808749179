#include "atlas/saddle.hpp"

#include <cmath>

#include "atlas/orbit.hpp"

namespace atlas {

Saddle PeriodicPoint::as_saddle() const {
    if (cls != OrbitClass::saddle)
        throw SpectralError("periodic point is not a saddle (class " + std::to_string(int(cls)) + ")");
    Saddle s;
    s.location = location;
    s.period = period;
    s.lambda = eig1;
    s.mu = eig2;
    s.ev_stable = v1;
    s.ev_unstable = v2;
    // |lambda| |mu|^3 < 1 evaluated in compensated arithmetic
    DD prod = abs(DD(eig1)) * abs(DD(eig2)) * abs(DD(eig2)) * abs(DD(eig2));
    s.dissipative3 = prod < DD(1.0);
    s.newton_residual = newton_residual;
    return s;
}

PeriodicPoint find_periodic_point(const MapFamily& fam, const ParamPoint& p, int period,
                                  Vec2 seed, const NewtonOptions& opts) {
    if (period < 1) throw DomainError("period must be >= 1");
    const std::vector<double>& pv = p.v;
    auto G = [&](Vec2 z) -> Vec2 {
        Vec2 fz = to_vec2d(iterate_point(fam, pv, V2<double>{z.x, z.y}, period));
        return fz - z;
    };
    Vec2 z = seed;
    double gn = norm(G(z));
    double last = gn;
    for (int it = 0; it < opts.max_iter; ++it) {
        if (gn < opts.tol) break;
        Mat2 J = df_power(fam, p, z, period) - Mat2::identity();
        Vec2 g = G(z);
        Vec2 step = solve2(J, Vec2{-g.x, -g.y});
        if (!std::isfinite(step.x) || !std::isfinite(step.y))
            throw ConvergenceError("Newton step not finite (singular DF^p - I?)");
        double damp = 1.0;
        Vec2 znew = z + step;
        double gnew = norm(G(znew));
        while (gnew > gn && damp > 1.0 / 1024.0) { // damped: halve until residual drops
            damp *= 0.5;
            znew = z + damp * step;
            gnew = norm(G(znew));
        }
        z = znew;
        last = gn;
        gn = gnew;
    }
    if (!(gn < opts.tol))
        throw ConvergenceError("periodic-point Newton did not converge, last residual " +
                               std::to_string(last));

    PeriodicPoint out;
    out.location = z;
    out.period = period;
    out.monodromy = df_power(fam, p, z, period);
    out.newton_residual = gn;

    auto eigs = real_eigs(out.monodromy);
    if (!eigs) {
        double mod = std::sqrt(std::fabs(out.monodromy.det()));
        out.cls = OrbitClass::complex_pair;
        out.eig1 = out.eig2 = mod;
        out.v1 = out.v2 = Vec2{1.0, 0.0};
        return out;
    }
    out.eig1 = eigs->lam1;
    out.eig2 = eigs->lam2;
    out.v1 = eigs->v1;
    out.v2 = eigs->v2;
    double m1 = std::fabs(out.eig1), m2 = std::fabs(out.eig2);
    if (m1 < 1.0 && m2 > 1.0) out.cls = OrbitClass::saddle;
    else if (m1 < 1.0 && m2 < 1.0) out.cls = OrbitClass::sink;
    else if (m1 > 1.0 && m2 > 1.0) out.cls = OrbitClass::source;
    else out.cls = OrbitClass::neutral;
    return out;
}

NonresonanceReport check_nonresonance(double lambda, double mu, int kappa, double res_tol) {
    double am = std::fabs(mu), al = std::fabs(lambda);
    if (am <= 1.0 || al >= 1.0)
        throw SpectralError("nonresonance scan needs |mu| > 1 > |lambda|");
    NonresonanceReport rep;
    rep.kappa_checked = kappa;
    for (int k1 = 0; k1 <= kappa; ++k1) {
        for (int k2 = 0; k2 + k1 <= kappa; ++k2) {
            if (k1 + k2 < 2) continue;
            if (k1 >= 1) {
                double mk = std::pow(mu, k1);
                if (std::fabs(lambda - mk) <= res_tol * std::max(std::fabs(mk), 1.0)) {
                    rep.ok = false;
                    rep.k1 = k1;
                    rep.k2 = k2;
                    rep.which = "lambda=mu^k1";
                    return rep;
                }
            }
            if (k2 >= 1) {
                double lk = std::pow(lambda, k2);
                if (std::fabs(mu - lk) <= res_tol * std::max(std::fabs(mu), 1.0)) {
                    rep.ok = false;
                    rep.k1 = k1;
                    rep.k2 = k2;
                    rep.which = "mu=lambda^k2";
                    return rep;
                }
            }
        }
    }
    return rep;
}

} // namespace atlas
