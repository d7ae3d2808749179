#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "atlas/orbit.hpp"
#include "atlas/saddle.hpp"

namespace atlas {

double Poly2::eval(double u, double v) const {
    // Horner in total degree via direct powers; degrees here are tiny (<= 9)
    double pu[16], pv[16];
    pu[0] = pv[0] = 1.0;
    for (int k = 1; k <= deg; ++k) {
        pu[k] = pu[k - 1] * u;
        pv[k] = pv[k - 1] * v;
    }
    double acc = 0.0;
    for (int d = deg; d >= 0; --d)
        for (int j = 0; j <= d; ++j) acc += at(d - j, j) * pu[d - j] * pv[j];
    return acc;
}

namespace {

Poly2 poly_mul(const Poly2& a, const Poly2& b, int deg) {
    Poly2 r(deg);
    for (int da = 0; da <= a.deg; ++da)
        for (int ja = 0; ja <= da; ++ja) {
            double ca = a.at(da - ja, ja);
            if (ca == 0.0) continue;
            for (int db = 0; db <= b.deg && da + db <= deg; ++db)
                for (int jb = 0; jb <= db; ++jb) {
                    double cb = b.at(db - jb, jb);
                    if (cb == 0.0) continue;
                    r.at(da - ja + db - jb, ja + jb) += ca * cb;
                }
        }
    return r;
}

void poly_axpy(Poly2& acc, double s, const Poly2& a) {
    for (int d = 0; d <= std::min(acc.deg, a.deg); ++d)
        for (int j = 0; j <= d; ++j) acc.at(d - j, j) += s * a.at(d - j, j);
}

// compose scalar polynomial p with planar map (P,Q), truncated at deg
Poly2 poly_compose(const Poly2& p, const Poly2& P, const Poly2& Q, int deg) {
    // powers of P and Q up to deg
    std::vector<Poly2> Ppow(std::size_t(deg) + 1, Poly2(deg)), Qpow(std::size_t(deg) + 1, Poly2(deg));
    Ppow[0].at(0, 0) = 1.0;
    Qpow[0].at(0, 0) = 1.0;
    for (int k = 1; k <= deg; ++k) {
        Ppow[k] = poly_mul(Ppow[k - 1], P, deg);
        Qpow[k] = poly_mul(Qpow[k - 1], Q, deg);
    }
    Poly2 r(deg);
    for (int d = 0; d <= p.deg; ++d)
        for (int j = 0; j <= d; ++j) {
            double c = p.at(d - j, j);
            if (c == 0.0) continue;
            Poly2 term = poly_mul(Ppow[d - j], Qpow[j], deg);
            poly_axpy(r, c, term);
        }
    return r;
}

// Taylor expansion of F (or F^period via chained expansion) at z0 in the
// eigenframe: w -> P^-1 (F(z0 + P w) - F(z0)). Exact for polynomial families.
Poly2Map taylor_in_frame(const MapFamily& fam, const ParamPoint& p, Vec2 z0, const Mat2& P,
                         const Mat2& Pinv, int deg) {
    // expand each component of F(z0 + (X,Y)) as polynomial in (X,Y)
    Poly2 fx(deg), fy(deg);
    auto add_term = [&](int comp, int ix, int iy, double coeff) {
        // (z0x + X)^ix (z0y + Y)^iy * coeff, truncated
        for (int i = 0; i <= ix && i <= deg; ++i) {
            double bi = coeff;
            // binomial(ix, i) z0x^{ix-i}
            double cx = 1.0;
            for (int t = 0; t < i; ++t) cx = cx * double(ix - t) / double(t + 1);
            cx *= std::pow(z0.x, ix - i);
            for (int j = 0; j <= iy && i + j <= deg; ++j) {
                double cy = 1.0;
                for (int t = 0; t < j; ++t) cy = cy * double(iy - t) / double(t + 1);
                cy *= std::pow(z0.y, iy - j);
                double c = bi * cx * cy;
                if (comp == 0) fx.at(i, j) += c;
                else fy.at(i, j) += c;
            }
        }
    };
    if (fam.kind == FamilyKind::henon) {
        add_term(0, 0, 0, p[0]);
        add_term(0, 2, 0, 1.0);
        add_term(0, 0, 1, -p[1]);
        add_term(1, 1, 0, 1.0);
    } else {
        for (int comp = 0; comp < 2; ++comp)
            for (const MonoTerm& t : fam.terms[comp]) {
                double c = t.coeff;
                for (std::size_t k = 0; k < t.pexp.size(); ++k)
                    for (int e = 0; e < t.pexp[k]; ++e) c *= p[k];
                add_term(comp, t.ix, t.iy, c);
            }
    }
    // drop the constant (F(z0)); then substitute (X,Y) = P (u,v) and left-multiply P^-1
    fx.at(0, 0) = 0.0;
    fy.at(0, 0) = 0.0;
    Poly2 Xu(deg), Yu(deg);
    Xu.at(1, 0) = P.a;
    Xu.at(0, 1) = P.b;
    Yu.at(1, 0) = P.c;
    Yu.at(0, 1) = P.d;
    Poly2 gx = poly_compose(fx, Xu, Yu, deg);
    Poly2 gy = poly_compose(fy, Xu, Yu, deg);
    Poly2Map out{Poly2(deg), Poly2(deg)};
    for (int d = 0; d <= deg; ++d)
        for (int j = 0; j <= d; ++j) {
            double gxc = gx.at(d - j, j), gyc = gy.at(d - j, j);
            out.f.at(d - j, j) = Pinv.a * gxc + Pinv.b * gyc;
            out.g.at(d - j, j) = Pinv.c * gxc + Pinv.d * gyc;
        }
    return out;
}

// composition of two truncated planar maps: A after B
Poly2Map map_compose(const Poly2Map& A, const Poly2Map& B, int deg) {
    return {poly_compose(A.f, B.f, B.g, deg), poly_compose(A.g, B.f, B.g, deg)};
}

} // namespace

LinearizationChart linearize(const MapFamily& fam, const ParamPoint& p, const Saddle& s,
                             int degree, double radius, const LinearizeOptions& opts) {
    if (degree < 1) throw DomainError("chart degree must be >= 1");
    const double lam = s.lambda, mu = s.mu;

    Mat2 P{s.ev_stable.x, s.ev_unstable.x, s.ev_stable.y, s.ev_unstable.y};
    Mat2 Pinv = P.inverse();

    // G = expansion of F^period in the eigenframe at the saddle; for period k
    // chain the per-point expansions along the orbit.
    Poly2Map G;
    if (s.period == 1) {
        G = taylor_in_frame(fam, p, s.location, P, Pinv, degree);
    } else {
        // expand each F at the orbit point, in plane coordinates, then frame once
        Mat2 I = Mat2::identity();
        Vec2 z = s.location;
        Poly2Map acc;
        bool first = true;
        for (int k = 0; k < s.period; ++k) {
            Poly2Map step = taylor_in_frame(fam, p, z, I, I, degree);
            acc = first ? step : map_compose(step, acc, degree);
            first = false;
            z = to_vec2d(eval(fam, p.v, V2<double>{z.x, z.y}));
        }
        // conjugate by the frame: P^-1 acc (P u)
        Poly2 Xu(degree), Yu(degree);
        Xu.at(1, 0) = P.a;
        Xu.at(0, 1) = P.b;
        Yu.at(1, 0) = P.c;
        Yu.at(0, 1) = P.d;
        Poly2 gx = poly_compose(acc.f, Xu, Yu, degree);
        Poly2 gy = poly_compose(acc.g, Xu, Yu, degree);
        G.f = Poly2(degree);
        G.g = Poly2(degree);
        for (int d = 0; d <= degree; ++d)
            for (int j = 0; j <= d; ++j) {
                double gxc = gx.at(d - j, j), gyc = gy.at(d - j, j);
                G.f.at(d - j, j) = Pinv.a * gxc + Pinv.b * gyc;
                G.g.at(d - j, j) = Pinv.c * gxc + Pinv.d * gyc;
            }
    }

    // h = id + q, solved per degree: for monomial (i,j) and component eig,
    // (lam^i mu^j - eig) q_{ij} = -(rhs), rhs from lower-order terms.
    Poly2Map h{Poly2(degree), Poly2(degree)};
    h.f.at(1, 0) = 1.0;
    h.g.at(0, 1) = 1.0;

    for (int d = 2; d <= degree; ++d) {
        // residual of the conjugacy using coefficients solved so far
        Poly2Map hG = map_compose(h, G, degree);
        for (int j = 0; j <= d; ++j) {
            int i = d - j;
            double div_mag = std::pow(std::fabs(lam), i) * std::pow(std::fabs(mu), j);
            double sign = std::pow(lam < 0 ? -1.0 : 1.0, i) * std::pow(mu < 0 ? -1.0 : 1.0, j);
            double lm = sign * div_mag;
            for (int comp = 0; comp < 2; ++comp) {
                double eig = comp == 0 ? lam : mu;
                Poly2& hc = comp == 0 ? h.f : h.g;
                const Poly2& hGc = comp == 0 ? hG.f : hG.g;
                // hG currently contains lm * q_{ij} for the unsolved q (it is 0),
                // so the degree-d coefficient is exactly the rhs.
                double rhs = hGc.at(i, j) - eig * hc.at(i, j);
                double div = lm - eig;
                double scale = std::max(div_mag, std::fabs(eig));
                if (std::fabs(div) < opts.div_tol * std::max(scale, 1e-30)) {
                    if (std::fabs(rhs) < 1e-13 * std::max(1.0, scale)) {
                        continue; // vacuous resonance: rhs vanishes, keep q_{ij} = 0
                    }
                    std::ostringstream os;
                    os << "near-resonant homological divisor at monomial u^" << i << " v^" << j
                       << " component " << comp << " (divisor " << div << ")";
                    throw ResonanceError(os.str());
                }
                hc.at(i, j) -= rhs / div;
            }
        }
    }

    // truncated compositional inverse: hinv = id + r with hinv(h) = id
    Poly2Map hinv{Poly2(degree), Poly2(degree)};
    hinv.f.at(1, 0) = 1.0;
    hinv.g.at(0, 1) = 1.0;
    for (int d = 2; d <= degree; ++d) {
        Poly2Map comp = map_compose(hinv, h, degree);
        for (int j = 0; j <= d; ++j) {
            int i = d - j;
            hinv.f.at(i, j) -= comp.f.at(i, j);
            hinv.g.at(i, j) -= comp.g.at(i, j);
        }
    }

    LinearizationChart chart;
    chart.degree = degree;
    chart.lambda = lam;
    chart.mu = mu;
    chart.saddle = s.location;
    chart.frame = P;
    chart.frame_inv = Pinv;
    chart.forward = h;
    chart.inverse = hinv;
    chart.domain_radius = radius;

    // measured conjugacy residual sup |h(Gtrue(w)) - L h(w)| on the radius-r ball,
    // with the true map, not its truncation
    double resid = 0.0, inv_resid = 0.0;
    int m = opts.residual_grid;
    for (int iu = 0; iu <= m; ++iu)
        for (int iv = 0; iv <= m; ++iv) {
            double u = radius * (2.0 * iu / m - 1.0);
            double v = radius * (2.0 * iv / m - 1.0);
            if (u * u + v * v > radius * radius) continue;
            Vec2 w{u, v};
            Vec2 z = s.location + P * w;
            Vec2 fz = to_vec2d(iterate_point(fam, p.v, V2<double>{z.x, z.y}, s.period));
            Vec2 wG = Pinv * (fz - s.location);
            Vec2 lhs = h.eval(wG);
            Vec2 hw = h.eval(w);
            Vec2 rhs{lam * hw.x, mu * hw.y};
            resid = std::max(resid, norm(lhs - rhs));
            Vec2 round = hinv.eval(hw);
            inv_resid = std::max(inv_resid, norm(round - w));
        }
    chart.residual_bound = resid;
    chart.inverse_residual = inv_resid;
    if (resid > opts.residual_cap)
        throw ConvergenceError("linearization residual " + std::to_string(resid) +
                               " exceeds cap; radius too large");
    return chart;
}

std::string LinearizationChart::to_json_text() const {
    nlohmann::json j;
    j["degree"] = degree;
    j["lambda"] = lambda;
    j["mu"] = mu;
    j["forward_coeffs"] = {{"x", forward.f.c}, {"y", forward.g.c}};
    j["inverse_coeffs"] = {{"x", inverse.f.c}, {"y", inverse.g.c}};
    j["domain_radius"] = domain_radius;
    j["residual_bound"] = residual_bound;
    return j.dump(2);
}

} // namespace atlas
