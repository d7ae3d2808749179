// Parametric planar map families with exact derivative evaluators.
//
// Three kinds: the Henon family (a + x^2 - b*y, x), general polynomial maps
// given by dense monomial tables (coefficients may be polynomial in the
// parameters), and anything the caller writes into such a table by hand.
// Evaluation, the space Jacobian and the parameter jet are all exact
// coefficient arithmetic; there is no differentiation error to tune.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "atlas/dd.hpp"
#include "atlas/error.hpp"
#include "atlas/geom.hpp"

namespace atlas {

enum class FamilyKind { henon, polynomial };

enum class Precision { dbl, extended };

Precision precision_from_string(const std::string& s);
std::string to_string(Precision p);

struct ParamPoint {
    std::vector<double> v;
    ParamPoint() = default;
    explicit ParamPoint(std::vector<double> vals) : v(std::move(vals)) {}
    ParamPoint(std::initializer_list<double> vals) : v(vals) {}
    std::size_t size() const { return v.size(); }
    double operator[](std::size_t i) const { return v[i]; }
    double& operator[](std::size_t i) { return v[i]; }
};

// One monomial  coeff * x^ix * y^iy * prod_k p_k^{pexp[k]}
struct MonoTerm {
    int ix = 0, iy = 0;
    std::vector<int> pexp;
    double coeff = 0.0;
};

struct MapFamily {
    FamilyKind kind = FamilyKind::henon;
    int degree = 2;
    std::vector<std::string> param_names;
    std::array<std::vector<MonoTerm>, 2> terms; // used when kind == polynomial

    std::size_t arity() const { return param_names.size(); }

    static MapFamily henon(); // params ["a","b"], F(x,y) = (a + x^2 - b y, x)

    // JSON family definition:
    //   {kind, degree, params:[...], coeffs:{"0": {"x^i y^j p^k": c, ...}, "1": {...}}}
    // Monomial keys are whitespace-separated var^exp factors; var is "x", "y"
    // or a declared parameter name; omitted factors mean exponent zero.
    static MapFamily from_json_text(const std::string& text);
    static MapFamily load(const std::string& path);
    std::string to_json_text() const;

    void check_params(std::size_t n_given) const {
        if (n_given != arity())
            throw ArityError("parameter count " + std::to_string(n_given) + " does not match family arity " +
                             std::to_string(arity()));
    }
};

namespace detail {
template <class S>
S ipow(S base, int e) {
    S r(1.0);
    while (e-- > 0) r = r * base;
    return r;
}
} // namespace detail

template <class S>
V2<S> eval(const MapFamily& fam, const std::vector<S>& p, const V2<S>& z) {
    fam.check_params(p.size());
    if (!scalar::sfinite(z.x) || !scalar::sfinite(z.y)) throw DomainError("non-finite input point");
    if (fam.kind == FamilyKind::henon) {
        return {p[0] + z.x * z.x - p[1] * z.y, z.x};
    }
    V2<S> out{S(0.0), S(0.0)};
    for (int comp = 0; comp < 2; ++comp) {
        S acc(0.0);
        for (const MonoTerm& t : fam.terms[comp]) {
            S m(t.coeff);
            m = m * detail::ipow(z.x, t.ix) * detail::ipow(z.y, t.iy);
            for (std::size_t k = 0; k < t.pexp.size(); ++k)
                if (t.pexp[k] > 0) m = m * detail::ipow(p[k], t.pexp[k]);
            acc = acc + m;
        }
        (comp == 0 ? out.x : out.y) = acc;
    }
    return out;
}

template <class S>
M2<S> jacobian(const MapFamily& fam, const std::vector<S>& p, const V2<S>& z) {
    fam.check_params(p.size());
    if (!scalar::sfinite(z.x) || !scalar::sfinite(z.y)) throw DomainError("non-finite input point");
    if (fam.kind == FamilyKind::henon) {
        return {S(2.0) * z.x, S(0.0) - p[1], S(1.0), S(0.0)};
    }
    M2<S> J{S(0.0), S(0.0), S(0.0), S(0.0)};
    for (int comp = 0; comp < 2; ++comp) {
        S dx(0.0), dy(0.0);
        for (const MonoTerm& t : fam.terms[comp]) {
            S pf(t.coeff);
            for (std::size_t k = 0; k < t.pexp.size(); ++k)
                if (t.pexp[k] > 0) pf = pf * detail::ipow(p[k], t.pexp[k]);
            if (t.ix > 0)
                dx = dx + S(double(t.ix)) * pf * detail::ipow(z.x, t.ix - 1) * detail::ipow(z.y, t.iy);
            if (t.iy > 0)
                dy = dy + S(double(t.iy)) * pf * detail::ipow(z.x, t.ix) * detail::ipow(z.y, t.iy - 1);
        }
        if (comp == 0) { J.a = dx; J.b = dy; }
        else           { J.c = dx; J.d = dy; }
    }
    return J;
}

template <class S>
std::vector<V2<S>> param_jet(const MapFamily& fam, const std::vector<S>& p, const V2<S>& z) {
    fam.check_params(p.size());
    if (!scalar::sfinite(z.x) || !scalar::sfinite(z.y)) throw DomainError("non-finite input point");
    if (fam.kind == FamilyKind::henon) {
        return {V2<S>{S(1.0), S(0.0)}, V2<S>{S(0.0) - z.y, S(0.0)}};
    }
    std::vector<V2<S>> jet(fam.arity(), V2<S>{S(0.0), S(0.0)});
    for (int comp = 0; comp < 2; ++comp) {
        for (const MonoTerm& t : fam.terms[comp]) {
            S geo = S(t.coeff) * detail::ipow(z.x, t.ix) * detail::ipow(z.y, t.iy);
            for (std::size_t k = 0; k < t.pexp.size(); ++k) {
                if (t.pexp[k] == 0) continue;
                S d = S(double(t.pexp[k])) * geo * detail::ipow(p[k], t.pexp[k] - 1);
                for (std::size_t j = 0; j < t.pexp.size(); ++j)
                    if (j != k && t.pexp[j] > 0) d = d * detail::ipow(p[j], t.pexp[j]);
                if (comp == 0) jet[k].x = jet[k].x + d;
                else           jet[k].y = jet[k].y + d;
            }
        }
    }
    return jet;
}

inline std::vector<double> as_scalars(const ParamPoint& p) { return p.v; }
inline std::vector<DD> as_dd(const ParamPoint& p) {
    std::vector<DD> out(p.v.size());
    for (std::size_t i = 0; i < p.v.size(); ++i) out[i] = DD(p.v[i]);
    return out;
}

} // namespace atlas
