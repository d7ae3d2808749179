#include "atlas/family.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace atlas {

using nlohmann::json;

Precision precision_from_string(const std::string& s) {
    if (s == "double") return Precision::dbl;
    if (s == "extended") return Precision::extended;
    throw IoError("unknown precision mode '" + s + "' (expected double|extended)");
}

std::string to_string(Precision p) { return p == Precision::dbl ? "double" : "extended"; }

MapFamily MapFamily::henon() {
    MapFamily f;
    f.kind = FamilyKind::henon;
    f.degree = 2;
    f.param_names = {"a", "b"};
    return f;
}

namespace {

// "x^2 y^1 t^3" -> exponents; a bare "1" (or empty) is the constant monomial
MonoTerm parse_monomial_key(const std::string& key, const std::vector<std::string>& params) {
    MonoTerm t;
    t.pexp.assign(params.size(), 0);
    std::istringstream is(key);
    std::string factor;
    while (is >> factor) {
        if (factor == "1") continue;
        auto caret = factor.find('^');
        std::string var = factor.substr(0, caret);
        int e = 1;
        if (caret != std::string::npos) e = std::stoi(factor.substr(caret + 1));
        if (e < 0) throw IoError("negative exponent in monomial key '" + key + "'");
        if (var == "x") t.ix += e;
        else if (var == "y") t.iy += e;
        else {
            auto it = std::find(params.begin(), params.end(), var);
            if (it == params.end())
                throw IoError("unknown variable '" + var + "' in monomial key '" + key + "'");
            t.pexp[std::size_t(it - params.begin())] += e;
        }
    }
    return t;
}

std::string monomial_key(const MonoTerm& t, const std::vector<std::string>& params) {
    std::ostringstream os;
    bool any = false;
    if (t.ix > 0) { os << "x^" << t.ix; any = true; }
    if (t.iy > 0) { if (any) os << ' '; os << "y^" << t.iy; any = true; }
    for (std::size_t k = 0; k < t.pexp.size(); ++k)
        if (t.pexp[k] > 0) { if (any) os << ' '; os << params[k] << '^' << t.pexp[k]; any = true; }
    if (!any) os << '1';
    return os.str();
}

} // namespace

MapFamily MapFamily::from_json_text(const std::string& text) {
    json j = json::parse(text);
    MapFamily f;
    std::string kind = j.value("kind", "polynomial");
    f.param_names = j.at("params").get<std::vector<std::string>>();
    if (kind == "henon") {
        if (f.param_names.size() != 2) throw IoError("henon family needs exactly two parameters");
        f.kind = FamilyKind::henon;
        f.degree = 2;
        return f;
    }
    if (kind != "polynomial") throw IoError("unknown family kind '" + kind + "'");
    f.kind = FamilyKind::polynomial;
    f.degree = j.value("degree", 2);
    if (f.degree < 1) throw IoError("family degree must be >= 1");
    const json& coeffs = j.at("coeffs");
    for (int comp = 0; comp < 2; ++comp) {
        std::string ckey = std::to_string(comp);
        if (!coeffs.contains(ckey)) continue;
        for (auto it = coeffs.at(ckey).begin(); it != coeffs.at(ckey).end(); ++it) {
            MonoTerm t = parse_monomial_key(it.key(), f.param_names);
            t.coeff = it.value().get<double>();
            if (t.ix + t.iy > f.degree)
                throw IoError("monomial '" + it.key() + "' exceeds declared degree");
            if (t.coeff != 0.0) f.terms[comp].push_back(std::move(t));
        }
    }
    return f;
}

MapFamily MapFamily::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open family file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string MapFamily::to_json_text() const {
    json j;
    j["kind"] = (kind == FamilyKind::henon) ? "henon" : "polynomial";
    j["degree"] = degree;
    j["params"] = param_names;
    if (kind == FamilyKind::polynomial) {
        json coeffs = json::object();
        for (int comp = 0; comp < 2; ++comp) {
            json c = json::object();
            for (const MonoTerm& t : terms[comp]) c[monomial_key(t, param_names)] = t.coeff;
            coeffs[std::to_string(comp)] = c;
        }
        j["coeffs"] = coeffs;
    }
    return j.dump(2);
}

} // namespace atlas
