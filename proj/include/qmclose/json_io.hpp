#pragma once

#include <json.hpp>

#include "qmclose/appendix.hpp"
#include "qmclose/cone.hpp"
#include "qmclose/fiber.hpp"
#include "qmclose/qmodule.hpp"

namespace qmclose {

using Json = nlohmann::ordered_json;

// Rationals serialize as {"num":N,"den":D}; int64-sized values are JSON
// numbers, larger ones decimal strings.  Round-trips are bit-exact.
inline Json to_json(const Rational& r) {
    Json j;
    long long v;
    j["num"] = r.num().fits_int64(&v) ? Json(v) : Json(r.num().to_string());
    j["den"] = r.den().fits_int64(&v) ? Json(v) : Json(r.den().to_string());
    return j;
}

inline Rational rational_from_json(const Json& j) {
    auto part = [&](const char* key) -> BigInt {
        const Json& p = j.at(key);
        if (p.is_string()) return BigInt::from_string(p.get<std::string>());
        return BigInt(p.get<long long>());
    };
    return Rational(part("num"), part("den"));
}

inline Json to_json(const Polynomial& p) {
    Json j;
    j["vars"] = p.vars();
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) {
        Json t;
        t["exps"] = m.exps;
        Json r = to_json(c);
        t["num"] = r["num"];
        t["den"] = r["den"];
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

inline Polynomial polynomial_from_json(const Json& j) {
    Polynomial p(j.at("vars").get<std::vector<std::string>>());
    for (const auto& t : j.at("terms")) {
        Monomial m{t.at("exps").get<std::vector<int>>()};
        p.add_term(m, rational_from_json(t));
    }
    return p;
}

inline Json to_json(const QuadraticModuleSpec& M) {
    Json j;
    j["vars"] = M.vars;
    j["kind"] = M.kind == ModuleKind::preordering ? "preordering" : "qm";
    Json gens = Json::array();
    for (const auto& g : M.generators) gens.push_back(to_json(g));
    j["generators"] = std::move(gens);
    if (!M.name.empty()) j["name"] = M.name;
    return j;
}

inline QuadraticModuleSpec module_from_json(const Json& j) {
    QuadraticModuleSpec M;
    M.vars = j.at("vars").get<std::vector<std::string>>();
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "preordering") M.kind = ModuleKind::preordering;
    else if (kind == "qm") M.kind = ModuleKind::quadratic_module;
    else throw std::invalid_argument("module json: kind must be 'qm' or 'preordering'");
    for (const auto& g : j.at("generators")) M.generators.push_back(polynomial_from_json(g));
    if (j.contains("name")) M.name = j["name"].get<std::string>();
    return M;
}

inline std::string monomial_string(const Monomial& m, const std::vector<std::string>& vars) {
    std::string s;
    for (size_t i = 0; i < vars.size(); ++i) {
        if (m.exps[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += vars[i];
        if (m.exps[i] > 1) s += "^" + std::to_string(m.exps[i]);
    }
    return s.empty() ? "1" : s;
}

inline Json to_json(const MembershipCertificate& cert, const std::vector<std::string>& vars) {
    Json j;
    j["degree"] = cert.degree;
    j["tol_feas"] = cert.tol.feas;
    j["tol_psd"] = cert.tol.psd;
    j["residual"] = to_json(cert.residual);
    j["mineig"] = cert.mineig;
    Json blocks = Json::array();
    for (const auto& b : cert.blocks) {
        Json jb;
        jb["generator"] = b.generator.to_string();
        Json basis = Json::array();
        for (const auto& m : b.basis) basis.push_back(monomial_string(m, vars));
        jb["basis"] = std::move(basis);
        Json gram = Json::array();  // row-major, exact rationals
        for (const auto& row : b.gram)
            for (const auto& v : row) gram.push_back(to_json(v));
        jb["rows"] = b.basis.size();
        jb["gram"] = std::move(gram);
        blocks.push_back(std::move(jb));
    }
    j["blocks"] = std::move(blocks);
    return j;
}

inline const char* status_string(MemberStatus s) {
    switch (s) {
        case MemberStatus::member: return "member";
        case MemberStatus::no_certificate_at_d: return "no_certificate_at_d";
        case MemberStatus::infeasible_at_d: return "infeasible_at_d";
    }
    return "?";
}

inline Json to_json(const MemberResult& r, const std::vector<std::string>& vars) {
    Json j;
    j["status"] = status_string(r.status);
    j["note"] = r.note;
    if (r.certificate) j["certificate"] = to_json(*r.certificate, vars);
    if (r.ray) {
        Json ray;
        Json mons = Json::array();
        for (const auto& m : r.ray->monomials) mons.push_back(monomial_string(m, vars));
        ray["monomials"] = std::move(mons);
        ray["values"] = r.ray->values;
        ray["margin"] = r.ray->margin;
        ray["psd_slack"] = r.ray->psd_slack;
        j["dual_ray"] = std::move(ray);
    }
    return j;
}

inline Json to_json(const SeqMemberResult& r) {
    Json j;
    j["verdict"] = r.in_closure_at_schedule ? "in_Mddagger_at_schedule" : "not_detected";
    j["e"] = r.e;
    Json eps = Json::array();
    for (const auto& v : r.eps_schedule) eps.push_back(v.to_string());
    j["eps_schedule"] = std::move(eps);
    Json per = Json::array();
    for (auto s : r.per_eps) per.push_back(status_string(s));
    j["per_eps"] = std::move(per);
    j["note"] = r.note;
    return j;
}

inline Json to_json(const BlockSignature& s) { return Json(s.l); }

inline Json to_json(const StepReport& rep, bool include_points) {
    Json j;
    j["n"] = rep.n;
    j["m"] = rep.m;
    j["samples"] = rep.samples;
    j["seed"] = rep.seed;
    j["cone_variant"] = rep.cone_variant;
    j["discrepancies"] = rep.discrepancies;
    j["strictness_found"] = rep.strictness_found;
    if (rep.strictness_found) j["strictness_witness"] = rep.strictness_witness;
    if (include_points) {
        Json pts = Json::array();
        for (const auto& p : rep.points) {
            Json jp;
            jp["coords"] = p.coords;
            jp["in_prev"] = p.in_prev;
            jp["limit_detected"] = p.limit_detected;
            jp["agree"] = p.agree;
            if (p.prev_signature) jp["signature"] = to_json(*p.prev_signature);
            if (!p.lift_spans.empty()) jp["lift_spans"] = p.lift_spans;
            if (!p.ks.empty()) jp["ks"] = p.ks;
            pts.push_back(std::move(jp));
        }
        j["points"] = std::move(pts);
    }
    return j;
}

inline Json to_json(const WeakClosureTrace& t) {
    Json j;
    if (!t.module_name.empty()) j["module"] = t.module_name;
    j["vars"] = t.vars;
    j["generators"] = t.generators;
    j["depth"] = t.depth;
    j["case"] = t.case_taken;
    if (t.case_taken == "fibered") {
        j["var"] = t.chosen_var;
        j["a"] = t.a.to_string();
        j["b"] = t.b.to_string();
        j["interval_overridden"] = t.interval_overridden;
        j["midpoint_support_probe_certified"] = t.midpoint_support_probe_certified;
        Json grid = Json::array();
        for (const auto& g : t.grid) grid.push_back(g.to_string());
        j["grid"] = std::move(grid);
        Json ch = Json::array();
        for (const auto& c : t.children) ch.push_back(to_json(*c));
        j["fibers"] = std::move(ch);
    } else {
        j["status"] = status_string(t.leaf_status);
    }
    if (!t.note.empty()) j["note"] = t.note;
    return j;
}

inline Json to_json(const FiberDecomposition& d) {
    Json j;
    j["var"] = d.var;
    j["a"] = d.a.to_string();
    j["b"] = d.b.to_string();
    Json grid = Json::array();
    for (const auto& g : d.grid) grid.push_back(g.to_string());
    j["grid"] = std::move(grid);
    Json fibers = Json::array();
    for (const auto& f : d.fibers) fibers.push_back(to_json(f));
    j["fibers"] = std::move(fibers);
    return j;
}

inline Json to_json(const TruncatedCone& c) {
    Json j;
    j["dim"] = c.dim();
    switch (c.rep()) {
        case ConeRep::generators: j["rep"] = "generators"; break;
        case ConeRep::halfspaces: j["rep"] = "halfspaces"; break;
        case ConeRep::lexicographic: j["rep"] = "lexicographic"; break;
        case ConeRep::sdp_slice: j["rep"] = "sdp_slice"; break;
    }
    auto vecs = [](const std::vector<RatVec>& vs) {
        Json a = Json::array();
        for (const auto& v : vs) {
            Json row = Json::array();
            for (const auto& x : v) row.push_back(x.to_string());
            a.push_back(std::move(row));
        }
        return a;
    };
    if (c.rep() == ConeRep::generators) j["generators"] = vecs(c.generators());
    if (c.rep() == ConeRep::halfspaces) j["halfspaces"] = vecs(c.halfspaces());
    if (c.rep() == ConeRep::lexicographic) j["functionals"] = vecs(c.lex_functionals());
    return j;
}

}  // namespace qmclose
