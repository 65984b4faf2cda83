// qmclose: degree-truncated computations with quadratic modules of real
// polynomial rings -- membership certificates, sequential-closure tests,
// archimedean and stability probes, fiber decompositions, and the appendix
// peeling model.
#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "qmclose/instances.hpp"
#include "qmclose/json_io.hpp"

namespace {

using namespace qmclose;

struct CommonOpts {
    std::string instance;
    std::string module_file;
    std::string poly;
    std::string poly_file;
    int degree = 4;
    double tol_feas = 1e-8;
    double tol_psd = 1e-8;
    std::string out;
};

Tolerances tolerances_of(const CommonOpts& c) {
    Tolerances t;
    t.feas = c.tol_feas;
    t.psd = c.tol_psd;
    if (const char* env = std::getenv("QMCLOSE_TOL")) {
        double v = std::strtod(env, nullptr);
        if (v > 0) t.feas = t.psd = v;
    }
    return t;
}

QuadraticModuleSpec load_module(const CommonOpts& c) {
    if (!c.instance.empty()) return get_instance(c.instance);
    if (!c.module_file.empty()) {
        std::ifstream in(c.module_file);
        if (!in) throw std::invalid_argument("cannot open module file: " + c.module_file);
        Json j = Json::parse(in);
        return module_from_json(j);
    }
    throw std::invalid_argument("provide --instance or --module");
}

Polynomial load_poly(const CommonOpts& c, const QuadraticModuleSpec& M) {
    if (!c.poly.empty()) return parse_polynomial(c.poly, M.vars);
    if (!c.poly_file.empty()) {
        std::ifstream in(c.poly_file);
        if (!in) throw std::invalid_argument("cannot open polynomial file: " + c.poly_file);
        return polynomial_from_json(Json::parse(in));
    }
    throw std::invalid_argument("provide --poly or --poly-json");
}

std::vector<Rational> parse_rat_list(const std::string& csv) {
    std::vector<Rational> out;
    std::string cur;
    for (char ch : csv + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(Rational::from_string(cur));
            cur.clear();
        } else if (!isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    if (out.empty()) throw std::invalid_argument("empty list: " + csv);
    return out;
}

void emit(const Json& body, const std::string& command, const Json& config, const std::string& out) {
    Json rep;
    rep["schema"] = "qmclose/1";
    rep["command"] = command;
    rep["config"] = config;
    rep["result"] = body;
    std::string text = rep.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) throw std::invalid_argument("cannot open output file: " + out);
        f << text;
    }
}

void add_common(CLI::App* cmd, CommonOpts* c, bool with_poly = true, bool with_degree = true) {
    cmd->add_option("--instance", c->instance, "built-in instance, e.g. ball:2, couex");
    cmd->add_option("--module", c->module_file, "module spec JSON file");
    if (with_poly) {
        cmd->add_option("--poly", c->poly, "polynomial (infix: + - * ^, rationals, variables)");
        cmd->add_option("--poly-json", c->poly_file, "polynomial JSON file");
    }
    if (with_degree) cmd->add_option("--degree", c->degree, "truncation degree d");
    cmd->add_option("--tol-feas", c->tol_feas, "feasibility tolerance");
    cmd->add_option("--tol-psd", c->tol_psd, "PSD tolerance");
    cmd->add_option("--out", c->out, "write the JSON report to a file");
}

Json config_json(const CommonOpts& c, const Tolerances& tol) {
    Json j;
    if (!c.instance.empty()) j["instance"] = c.instance;
    if (!c.module_file.empty()) j["module_file"] = c.module_file;
    if (!c.poly.empty()) j["poly"] = c.poly;
    j["degree"] = c.degree;
    j["tol_feas"] = tol.feas;
    j["tol_psd"] = tol.psd;
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"computations with finitely generated quadratic modules at bounded degree"};
    app.require_subcommand(1);

    CommonOpts c;

    auto* cmd_member = app.add_subcommand("member", "membership certificate search");
    add_common(cmd_member, &c);

    auto* cmd_seq = app.add_subcommand("seq-member", "sequential-closure membership over an eps schedule");
    add_common(cmd_seq, &c);
    int seq_e = 0;
    std::string eps_csv = "1,1/10,1/100,1/1000,1/10000,1/100000,1/1000000";
    cmd_seq->add_option("--e", seq_e, "perturber exponent (default: smallest with 2e > deg f)");
    cmd_seq->add_option("--eps", eps_csv, "comma-separated decreasing eps schedule");

    auto* cmd_pos = app.add_subcommand("pos-semi", "semiordering-positivity certificate p*f = f^{2m} + q");
    add_common(cmd_pos, &c);
    int m_max = 3;
    cmd_pos->add_option("--m-max", m_max, "largest exponent m to try");

    auto* cmd_arch = app.add_subcommand("archimedean", "archimedean probe: k - sum x_i^2 in M");
    add_common(cmd_arch, &c, false);
    std::string k_csv = "1,10,100,1000,10000";
    cmd_arch->add_option("--k", k_csv, "comma-separated k schedule");

    auto* cmd_support = app.add_subcommand("support", "candidates certified in M and -M");
    add_common(cmd_support, &c, false);
    std::vector<std::string> candidates;
    cmd_support->add_option("--candidate", candidates, "candidate polynomial (repeatable)");

    auto* cmd_stable = app.add_subcommand("stable", "linear-generator stability test");
    add_common(cmd_stable, &c, false, false);
    std::vector<std::string> user_forms;
    cmd_stable->add_option("--form", user_forms, "extra linear form to probe (repeatable)");

    auto* cmd_closure = app.add_subcommand("closure-stable",
                                           "stable-closure module: add +-radical generators");
    add_common(cmd_closure, &c, false, false);
    std::vector<std::string> radical;
    cmd_closure->add_option("--radical", radical, "radical generator (repeatable)");

    auto* cmd_fiber = app.add_subcommand("fiber", "fiber decomposition over a bounded coordinate");
    add_common(cmd_fiber, &c);
    std::string fiber_var = "x1", fiber_a = "0", fiber_b = "1";
    int grid = 33;
    cmd_fiber->add_option("--var", fiber_var, "coordinate to fiber over");
    cmd_fiber->add_option("--a", fiber_a, "lower bound (rational)");
    cmd_fiber->add_option("--b", fiber_b, "upper bound (rational)");
    cmd_fiber->add_option("--grid", grid, "grid size");

    auto* cmd_weak = app.add_subcommand("weak-closure", "recursive weak-closure membership");
    add_common(cmd_weak, &c);
    int depth = 4;
    int weak_grid = 9;
    std::vector<std::string> overrides;
    cmd_weak->add_option("--depth", depth, "recursion depth limit");
    cmd_weak->add_option("--grid", weak_grid, "grid size per fibered coordinate");
    cmd_weak->add_option("--override", overrides, "caller-asserted bounds var:a:b (repeatable)");

    auto* cmd_moment = app.add_subcommand("moment-dual", "moment/localizing matrix PSD check");
    add_common(cmd_moment, &c, false);
    std::string moments_file, dirac_csv;
    cmd_moment->add_option("--moments", moments_file, "pseudo-moments JSON {degree2d, values}");
    cmd_moment->add_option("--dirac", dirac_csv, "comma-separated point for Dirac moments");

    auto* cmd_appendix = app.add_subcommand("appendix", "sequential-closure peeling verification");
    int an = 2, am = 4, asamples = 200;
    std::uint64_t aseed = 7;
    bool cone_variant = false;
    bool with_points = false;
    std::string aout;
    cmd_appendix->add_option("--n", an, "number of steps");
    cmd_appendix->add_option("--m", am, "truncation dimension");
    cmd_appendix->add_option("--samples", asamples, "sample count");
    cmd_appendix->add_option("--seed", aseed, "rng seed");
    cmd_appendix->add_flag("--cone", cone_variant, "verify the conic-hull variant");
    cmd_appendix->add_flag("--points", with_points, "include per-point verdicts in the report");
    cmd_appendix->add_option("--out", aout, "write the JSON report to a file");

    auto* cmd_instances = app.add_subcommand("instances", "list or dump built-in instances");
    std::string dump_name;
    std::string iout;
    cmd_instances->add_option("--name", dump_name, "dump this instance as module JSON");
    cmd_instances->add_option("--out", iout, "write the JSON report to a file");

    CLI11_PARSE(app, argc, argv);

    try {
        Tolerances tol = tolerances_of(c);
        if (cmd_member->parsed()) {
            QuadraticModuleSpec M = load_module(c);
            Polynomial f = load_poly(c, M);
            MemberResult r = member(f, M, c.degree, tol);
            emit(to_json(r, M.vars), "member", config_json(c, tol), c.out);
        } else if (cmd_seq->parsed()) {
            QuadraticModuleSpec M = load_module(c);
            Polynomial f = load_poly(c, M);
            int e = seq_e > 0 ? seq_e : f.degree() / 2 + 1;
            SeqMemberResult r = seq_member(f, M, c.degree, e, parse_rat_list(eps_csv), tol);
            emit(to_json(r), "seq-member", config_json(c, tol), c.out);
        } else if (cmd_pos->parsed()) {
            QuadraticModuleSpec M = load_module(c);
            Polynomial f = load_poly(c, M);
            PosSemiResult r = pos_semiordering(f, M, c.degree, m_max, tol);
            Json j;
            j["status"] = status_string(r.status);
            j["note"] = r.note;
            if (r.certificate) {
                j["m"] = r.certificate->m;
                j["residual"] = to_json(r.certificate->residual);
                j["q_certificate"] = to_json(r.certificate->q_cert, M.vars);
            }
            emit(j, "pos-semi", config_json(c, tol), c.out);
        } else if (cmd_arch->parsed()) {
            QuadraticModuleSpec M = load_module(c);
            ArchimedeanResult r = archimedean_probe(M, parse_rat_list(k_csv), c.degree, tol);
            Json j;
            j["status"] = r.certified ? "archimedean_certified" : "unknown";
            if (r.certified) {
                j["k"] = r.k.to_string();
                j["certificate"] = to_json(*r.certificate, M.vars);
            }
            Json probes = Json::array();
            for (const auto& [k, s] : r.probes) {
                Json p;
                p["k"] = k.to_string();
                p["status"] = status_string(s);
                probes.push_back(std::move(p));
            }
            j["probes"] = std::move(probes);
            j["one_sided"] = "a pass certifies; 'unknown' is never a refutation";
            emit(j, "archimedean", config_json(c, tol), c.out);
        } else if (cmd_support->parsed()) {
            QuadraticModuleSpec M = load_module(c);
            std::vector<Polynomial> cands;
            for (const auto& s : candidates) cands.push_back(parse_polynomial(s, M.vars));
            auto certs = support_probe(M, c.degree, cands, tol);
            Json arr = Json::array();
            for (const auto& sc : certs) arr.push_back(sc.h.to_string());
            Json j;
            j["certified_in_support"] = std::move(arr);
            emit(j, "support", config_json(c, tol), c.out);
        } else if (cmd_stable->parsed()) {
            QuadraticModuleSpec M = load_module(c);
            std::vector<Polynomial> forms;
            for (const auto& s : user_forms) forms.push_back(parse_polynomial(s, M.vars));
            StabilityEvidence ev = poly_stability(M, forms, tol);
            Json j;
            switch (ev.status) {
                case StabilityStatus::stable: j["status"] = "stable"; break;
                case StabilityStatus::hypothesis_failed: j["status"] = "hypothesis_failed"; break;
                case StabilityStatus::not_applicable: j["status"] = "not_applicable"; break;
                case StabilityStatus::empty_k: j["status"] = "empty_k"; break;
            }
            j["note"] = ev.note;
            if (!ev.base_point.empty()) j["base_point"] = ev.base_point;
            if (!ev.direction.empty()) j["direction"] = ev.direction;
            if (ev.witness) j["witness"] = ev.witness->to_string();
            Json bf = Json::array();
            for (const auto& b : ev.bounded_forms) {
                Json e;
                e["form"] = b.form.to_string();
                e["lo"] = b.lo;
                e["hi"] = b.hi;
                e["in_support"] = b.in_support;
                bf.push_back(std::move(e));
            }
            j["bounded_forms"] = std::move(bf);
            emit(j, "stable", config_json(c, tol), c.out);
        } else if (cmd_closure->parsed()) {
            QuadraticModuleSpec M = load_module(c);
            std::vector<Polynomial> rads;
            for (const auto& s : radical) rads.push_back(parse_polynomial(s, M.vars));
            QuadraticModuleSpec out_mod = stable_closure(M, rads);
            emit(to_json(out_mod), "closure-stable", config_json(c, tol), c.out);
        } else if (cmd_fiber->parsed()) {
            QuadraticModuleSpec M = load_module(c);
            FiberDecomposition dec = fiber_decompose(M, fiber_var, Rational::from_string(fiber_a),
                                                     Rational::from_string(fiber_b), grid);
            Json j = to_json(dec);
            if (!c.poly.empty() || !c.poly_file.empty()) {
                Polynomial f = load_poly(c, M);
                FiberMemberResult fm = fiber_member(f, dec, c.degree, tol);
                Json per = Json::array();
                for (auto s : fm.per_fiber) per.push_back(status_string(s));
                j["poly"] = f.to_string();
                j["per_fiber"] = std::move(per);
                j["aggregate"] = fm.member_on_all_grid_fibers
                                     ? "member_on_all_grid_fibers"
                                     : "fails_at:" + dec.grid[*fm.first_failure].to_string();
                j["grid_sampled"] = "positives are evidence on the sampled grid only";
            }
            emit(j, "fiber", config_json(c, tol), c.out);
        } else if (cmd_weak->parsed()) {
            QuadraticModuleSpec M = load_module(c);
            Polynomial f = load_poly(c, M);
            WeakClosureOptions opts;
            opts.depth_limit = depth;
            opts.d = c.degree;
            opts.grid_size = weak_grid;
            opts.tol = tol;
            for (const auto& ov : overrides) {
                auto p1 = ov.find(':');
                auto p2 = ov.find(':', p1 + 1);
                if (p1 == std::string::npos || p2 == std::string::npos)
                    throw std::invalid_argument("override must be var:a:b");
                opts.overrides.push_back(BoundOverride{ov.substr(0, p1),
                                                       Rational::from_string(ov.substr(p1 + 1, p2 - p1 - 1)),
                                                       Rational::from_string(ov.substr(p2 + 1))});
            }
            WeakClosureResult r = weak_closure_member(f, M, opts);
            Json j;
            switch (r.verdict) {
                case WeakClosureVerdict::member_at_grid: j["verdict"] = "member_at_grid"; break;
                case WeakClosureVerdict::no_certificate: j["verdict"] = "no_certificate"; break;
                case WeakClosureVerdict::depth_exhausted: j["verdict"] = "depth_exhausted"; break;
            }
            if (r.failed_at) j["failed_at"] = r.failed_at->to_string();
            j["grid_and_depth_qualified"] = true;
            j["trace"] = to_json(*r.trace);
            emit(j, "weak-closure", config_json(c, tol), c.out);
        } else if (cmd_moment->parsed()) {
            QuadraticModuleSpec M = load_module(c);
            PseudoMoments L;
            if (!dirac_csv.empty()) {
                std::vector<double> pt;
                for (const auto& r : parse_rat_list(dirac_csv)) pt.push_back(r.to_double());
                if (pt.size() != M.vars.size())
                    throw std::invalid_argument("dirac point arity mismatch");
                L = PseudoMoments::dirac(M.vars, pt, c.degree);
            } else if (!moments_file.empty()) {
                std::ifstream in(moments_file);
                if (!in) throw std::invalid_argument("cannot open moments file");
                Json mj = Json::parse(in);
                L.degree2d = mj.at("degree2d").get<int>();
                L.values = mj.at("values").get<std::vector<double>>();
                L.basis = monomial_basis(static_cast<int>(M.vars.size()), L.degree2d);
                if (L.values.size() != L.basis.size())
                    throw std::invalid_argument("moments: values length mismatch");
            } else {
                throw std::invalid_argument("provide --moments or --dirac");
            }
            MomentCheckResult r = dual_moment_check(L, M, c.degree, tol);
            Json j;
            j["status"] = r.psd_pass ? "psd_pass" : "psd_fail";
            j["mineigs"] = r.mineigs;
            if (!r.psd_pass) {
                j["failing_block"] = r.failing_block;
                j["witness_vector"] = r.witness_vector;
                j["witness_value"] = r.witness_value;
                if (r.witness_polynomial) j["witness_polynomial"] = r.witness_polynomial->to_string();
            }
            emit(j, "moment-dual", config_json(c, tol), c.out);
        } else if (cmd_appendix->parsed()) {
            StepReport rep = cone_variant ? cc_seq_step_verify(an, am, asamples, aseed)
                                          : seq_step_verify(an, am, asamples, aseed);
            Json cfg;
            cfg["n"] = an;
            cfg["m"] = am;
            cfg["samples"] = asamples;
            cfg["seed"] = aseed;
            cfg["cone"] = cone_variant;
            emit(to_json(rep, with_points), "appendix", cfg, aout);
        } else if (cmd_instances->parsed()) {
            Json j;
            if (dump_name.empty()) {
                j["instances"] = instance_names();
            } else {
                j = to_json(get_instance(dump_name));
            }
            emit(j, "instances", Json::object(), iout);
        }
    } catch (const LimitError& e) {
        std::cerr << "limit exceeded: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
