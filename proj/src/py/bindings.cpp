// Python bindings for the main operations.  Structured results cross the
// boundary as plain dicts/lists built from the JSON encodings.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qmclose/instances.hpp"
#include "qmclose/json_io.hpp"

namespace py = pybind11;
using namespace qmclose;

namespace {

py::object json_to_py(const Json& j) {
    switch (j.type()) {
        case Json::value_t::null: return py::none();
        case Json::value_t::boolean: return py::bool_(j.get<bool>());
        case Json::value_t::number_integer: return py::int_(j.get<long long>());
        case Json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case Json::value_t::number_float: return py::float_(j.get<double>());
        case Json::value_t::string: return py::str(j.get<std::string>());
        case Json::value_t::array: {
            py::list out;
            for (const auto& e : j) out.append(json_to_py(e));
            return out;
        }
        default: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
    }
}

Json py_to_json(const py::handle& h) {
    if (h.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
    if (py::isinstance<py::int_>(h)) return h.cast<long long>();
    if (py::isinstance<py::float_>(h)) return h.cast<double>();
    if (py::isinstance<py::str>(h)) return h.cast<std::string>();
    if (py::isinstance<py::list>(h) || py::isinstance<py::tuple>(h)) {
        Json a = Json::array();
        for (const auto& e : h) a.push_back(py_to_json(e));
        return a;
    }
    if (py::isinstance<py::dict>(h)) {
        Json o = Json::object();
        for (const auto& kv : h.cast<py::dict>())
            o[kv.first.cast<std::string>()] = py_to_json(kv.second);
        return o;
    }
    throw std::invalid_argument("unsupported python value in module spec");
}

QuadraticModuleSpec module_arg(const py::object& spec) {
    if (py::isinstance<py::str>(spec)) return get_instance(spec.cast<std::string>());
    return module_from_json(py_to_json(spec));
}

Tolerances tol_arg(double feas, double psd) {
    Tolerances t;
    t.feas = feas;
    t.psd = psd;
    return t;
}

std::vector<Rational> rat_list(const std::vector<std::string>& xs) {
    std::vector<Rational> out;
    for (const auto& s : xs) out.push_back(Rational::from_string(s));
    return out;
}

}  // namespace

PYBIND11_MODULE(_qmclose, m) {
    m.doc() = "degree-truncated computations with quadratic modules of polynomial rings";

    m.def("instances", [] { return instance_names(); });
    m.def("instance", [](const std::string& name) { return json_to_py(to_json(get_instance(name))); });

    m.def(
        "parse_poly",
        [](const std::string& text, const std::vector<std::string>& vars) {
            return json_to_py(to_json(parse_polynomial(text, vars)));
        },
        py::arg("text"), py::arg("vars"));

    m.def(
        "evaluate",
        [](const std::string& text, const std::vector<std::string>& vars,
           const std::vector<double>& point) {
            Polynomial p = parse_polynomial(text, vars);
            VariableAssignment a;
            for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = point.at(i);
            return p.evaluate(a);
        },
        py::arg("text"), py::arg("vars"), py::arg("point"));

    m.def(
        "member",
        [](const py::object& module, const std::string& poly, int degree, double tol_feas,
           double tol_psd) {
            QuadraticModuleSpec M = module_arg(module);
            MemberResult r = member(parse_polynomial(poly, M.vars), M, degree,
                                    tol_arg(tol_feas, tol_psd));
            return json_to_py(to_json(r, M.vars));
        },
        py::arg("module"), py::arg("poly"), py::arg("degree"), py::arg("tol_feas") = 1e-8,
        py::arg("tol_psd") = 1e-8);

    m.def(
        "seq_member",
        [](const py::object& module, const std::string& poly, int degree, int e,
           const std::vector<std::string>& eps) {
            QuadraticModuleSpec M = module_arg(module);
            Polynomial f = parse_polynomial(poly, M.vars);
            int ee = e > 0 ? e : f.degree() / 2 + 1;
            return json_to_py(to_json(seq_member(f, M, degree, ee, rat_list(eps))));
        },
        py::arg("module"), py::arg("poly"), py::arg("degree"), py::arg("e") = 0,
        py::arg("eps") = std::vector<std::string>{"1", "1/10", "1/100"});

    m.def(
        "archimedean_probe",
        [](const py::object& module, const std::vector<std::string>& ks, int degree) {
            QuadraticModuleSpec M = module_arg(module);
            ArchimedeanResult r = archimedean_probe(M, rat_list(ks), degree);
            py::dict out;
            out["certified"] = r.certified;
            if (r.certified) out["k"] = r.k.to_string();
            return out;
        },
        py::arg("module"), py::arg("ks"), py::arg("degree"));

    m.def(
        "pos_semiordering",
        [](const py::object& module, const std::string& poly, int degree, int m_max) {
            QuadraticModuleSpec M = module_arg(module);
            PosSemiResult r = pos_semiordering(parse_polynomial(poly, M.vars), M, degree, m_max);
            py::dict out;
            out["status"] = status_string(r.status);
            if (r.certificate) out["m"] = r.certificate->m;
            return out;
        },
        py::arg("module"), py::arg("poly"), py::arg("degree"), py::arg("m_max") = 3);

    m.def(
        "poly_stability",
        [](const py::object& module) {
            QuadraticModuleSpec M = module_arg(module);
            StabilityEvidence ev = poly_stability(M);
            py::dict out;
            switch (ev.status) {
                case StabilityStatus::stable: out["status"] = "stable"; break;
                case StabilityStatus::hypothesis_failed: out["status"] = "hypothesis_failed"; break;
                case StabilityStatus::not_applicable: out["status"] = "not_applicable"; break;
                case StabilityStatus::empty_k: out["status"] = "empty_k"; break;
            }
            if (ev.witness) out["witness"] = ev.witness->to_string();
            out["direction"] = ev.direction;
            return out;
        },
        py::arg("module"));

    m.def(
        "fiber_decompose",
        [](const py::object& module, const std::string& var, const std::string& a,
           const std::string& b, int grid) {
            QuadraticModuleSpec M = module_arg(module);
            return json_to_py(to_json(
                fiber_decompose(M, var, Rational::from_string(a), Rational::from_string(b), grid)));
        },
        py::arg("module"), py::arg("var"), py::arg("a"), py::arg("b"), py::arg("grid") = 33);

    m.def(
        "weak_closure_member",
        [](const py::object& module, const std::string& poly, int degree, int depth, int grid) {
            QuadraticModuleSpec M = module_arg(module);
            WeakClosureOptions opts;
            opts.d = degree;
            opts.depth_limit = depth;
            opts.grid_size = grid;
            WeakClosureResult r = weak_closure_member(parse_polynomial(poly, M.vars), M, opts);
            py::dict out;
            switch (r.verdict) {
                case WeakClosureVerdict::member_at_grid: out["verdict"] = "member_at_grid"; break;
                case WeakClosureVerdict::no_certificate: out["verdict"] = "no_certificate"; break;
                case WeakClosureVerdict::depth_exhausted: out["verdict"] = "depth_exhausted"; break;
            }
            out["trace"] = json_to_py(to_json(*r.trace));
            return out;
        },
        py::arg("module"), py::arg("poly"), py::arg("degree") = 6, py::arg("depth") = 4,
        py::arg("grid") = 9);

    m.def(
        "dirac_moment_check",
        [](const py::object& module, const std::vector<double>& point, int degree) {
            QuadraticModuleSpec M = module_arg(module);
            PseudoMoments L = PseudoMoments::dirac(M.vars, point, degree);
            MomentCheckResult r = dual_moment_check(L, M, degree);
            py::dict out;
            out["psd_pass"] = r.psd_pass;
            out["mineigs"] = r.mineigs;
            return out;
        },
        py::arg("module"), py::arg("point"), py::arg("degree"));

    m.def(
        "in_Mn",
        [](const std::vector<double>& coords, int n, int search_bound) {
            AppendixPoint x{coords, static_cast<int>(coords.size())};
            MnResult r = in_Mn(x, n, search_bound);
            py::dict out;
            out["member"] = r.member;
            if (r.signature) out["signature"] = r.signature->l;
            return out;
        },
        py::arg("coords"), py::arg("n"), py::arg("search_bound") = 0);

    m.def(
        "in_ccMn",
        [](const std::vector<double>& coords, int n, int search_bound) {
            AppendixPoint x{coords, static_cast<int>(coords.size())};
            CcResult r = in_ccMn(x, n, search_bound);
            py::dict out;
            out["member"] = r.member;
            if (r.combination) {
                py::list atoms;
                for (const auto& a : r.combination->atoms) {
                    py::dict ad;
                    ad["coefficient"] = a.coefficient;
                    ad["coords"] = a.coords;
                    ad["signature"] = a.signature.l;
                    atoms.append(ad);
                }
                out["atoms"] = atoms;
            }
            return out;
        },
        py::arg("coords"), py::arg("n"), py::arg("search_bound") = 0);

    m.def(
        "seq_step_verify",
        [](int n, int m_dim, int samples, uint64_t seed, bool cone) {
            StepReport rep = cone ? cc_seq_step_verify(n, m_dim, samples, seed)
                                  : seq_step_verify(n, m_dim, samples, seed);
            return json_to_py(to_json(rep, false));
        },
        py::arg("n"), py::arg("m"), py::arg("samples") = 200, py::arg("seed") = 7,
        py::arg("cone") = false);

    m.def("min_eigenvalue", [](const std::vector<std::vector<double>>& rows) {
        size_t n = rows.size();
        Mat a(n, n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) a(i, j) = rows.at(i).at(j);
        return min_eigenvalue(a);
    });
}
