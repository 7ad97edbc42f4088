#include "rop/config.hpp"
#include "rop/factorize.hpp"
#include "rop/run.hpp"
#include "rop/variants.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace rop;

namespace {

// Indices can exceed 64 bits; go through decimal text both ways.
py::int_ to_py(Index v) { return py::reinterpret_steal<py::int_>(PyLong_FromString(to_string(v).c_str(), nullptr, 10)); }
Index from_py(const py::int_& v) { return parse_index(py::str(py::handle(v)).cast<std::string>()); }

Real real_from_py(const py::handle& h) {
    if (py::isinstance<py::str>(h)) {
        const std::string s = h.cast<std::string>();
        return s.find('/') != std::string::npos ? to_real(parse_rational(s)) : parse_real(s);
    }
    if (py::isinstance<py::int_>(h)) return to_real(from_py(h.cast<py::int_>()));
    return Real(h.cast<double>());
}

double to_double(const Real& x) { return x.convert_to<double>(); }

FVector vec_from_py(const py::dict& d) {
    FVector x;
    for (const auto& [k, v] : d) x.set(from_py(k.cast<py::int_>()), real_from_py(v));
    return x;
}

py::dict vec_to_py(const FVector& x) {
    py::dict d;
    for (const auto& [j, v] : x) d[to_py(j)] = to_double(v);
    return d;
}

py::dict report_to_py(const CertReport& r) {
    py::dict d;
    d["id"] = r.id;
    d["anchor"] = r.anchor;
    d["claimed"] = to_double(r.claimed);
    d["measured"] = to_double(r.measured);
    d["pass"] = r.pass;
    d["caveat"] = r.caveat;
    d["line"] = r.line();
    return d;
}

py::list reports_to_py(const std::vector<CertReport>& rs) {
    py::list l;
    for (const auto& r : rs) l.append(report_to_py(r));
    return l;
}

ScheduleParams params_from(const std::string& config, const std::string& variant) {
    if (!config.empty()) {
        std::istringstream in(config);
        return parse_schedule_config(in);
    }
    if (variant == "th1") {
        auto p = ScheduleParams::desk_multi_copy();
        p.n_max = 3;
        p.budget_log2 = 120;
        return p;
    }
    if (variant == "hilbert") return ScheduleParams::hilbert(Rational(1, 2));
    if (variant == "th2") return ScheduleParams::desk();
    throw Error(Errc::InvalidParams, "unknown variant '" + variant + "'");
}

Schedule build(const ScheduleParams& p) { return p.variant == Variant::Th1 ? build_multi_copy(p) : build_schedule(p); }

Command command_from(const std::string& c) {
    static const std::map<std::string, Command> m{{"build", Command::Build},   {"validate", Command::Validate},
                                                  {"verify", Command::Verify}, {"orbit", Command::Orbit},
                                                  {"demo", Command::Demo},     {"factorize", Command::Factorize},
                                                  {"export", Command::Export}};
    auto it = m.find(c);
    if (it == m.end()) throw Error(Errc::InvalidParams, "unknown command '" + c + "'");
    return it->second;
}

}  // namespace

PYBIND11_MODULE(rop, m) {
    m.doc() = "Finite-truncation checks for an operator without invariant subsets";
    py::register_exception<Error>(m, "RopError", PyExc_RuntimeError);

    m.def("set_precision", &set_precision_bits, py::arg("bits"));
    m.def("precision", &precision_bits);

    m.def(
        "config",
        [](const std::string& text, const std::string& variant) {
            return format_schedule_config(params_from(text, variant));
        },
        py::arg("text") = "", py::arg("variant") = "th2", "normalized key=value schedule config");

    py::class_<Schedule>(m, "Schedule")
        .def_static(
            "build", [](const std::string& config, const std::string& variant) { return build(params_from(config, variant)); },
            py::arg("config") = "", py::arg("variant") = "th2")
        .def_property_readonly("n_max", &Schedule::n_max)
        .def_property_readonly("horizon", [](const Schedule& s) { return to_py(s.horizon); })
        .def("xi", [](const Schedule& s, int n) { return to_py(s.xi(n)); })
        .def("a", [](const Schedule& s, int n) { return to_py(s.a(n)); })
        .def("step",
             [](const Schedule& s, int n) {
                 const StepLayout& st = s.step(n);
                 py::dict d;
                 d["xi"] = to_py(st.xi);
                 d["a"] = to_py(st.a);
                 d["b"] = to_py(st.b);
                 d["nu"] = to_py(st.nu);
                 d["mu"] = to_py(st.mu);
                 py::list c;
                 for (Index v : st.c) c.append(to_py(v));
                 d["c"] = c;
                 d["log2_gamma"] = to_py(st.log2_gamma);
                 return d;
             })
        .def("dump", &Schedule::dump, py::arg("fan_limit") = 4096);

    py::class_<Basis, std::shared_ptr<Basis>>(m, "Basis")
        .def(py::init([](const Schedule& s) { return std::make_shared<Basis>(s); }))
        .def_property_readonly("horizon", [](const Basis& b) { return to_py(b.horizon()); })
        .def("e_in_f", [](const Basis& b, const py::int_& j) { return vec_to_py(b.e_in_f(from_py(j))); })
        .def("e_to_f", [](const Basis& b, const py::dict& x) { return vec_to_py(b.e_to_f(vec_from_py(x))); })
        .def("f_to_e", [](const Basis& b, const py::dict& x) { return vec_to_py(b.f_to_e(vec_from_py(x))); })
        .def("apply_T", [](const Basis& b, const py::dict& x) { return vec_to_py(apply_T(b, vec_from_py(x))); })
        .def("norm", [](const Basis& b, const py::dict& x) { return to_double(b.norm(vec_from_py(x))); });

    m.def("check_names", &check_names);
    m.def(
        "run_checks",
        [](const Basis& b, const std::vector<std::string>& names, int steps, std::uint64_t seed) {
            return reports_to_py(run_checks(b, {names.begin(), names.end()}, steps, seed));
        },
        py::arg("basis"), py::arg("names"), py::arg("steps") = 1, py::arg("seed") = 1);

    m.def(
        "orbit_distance",
        [](const Basis& b, const py::dict& x, const py::dict& target, const py::int_& horizon) {
            auto [c, d] = orbit_distance(b, vec_from_py(x), vec_from_py(target), from_py(horizon));
            return py::make_tuple(to_py(c), to_double(d));
        },
        py::arg("basis"), py::arg("x"), py::arg("target"), py::arg("horizon"));

    m.def(
        "demo_p3",
        [](const py::dict& x, int n, const std::string& config) {
            VerificationConstants k;
            ScheduleParams p = params_from(config, "th2");
            DemoResult r = demo_p3(p, vec_from_py(x), n, k);
            py::dict d;
            d["c"] = to_py(r.c);
            d["dist"] = to_double(r.dist);
            d["bound"] = to_double(r.bound);
            d["report"] = report_to_py(r.report);
            return d;
        },
        py::arg("x"), py::arg("n") = 1, py::arg("config") = "");

    m.def(
        "factorize",
        [](const Basis& b, const py::int_& N) {
            Factorization fz = build_factorization(b, from_py(N));
            T0Split sp = split_T0(fz);
            py::dict d;
            d["eq5_partial"] = to_double(fz.eq5_partial);
            py::list jt;
            for (Index j : fz.Jtilde) jt.append(to_py(j));
            d["jtilde"] = jt;
            d["reports"] = reports_to_py(
                {check_BA(b, fz), check_S2_contraction(sp), check_K2(fz, sp), check_kernel_localization(b, fz).report});
            return d;
        },
        py::arg("basis"), py::arg("N"));

    m.def(
        "hilbert_checks", [](const std::string& eps) { return reports_to_py(check_hilbert(build_hilbert(parse_rational(eps)))); },
        py::arg("epsilon") = "1/2");

    m.def(
        "run",
        [](const std::string& command, const py::kwargs& kw) {
            RunConfig cfg;
            cfg.command = command_from(command);
            for (const auto& [k, v] : kw) {
                const std::string key = k.cast<std::string>();
                if (key == "schedule") cfg.schedule_path = v.cast<std::string>();
                else if (key == "variant") cfg.variant = v.cast<std::string>();
                else if (key == "steps") cfg.steps = v.cast<int>();
                else if (key == "checks") cfg.checks = v.cast<std::vector<std::string>>();
                else if (key == "vectors") cfg.vectors_path = v.cast<std::string>();
                else if (key == "out") cfg.out_dir = v.cast<std::string>();
                else if (key == "precision") cfg.precision = v.cast<unsigned>();
                else if (key == "seed") cfg.seed = v.cast<std::uint64_t>();
                else if (key == "p") cfg.p = py::str(v);
                else if (key == "N") cfg.N = py::str(v);
                else if (key == "eq5_budget") cfg.eq5_budget = py::str(v);
                else throw Error(Errc::InvalidParams, "unknown option '" + key + "'");
            }
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = rop::run(cfg, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("command"), "same commands and exit codes as the CLI; returns (status, stdout, stderr)");
}
