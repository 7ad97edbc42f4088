#include "rop/run.hpp"

#include "rop/config.hpp"
#include "rop/factorize.hpp"
#include "rop/variants.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace rop {

namespace {

struct Usage : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every artifact goes through here, in call order, so reruns are byte-identical.
class Emitter {
public:
    Emitter(const std::string& dir, std::ostream& out) : dir_(dir), out_(out) {
        if (!dir_.empty()) fs::create_directories(dir_);
    }
    void file(const std::string& name, const std::string& text) {
        if (dir_.empty()) return;
        std::ofstream f(fs::path(dir_) / name, std::ios::binary);
        f << text;
        if (!f) throw std::runtime_error("cannot write " + name);
    }
    void reports(const std::vector<CertReport>& rs) {
        const std::string text = report_lines(rs);
        out_ << text;
        file("reports.txt", text);
    }
    std::ostream& out() { return out_; }

private:
    std::string dir_;
    std::ostream& out_;
};

ScheduleParams th1_default() {
    auto p = ScheduleParams::desk_multi_copy();
    p.n_max = 3;
    p.budget_log2 = 120;
    return p;
}

ScheduleParams load_params(const RunConfig& cfg) {
    if (cfg.variant != "th2" && cfg.variant != "th1" && cfg.variant != "hilbert")
        throw Usage("unknown variant '" + cfg.variant + "'");
    ScheduleParams p;
    if (!cfg.schedule_path.empty()) {
        if (!fs::exists(cfg.schedule_path)) throw Usage("schedule file not found: " + cfg.schedule_path);
        try {
            p = load_schedule_config(cfg.schedule_path);
        } catch (const Error& e) {
            throw Usage(e.what());
        }
    } else if (cfg.variant == "th1") {
        p = th1_default();
    } else if (cfg.variant == "hilbert") {
        p = ScheduleParams::hilbert(Rational(1, 2));
    } else {
        p = ScheduleParams::desk();
    }
    if ((cfg.variant == "th1") != (p.variant == Variant::Th1))
        throw Usage("schedule variant does not match --variant " + cfg.variant);
    return p;
}

Schedule build_for(const ScheduleParams& p) {
    return p.variant == Variant::Th1 ? build_multi_copy(p) : build_schedule(p);
}

std::vector<FVector> load_vectors(const RunConfig& cfg) {
    if (cfg.vectors_path.empty()) return {};
    std::ifstream f(cfg.vectors_path);
    if (!f) throw Usage("vector file not found: " + cfg.vectors_path);
    try {
        return parse_vectors(f);
    } catch (const Error& e) {
        throw Usage(e.what());
    }
}

void check_horizon(const std::vector<FVector>& xs, Index horizon) {
    for (const auto& x : xs)
        if (!x.empty() && x.max_index() >= horizon)
            throw Usage("vector index " + to_string(x.max_index()) + " beyond the horizon " + to_string(horizon));
}

Index index_arg(const std::string& v, Index fallback) {
    if (v.empty()) return fallback;
    try {
        return parse_index(v);
    } catch (const Error& e) {
        throw Usage(e.what());
    }
}

Real real_arg(const std::string& v) {
    try {
        return to_real(parse_rational(v));
    } catch (const Error& e) {
        throw Usage(e.what());
    }
}

std::set<std::string> check_set(const RunConfig& cfg, const std::vector<std::string>& all) {
    if (cfg.checks.empty()) return {all.begin(), all.end()};
    for (const auto& c : cfg.checks)
        if (std::find(all.begin(), all.end(), c) == all.end()) throw Usage("unknown check '" + c + "'");
    return {cfg.checks.begin(), cfg.checks.end()};
}

int step_arg(const RunConfig& cfg, const Schedule& s) {
    if (cfg.steps < 1 || cfg.steps > s.n_max())
        throw Usage("--steps must lie in [1, " + std::to_string(s.n_max()) + "]");
    return cfg.steps;
}

CertReport failed(const std::string& id, const std::string& why) {
    CertReport r = CertReport::make(id, "pipeline", Real(0), Real(1), why);
    r.pass = false;
    return r;
}

// (a)/(b) parts first, then each vector's q enters the net of step n.
ScheduleParams co_design(const ScheduleParams& p, const std::vector<FVector>& xs, int n, Emitter& em) {
    if (xs.empty() || p.variant == Variant::Th1) return p;
    Basis phase1(build_schedule(p));
    VerificationConstants k;
    std::vector<Polynomial> qs;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        try {
            qs.push_back(plan_p3(phase1, xs[i], n, k).q);
        } catch (const Error& e) {
            em.out() << "# vector " << i << " skipped: " << e.what() << "\n";
        }
    }
    return qs.empty() ? p : inject_net(p, n, qs);
}

int cmd_build(const RunConfig& cfg, Emitter& em) {
    ScheduleParams p = load_params(cfg);
    auto xs = load_vectors(cfg);
    Schedule s0 = build_for(p);
    check_horizon(xs, s0.horizon);
    p = co_design(p, xs, step_arg(cfg, s0), em);
    Schedule s = build_for(p);
    em.file("schedule.txt", s.dump());
    em.file("config.txt", format_schedule_config(p));
    em.out() << "n_max " << s.n_max() << "\nhorizon " << to_string(s.horizon) << "\n";
    for (int n = 1; n <= s.n_max(); ++n) {
        const StepLayout& st = s.step(n);
        em.out() << "step " << n << " xi " << to_string(st.xi) << " a " << to_string(st.a) << " nu "
                 << to_string(st.nu) << " k " << st.c.size() << "\n";
    }
    return 0;
}

int cmd_validate(const RunConfig& cfg, Emitter& em) {
    Schedule s = build_for(load_params(cfg));
    auto rs = validate_schedule(s, check_set(cfg, schedule_check_names()));
    em.reports(rs);
    return all_pass(rs) ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, Emitter& em) {
    ScheduleParams p = load_params(cfg);
    std::vector<CertReport> rs;
    if (cfg.variant == "hilbert") {
        HilbertInstance h;
        h.epsilon = p.epsilon;
        h.basis = std::make_shared<Basis>(build_schedule(p));
        rs = check_hilbert(h);
    } else {
        Basis b(build_for(p));
        const int steps = step_arg(cfg, b.schedule());
        std::set<std::string> names = check_set(cfg, check_names());
        if (cfg.variant == "th1") {
            // the single-copy projections do not apply; fact-a is the multi-copy identity
            if (names.erase("fact-a")) rs.push_back(check_fact1bis(b));
            names.erase("shift");
            names.erase("boundedness");
            names.erase("prop3");
            names.erase("b-damping");
            if (cfg.checks.empty()) names.clear();
        }
        for (auto& r : run_checks(b, names, steps, cfg.seed)) rs.push_back(std::move(r));
    }
    em.reports(rs);
    return all_pass(rs) ? 0 : 1;
}

int cmd_orbit(const RunConfig& cfg, Emitter& em) {
    ScheduleParams p = load_params(cfg);
    auto xs = load_vectors(cfg);
    if (xs.empty()) throw Usage("orbit needs --vectors with x (and optionally the target)");
    Basis b(build_for(p));
    check_horizon(xs, b.horizon());
    const FVector target = xs.size() > 1 ? xs[1] : FVector::unit(0);
    const Index h = index_arg(cfg.N, b.schedule().step(1).nu);
    auto [c, d] = orbit_distance(b, xs[0], target, h);
    std::ostringstream o;
    o << "c " << to_string(c) << "\ndist " << dec(d, 30) << "\ndist_hex " << hex(d) << "\n";
    em.out() << o.str();
    em.file("orbit.txt", o.str());
    return 0;
}

int cmd_demo(const RunConfig& cfg, Emitter& em) {
    ScheduleParams p = load_params(cfg);
    auto xs = load_vectors(cfg);
    if (xs.empty()) xs.push_back(FVector::unit(0));
    VerificationConstants k;
    std::vector<CertReport> rs;
    if (cfg.variant == "hilbert") {
        HilbertInstance h;
        h.epsilon = p.epsilon;
        h.basis = std::make_shared<Basis>(build_schedule(p));
        check_horizon(xs, h.basis->horizon());
        for (const auto& x : xs) rs.push_back(check_propnewC(h, x, k));
    } else {
        Schedule s = build_for(p);
        check_horizon(xs, s.horizon);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const std::string id = "demo.v" + std::to_string(i);
            try {
                if (cfg.variant == "th1") {
                    auto r = demo_hypercyclic(p, xs[i], cfg.demo_N, cfg.demo_n, k);
                    r.report.id = id;
                    rs.push_back(r.report);
                } else {
                    auto r = demo_p3(p, xs[i], step_arg(cfg, s), k);
                    r.report.id = id;
                    rs.push_back(r.report);
                }
            } catch (const Error& e) {
                rs.push_back(failed(id, std::string(errc_name(e.code())) + ": " + e.what()));
            }
        }
        em.out() << "# log2 D measured " << dec(k.log2_D_measured, 10) << " at " << k.D_instance << "\n";
    }
    em.reports(rs);
    return all_pass(rs) ? 0 : 1;
}

int cmd_factorize(const RunConfig& cfg, Emitter& em) {
    ScheduleParams p = load_params(cfg);
    if (p.variant == Variant::Th1) throw Usage("factorize runs on the single-copy build");
    p.space = SpaceKind::Lp;
    try {
        p.p = parse_rational(cfg.p);
    } catch (const Error& e) {
        throw Usage(e.what());
    }
    if (!(p.p > 1)) throw Usage("--p must exceed 1");
    const Real budget = real_arg(cfg.eq5_budget);
    Basis b(build_schedule(p));
    const Schedule& s = b.schedule();
    const Index N = index_arg(cfg.N, std::min(s.xi(2), b.horizon() - 2));
    if (N < 0 || N + 1 >= b.horizon()) throw Usage("--N outside the horizon");

    Factorization fz = build_factorization(b, N);
    T0Split sp = split_T0(fz);
    std::vector<CertReport> rs{check_BA(b, fz), check_S2_contraction(sp), check_K2(fz, sp)};
    em.file("A.txt", export_triplets(fz.A));
    em.file("B.txt", export_triplets(fz.B));

    const unsigned bits = factorization_precision_bits(s, N);
    {
        const unsigned old = precision_bits();
        set_precision_bits(bits);
        try {
            Basis hb(build_schedule(p));
            rs.push_back(check_kernel_localization(hb, build_factorization(hb, N, Real(INFINITY), true)).report);
        } catch (...) {
            set_precision_bits(old);
            throw;
        }
        set_precision_bits(old);
    }
    rs.push_back(check_eq5(eq5_census(b, std::max(2, cfg.steps)), budget));
    em.out() << "# N " << to_string(N) << " |J~| " << fz.Jtilde.size() << " eq5_partial " << dec(fz.eq5_partial, 10)
             << "\n";
    em.reports(rs);
    return all_pass(rs) ? 0 : 1;
}

int cmd_export(const RunConfig& cfg, Emitter& em) {
    ScheduleParams p = load_params(cfg);
    Basis b(build_for(p));
    const Schedule& s = b.schedule();
    const Index N = index_arg(cfg.N, std::min(s.step(1).nu, b.horizon() - 1));
    if (N < 0 || N >= b.horizon()) throw Usage("--N outside the horizon");
    SparseOperator T = assemble(b, N);
    const std::string trip = export_triplets(T);
    em.file("schedule.txt", s.dump());
    em.file("config.txt", format_schedule_config(p));
    em.file("T.txt", trip);
    if (cfg.out_dir.empty()) em.out() << trip;
    else em.out() << "T on F_" << to_string(N) << ": " << T.columns.size() << " columns\n";
    return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.precision < 128) {
        err << "usage: --precision must be at least 128\n";
        return 2;
    }
    const unsigned old = precision_bits();
    set_precision_bits(cfg.precision);
    int code = 0;
    try {
        Emitter em(cfg.out_dir, out);
        switch (cfg.command) {
            case Command::Build: code = cmd_build(cfg, em); break;
            case Command::Validate: code = cmd_validate(cfg, em); break;
            case Command::Verify: code = cmd_verify(cfg, em); break;
            case Command::Orbit: code = cmd_orbit(cfg, em); break;
            case Command::Demo: code = cmd_demo(cfg, em); break;
            case Command::Factorize: code = cmd_factorize(cfg, em); break;
            case Command::Export: code = cmd_export(cfg, em); break;
        }
    } catch (const Usage& e) {
        err << "usage: " << e.what() << "\n";
        code = 2;
    } catch (const Error& e) {
        err << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
        code = e.code() == Errc::ParseError ? 2 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        code = 1;
    }
    set_precision_bits(old);
    return code;
}

}  // namespace rop
