// One PASS/FAIL line per acceptance criterion, details as `#` lines.
// Always exits 0; the lines are the result.

#include "rop/factorize.hpp"
#include "rop/run.hpp"
#include "rop/variants.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace rop;
namespace fs = std::filesystem;

namespace {

struct Crit {
    int id;
    std::string what;
    bool pass = true;
    std::vector<std::string> notes;

    void add(const CertReport& r) {
        pass = pass && r.pass;
        notes.push_back(r.line() + (r.caveat.empty() ? "" : "  [" + r.caveat + "]"));
    }
    void note(const std::string& s) { notes.push_back(s); }
    void fail(const std::string& s) {
        pass = false;
        notes.push_back("failed: " + s);
    }
};

void emit(const Crit& c, double secs) {
    std::cout << "CRIT " << c.id << " " << (c.pass ? "PASS" : "FAIL") << " " << c.what << "\n";
    for (const auto& n : c.notes) std::cout << "  # " << n << "\n";
    std::ostringstream t;
    t.precision(3);
    t << std::fixed << secs;
    std::cout << "  # " << t.str() << " s\n" << std::flush;
}

template <class F>
void criterion(int id, const std::string& what, F&& body) {
    Crit c{id, what};
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.fail(e.what());
    }
    emit(c, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

struct PrecisionGuard {
    unsigned old = precision_bits();
    explicit PrecisionGuard(unsigned bits) { set_precision_bits(bits); }
    ~PrecisionGuard() { set_precision_bits(old); }
};

FVector vec(std::initializer_list<std::pair<int, Rational>> l) {
    FVector x;
    for (const auto& [i, v] : l) x.set(i, to_real(v));
    return x;
}

ScheduleParams th1_params() {
    auto p = ScheduleParams::desk_multi_copy();
    p.n_max = 3;
    p.budget_log2 = 120;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream o;
    o << f.rdbuf();
    return o.str();
}

}  // namespace

int main() {
    set_precision_bits(256);
    const ScheduleParams desk = ScheduleParams::desk();

    criterion(1, "shift identity |T e_j - e_{j+1}| <= 2^-200 |e_j|, j <= nu_2", [&](Crit& c) {
        PrecisionGuard g(512);
        Basis b(build_schedule(desk));
        c.note("512-bit working precision");
        for (const auto& r : run_checks(b, {"shift"}, 2)) c.add(r);
    });

    criterion(2, "boundedness: nuclear sum < rho, upper <= 2, lower >= 0.9 on F_xi2", [&](Crit& c) {
        Basis b(build_schedule(desk));
        std::vector<CertReport> parts;
        c.add(check_boundedness(b, b.schedule().xi(2), &parts));
        for (const auto& r : parts) c.add(r);
    });

    criterion(3, "fact-a identities exact, |e_{a_n} - e_0| = 1/4 < eps; multi-copy identity", [&](Crit& c) {
        Basis b(build_schedule(desk));
        CertReport fa = check_fact_a(b);
        c.add(fa);
        if (fa.measured != Real(1) / 4) c.fail("|e_{a_n} - e_0| = " + dec(fa.measured));
        Basis t1(build_multi_copy(th1_params()));
        c.add(check_fact1bis(t1));
    });

    criterion(4, "tail |T^{c_{k,1}}(I - Q_nu1)| <= 100 (single copy), <= 103 (multi-copy)", [&](Crit& c) {
        Basis b(build_schedule(desk));
        c.add(check_tail_bound(b, 1));
        Basis t1(build_multi_copy(th1_params()));
        c.add(check_tail_bound(t1, 1));
    });

    criterion(5, "(b)-damping at step 1 <= 1/sqrt(b_1)", [&](Crit& c) {
        Basis b(build_schedule(desk));
        c.add(check_b_damping(b, 1));
    });

    criterion(6, "|(T^{b_1+1}/b_1) pi_[a_1+1, nu_1]| <= 2/b_1", [&](Crit& c) {
        Basis b(build_schedule(desk));
        c.add(check_prop3(b, 1));
    });

    criterion(7, "triangular solver: 200 random exact instances, p(T_m)x = y", [&](Crit& c) {
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<int> num(-9, 9), den(1, 7), dim(1, 12);
        int bad = 0;
        for (int it = 0; it < 200; ++it) {
            const Index m = dim(rng) - 1;
            std::uniform_int_distribution<int> lo(0, static_cast<int>(m));
            const Index i = lo(rng);
            ExactVec x, y;
            for (Index j = i; j <= m; ++j) {
                Rational v(num(rng), den(rng));
                if (v != 0) x[j] = v;
                Rational w(num(rng), den(rng));
                if (w != 0) y[j] = w;
            }
            x[i] = Rational(1 + den(rng), den(rng));
            if (truncated_poly_apply(solve_fact_f_exact(x, y, m, i), x, m) != y) ++bad;
        }
        c.note("mismatches " + std::to_string(bad) + " of 200");
        if (bad) c.fail("solver mismatch");
    });

    criterion(8, "approximation demo on 11 co-designed vectors, brute force no worse", [&](Crit& c) {
        auto p = desk;
        p.n_max = 1;
        const std::vector<FVector> xs{
            vec({{0, 1}, {3, Rational(1, 8)}}), vec({{0, 2}}), vec({{1, 1}}), vec({{2, 1}, {5, Rational(1, 4)}}),
            vec({{0, 1}, {1, Rational(1, 2)}}), vec({{0, -1}, {2, Rational(1, 4)}}), vec({{3, 1}}),
            vec({{0, Rational(1, 2)}, {7, Rational(1, 10)}}), vec({{4, 1}, {6, Rational(-1, 8)}}),
            vec({{0, 1}, {16, Rational(1, 2)}}), vec({{5, 1}, {100, Rational(1, 4)}})};
        const Basis phase1(build_schedule(p));
        for (std::size_t i = 0; i < xs.size(); ++i) {
            VerificationConstants k;
            DemoResult r = demo_p3(p, xs[i], 1, k);
            r.report.id = "p3.v" + std::to_string(i);
            c.add(r.report);
            Basis b2(build_schedule(inject_net(p, 1, {plan_p3(phase1, xs[i], 1, k).q})));
            auto [bc, bd] = orbit_distance(b2, xs[i], FVector::unit(0), r.c);
            c.note("brute force c=" + to_string(bc) + " dist=" + dec(bd, 10));
            if (bd > r.dist) c.fail("brute force worse than the demo for vector " + std::to_string(i));
        }
    });

    criterion(9, "multi-copy hypercyclic demo N=1, n=3: dist < 1/a_N + 7/a_n", [&](Crit& c) {
        const std::vector<FVector> xs{vec({{0, 1}, {1, Rational(1, 10)}}), vec({{0, 1}}),
                                      vec({{0, 2}, {2, Rational(-3, 10)}}), vec({{1, 1}}),
                                      vec({{2, 1}, {3, Rational(1, 4)}}),
                                      vec({{0, -1}, {1, Rational(1, 5)}, {2, Rational(1, 20)}})};
        for (const auto& x : xs) {
            VerificationConstants k;
            c.add(demo_hypercyclic(th1_params(), x, 1, 3, k).report);
        }
    });

    criterion(10, "Hilbert: |u_0| enclosure, |e_{a_n} - x_0|^2, |T x_0| tail", [&](Crit& c) {
        for (const auto& r : check_hilbert(build_hilbert(Rational(1, 2)))) c.add(r);
    });

    criterion(11, "factorization: BA = T, |S_2| <= 1, kernel of B, summability of the nuclear weights", [&](Crit& c) {
        auto p = desk;
        p.p = 2;
        Basis b(build_schedule(p));
        const Index N = b.schedule().xi(2);
        Factorization fz = build_factorization(b, N);
        T0Split sp = split_T0(fz);
        c.add(check_BA(b, fz));
        c.add(check_S2_contraction(sp));
        c.add(check_K2(fz, sp));
        {
            PrecisionGuard g(factorization_precision_bits(b.schedule(), N));
            Basis hb(build_schedule(p));
            c.add(check_kernel_localization(hb, build_factorization(hb, N, Real(INFINITY), true)).report);
        }
        c.add(check_eq5(eq5_census(b, 2), Real(1)));
    });

    criterion(12, "determinism: two runs, byte-identical reports and exports", [&](Crit& c) {
        const fs::path root = fs::temp_directory_path() / "rop_acceptance_det";
        fs::remove_all(root);
        fs::create_directories(root);
        std::ofstream(root / "vectors.txt") << "0 1\n3 1/8\n\n2 1\n5 1/4\n";
        auto once = [&](const std::string& tag) {
            std::string all;
            const std::vector<std::pair<Command, std::vector<std::string>>> plan{
                {Command::Build, {}},
                {Command::Verify, {"fact-a", "b-damping", "prop3", "q-norm"}},
                {Command::Demo, {}},
                {Command::Export, {}}};
            int i = 0;
            for (const auto& [cmd, checks] : plan) {
                RunConfig cfg;
                cfg.command = cmd;
                cfg.checks = checks;
                cfg.vectors_path = (root / "vectors.txt").string();
                cfg.N = "300";
                cfg.out_dir = (root / tag / std::to_string(i++)).string();
                std::ostringstream out, err;
                run(cfg, out, err);
                all += out.str() + err.str();
            }
            std::vector<fs::path> files;
            for (const auto& e : fs::recursive_directory_iterator(root / tag))
                if (e.is_regular_file()) files.push_back(fs::relative(e.path(), root / tag));
            std::sort(files.begin(), files.end());
            for (const auto& f : files) all += f.string() + "\n" + slurp(root / tag / f);
            return all;
        };
        const std::string a = once("a"), b = once("b");
        c.note("compared " + std::to_string(a.size()) + " bytes");
        if (a != b) c.fail("runs differ");
        fs::remove_all(root);
    });
    return 0;
}
