#include "rop/variants.hpp"

#include <mpfr.h>

namespace rop {

namespace {

Real pi_real() {
    Real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

// slack for the rounding of a few hundred operations at working precision
Real rounding_slack() { return exp2r(Real(-static_cast<long>(precision_bits()) + 40)); }

}  // namespace

CopyLayout copy_layout(const Basis& b, Index per_interval) {
    const Schedule& s = b.schedule();
    if (!s.is_th1()) throw Error(Errc::InvalidParams, "copy layout belongs to the multi-copy build");
    CopyLayout L;
    L.d = s.d;
    for (int n = 1; n <= s.n_max(); ++n) {
        const StepLayout& st = s.step(n);
        for (int r = 1; r <= n; ++r) {
            const Index lo = r * st.a;
            const Index hi = std::min(lo + s.xi(n + 1 - r), lo + per_interval - 1);
            for (Index j = lo; j <= hi; ++j) {
                FIdentity id = b.f_identity(j);
                L.members[id.d].emplace_back(j, id.i);
            }
        }
    }
    return L;
}

Schedule build_multi_copy(ScheduleParams params) {
    params.variant = Variant::Th1;
    return build_schedule_multi(params);
}

CertReport check_fact1bis(const Basis& b) {
    if (!b.schedule().is_th1()) throw Error(Errc::InvalidParams, "fact1bis belongs to the multi-copy build");
    CertReport r = check_fact_a(b);
    r.id = "fact1bis.identity";
    return r;
}

CertReport check_prop6bis(const Basis& b, const FVector& x, int N, const VerificationConstants& k) {
    const Schedule& s = b.schedule();
    if (!s.is_th1()) throw Error(Errc::InvalidParams, "prop6bis belongs to the multi-copy build");
    std::string found;
    for (int n = N + 2; n <= s.n_max() && found.empty(); ++n) {
        const Index cutoff = (n - N) * s.a(n) - 1;
        auto j = find_large_coordinate(b, x, n, k.log2_A, cutoff);
        if (j) found = "n=" + std::to_string(n) + " j=" + to_string(*j);
    }
    CertReport r = CertReport::make("prop6bis.N" + std::to_string(N), "large coordinate below (n-N)a_n", Real(0),
                                    Real(found.empty() ? 1 : 0),
                                    found.empty() ? "none for n<=" + std::to_string(s.n_max()) : found);
    return r;
}

HypercyclicResult demo_hypercyclic(const ScheduleParams& params, const FVector& x, int N, int n,
                                   VerificationConstants& k) {
    if (x.empty()) throw Error(Errc::InvalidParams, "x = 0");
    if (N < 1 || n < N + 2) throw Error(Errc::InvalidParams, "need n >= N+2 >= 3");
    Basis phase1(build_multi_copy(params));
    const Schedule& s = phase1.schedule();
    if (n > s.n_max()) throw Error(Errc::StepNotBuilt, "step " + std::to_string(n));
    const StepLayout& st = s.step(n);
    const Index M = (n - N) * st.a;
    auto jn = find_large_coordinate(phase1, x, n, k.log2_A, M - 1);
    if (!jn) throw Error(Errc::NoLargeCoordinate, "no large coordinate below (n-N)a_n");
    FVector xe = phase1.f_to_e(apply_Q(phase1, QKind::Mu, n, x)).restricted(*jn, st.mu);
    const Index spread = xe.max_index() - *jn;
    // the series solve is cut once the leftover lands past J_{n,n-N}, i.e. in
    // the lay-off after it where every e_j is tiny
    const Index W = s.xi(N + 1) + spread + 2;
    if (M + W + spread >= st.mu) throw Error(Errc::InvalidParams, "window does not fit below mu_n");
    Polynomial p = solve_fact_f(xe, FVector::unit(M - 1), st.mu, *jn, W);
    const Real lead = xe.get(*jn);
    Real log2D = log2abs(p.modulus()) + to_real(st.mu - *jn + 1) * log2abs(lead);
    if (log2D > k.log2_D_measured) {
        k.log2_D_measured = log2D;
        k.D_instance = "th1 n=" + std::to_string(n) + " j_n=" + to_string(*jn);
    }
    Polynomial q = p.shifted(st.b + 1).scaled(1 / to_real(st.b));
    if (q.modulus() > 2) throw Error(Errc::NetMiss, "|q_n| = " + dec(q.modulus(), 8) + " exceeds 2");
    if (q.degree() > st.l) throw Error(Errc::NetMiss, "deg q_n exceeds l_n");

    Basis phase2(build_multi_copy(inject_net(params, n, {q})));
    const StepLayout& st2 = phase2.schedule().step(n);
    if (st2.a != st.a || st2.b != st.b || st2.nu != st.nu)
        throw Error(Errc::InvalidParams, "injection moved the (a)/(b) layout");
    HypercyclicResult r;
    r.n = n;
    r.j_n = *jn;
    r.window = W;
    r.c = st2.c[0];
    FVector y = power_apply(phase2, r.c, x);
    y.add(0, Real(-1));
    r.dist = phase2.norm(y);
    r.bound = 1 / to_real(s.a(N)) + Real(7) / to_real(st.a);
    r.report = CertReport::make("hypercyclic.N" + std::to_string(N) + ".n" + std::to_string(n),
                                "|T^c x - e_0| < 1/a_N + 7/a_n", r.bound, r.dist,
                                "c=" + to_string(r.c) + " j_n=" + to_string(*jn) + " window=" + to_string(W) +
                                    " terms=" + std::to_string(q.terms()));
    r.report.pass = r.dist < r.bound;
    return r;
}

// ---- Hilbert ------------------------------------------------------------

Enclosure basel_tail(Index J) {
    if (J < 8) throw Error(Errc::InvalidParams, "tail enclosure needs J >= 8");
    const Real x = to_real(J);
    // sum_{j>J} j^-2 = 1/J - 1/(2J^2) + sum_k B_{2k} J^{-2k-1} + R_m
    static const Rational B[] = {Rational(1, 6), Rational(-1, 30), Rational(1, 42), Rational(-1, 30), Rational(5, 66),
                                 Rational(-691, 2730)};
    Real s = 1 / x - 1 / (2 * x * x);
    Real prev = s;
    Real pw = x * x * x;
    Real last;
    for (int k = 0; k < 6; ++k) {
        prev = s;
        s += to_real(B[k]) / pw;
        pw *= x * x;
    }
    last = s;
    // f = x^-2 is completely monotone, so consecutive truncations bracket the sum
    Enclosure e{rmin(prev, last), rmax(prev, last)};
    e.lo -= rounding_slack();
    e.hi += rounding_slack();
    return e;
}

Enclosure u0_norm_enclosure(const Rational& epsilon, Index J) {
    Real partial = 0;
    for (Index j = J; j >= 1; --j) {
        Real rj = to_real(j);
        partial += 1 / (rj * rj);
    }
    Enclosure t = basel_tail(J);
    const Real scale = sqrt(Real(3)) * to_real(epsilon) / pi_real();
    const Real slack = rounding_slack();
    return {scale * sqrt(partial + t.lo) - slack, scale * sqrt(partial + t.hi) + slack};
}

FVector HilbertInstance::x0_truncated() const {
    const Schedule& s = basis->schedule();
    FVector x = FVector::unit(0);
    for (int k = 1; k <= s.n_max(); ++k) x.set(s.a(k), s.alpha(k));
    return x;
}

HilbertInstance build_hilbert(const Rational& epsilon, int n_max) {
    ScheduleParams p = ScheduleParams::hilbert(epsilon);
    p.n_max = n_max;
    HilbertInstance h;
    h.epsilon = epsilon;
    h.basis = std::make_shared<Basis>(build_schedule(p));
    return h;
}

std::vector<CertReport> check_hilbert(const HilbertInstance& h) {
    const Basis& b = *h.basis;
    const Schedule& s = b.schedule();
    const Real eps = to_real(h.epsilon);
    const Real pi = pi_real();
    const Real c3 = 3 * eps * eps / (pi * pi);
    std::vector<CertReport> out;

    Enclosure u0 = u0_norm_enclosure(h.epsilon);
    const Real target = eps / sqrt(Real(2));
    CertReport enc = CertReport::make("hilbert.u0_width", "|u_0| = eps/sqrt2", exp2r(Real(-100)), u0.width(),
                                      "[" + dec(u0.lo, 40) + ", " + dec(u0.hi, 40) + "]");
    enc.pass = enc.pass && u0.contains(target);
    if (!u0.contains(target)) enc.caveat += " misses eps/sqrt2";
    out.push_back(enc);

    // |e_{a_n} - x_0|^2 = finite part over built steps + analytic tail
    const FVector x0 = h.x0_truncated();
    const Index nm = s.n_max();
    // terms nm < j <= Jt summed, Euler-Maclaurin beyond
    const Index Jt = std::max<Index>(nm, Index(1) << 16);
    Enclosure tail = basel_tail(Jt);
    Real mid_terms = 0;
    for (Index j = Jt; j > nm; --j) mid_terms += 1 / (to_real(j) * to_real(j));
    Real worst = 0;
    for (int n = 1; n <= s.n_max(); ++n) {
        Real fin = b.norm(b.e_in_f(s.a(n)) - x0);
        Real lhs = fin * fin + c3 * (mid_terms + (tail.lo + tail.hi) / 2);
        Real h2 = 0;
        for (Index j = 1; j <= n; ++j) h2 += 1 / (to_real(j) * to_real(j));
        Real rhs = eps * eps / 2 - c3 * h2;
        worst = rmax(worst, abs(lhs - rhs) + c3 * (tail.hi - tail.lo) / 2);
    }
    out.push_back(CertReport::make("hilbert.ean_minus_x0", "|e_{a_n} - x_0|^2 closed form", exp2r(Real(-100)), worst,
                                   "finite part over n<=" + std::to_string(s.n_max()) + " plus enclosed tail"));

    // T x_0 = 0 in the limit; the truncation leaves T e_{a_J}
    Real tx = b.norm(apply_T(b, x0));
    Real tail_norm = sqrt(c3 * (mid_terms + tail.hi));
    const Real rho = to_real(s.params.rho);
    out.push_back(CertReport::make("hilbert.T_x0", "T(u_0 + e_0) = 0", (1 + 2 * rho) * tail_norm, tx,
                                   "bound uses |T| <= 1+2rho on the dropped tail, log2|T x0_trunc|=" +
                                       dec(log2abs(tx), 10)));
    return out;
}

CertReport check_propnewC(const HilbertInstance& h, const FVector& x, const VerificationConstants& k) {
    const Basis& b = *h.basis;
    const Schedule& s = b.schedule();
    for (int n = 1; n <= s.n_max(); ++n) {
        auto j = find_large_coordinate(b, x, n, k.log2_C, s.a(n) - 1);
        if (j)
            return CertReport::make("propnewC", "large coordinate or colinear to x_0", Real(0), Real(0),
                                    "n=" + std::to_string(n) + " j=" + to_string(*j));
    }
    // orthonormal f-basis: cosine of the angle with x_0
    const FVector x0 = h.x0_truncated();
    Real dot = 0;
    for (const auto& [j, v] : x) dot += v * x0.get(j);
    Real cosang = abs(dot) / (b.norm(x) * b.norm(x0));
    CertReport r = CertReport::make("propnewC", "large coordinate or colinear to x_0", exp2r(Real(-100)), 1 - cosang,
                                    "no large coordinate; 1-cos(angle) reported");
    return r;
}

}  // namespace rop
