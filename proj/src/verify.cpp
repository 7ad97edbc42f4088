#include "rop/verify.hpp"

#include <gmp.h>

#include <algorithm>

namespace rop {

namespace {

constexpr Index kFactorialCap = 4096;

const StepLayout& built_step(const Basis& b, int n) {
    const Schedule& s = b.schedule();
    if (n < 1 || n > s.n_max()) throw Error(Errc::StepNotBuilt, "step " + std::to_string(n) + " is not built");
    return s.step(n);
}

// e-coordinates of x, with indices shifted by each term and summed
FVector combo_e(const FVector& xe, const std::vector<std::pair<Index, Real>>& terms) {
    FVector acc;
    for (const auto& [k, w] : terms)
        for (const auto& [i, v] : xe) acc.add(i + k, v * w);
    return acc;
}

std::vector<std::pair<Index, Real>> poly_terms(const Polynomial& p, const Real& scale = Real(1)) {
    std::vector<std::pair<Index, Real>> t;
    for (const auto& [k, v] : p.coeffs()) t.emplace_back(k, v * scale);
    return t;
}

// All of [lo, hi] if it has at most cap points, otherwise both ends, the
// listed marks inside, and an even spread.
std::vector<Index> column_set(Index lo, Index hi, std::size_t cap, const std::vector<Index>& marks, bool* sampled) {
    std::vector<Index> out;
    *sampled = false;
    if (hi < lo) return out;
    if (hi - lo + 1 <= static_cast<Index>(cap)) {
        for (Index j = lo; j <= hi; ++j) out.push_back(j);
        return out;
    }
    *sampled = true;
    const Index q = static_cast<Index>(cap / 4);
    for (Index j = lo; j < lo + q; ++j) out.push_back(j);
    for (Index j = hi - q + 1; j <= hi; ++j) out.push_back(j);
    for (Index m : marks)
        for (Index d = -1; d <= 1; ++d)
            if (m + d >= lo && m + d <= hi) out.push_back(m + d);
    const Index step = (hi - lo) / q;
    for (Index j = lo; j <= hi; j += step) out.push_back(j);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// interval endpoints of steps n and n+1 (first and last 64 of each)
std::vector<Index> step_marks(const Schedule& s, int n, std::size_t head = 64, std::size_t tail = 64) {
    std::vector<Index> m;
    for (int k = n; k <= std::min(n + 1, s.n_max()); ++k) {
        auto iv = step_intervals(s, k);
        for (std::size_t i = 0; i < iv.size(); ++i) {
            if (i >= head && i + tail < iv.size()) continue;
            m.push_back(iv[i].left);
            m.push_back(iv[i].right);
        }
    }
    return m;
}

// Q_nu(f_j) = -w e_{j - shift} for j in [lo, hi] above nu_n
struct QCorr {
    Index lo, hi, shift;
    Real w;
};

std::vector<QCorr> q_corrections(const Schedule& s, int n) {
    const StepLayout& st = s.step(n);
    const Index an1 = s.a(n + 1);
    if (!s.is_th1()) return {{an1, an1, an1 - st.a, 1 / s.alpha(n + 1)}};
    std::vector<QCorr> out;
    for (int r = 2; r <= n + 1; ++r)
        out.push_back({r * an1, r * an1 + s.xi(n + 2 - r), r * an1 - (r - 1) * st.a, to_real(s.a(n + 1 - r)) / s.alpha(r)});
    return out;
}

Real log2_or_floor(const Real& v) {
    return log2abs(v);  // -inf for 0
}

}  // namespace

// ---- thresholds ---------------------------------------------------------

Real LogThreshold::value() const {
    if (huge) return -std::numeric_limits<double>::infinity();
    return -(to_real(fac_sq) * base);
}

bool LogThreshold::admits(const Real& log2_abs) const {
    if (isinf(log2_abs) && log2_abs < 0) return false;
    if (huge) return true;
    return log2_abs >= value();
}

LogThreshold factorial_threshold(Index N, const Real& base) {
    if (N < 0) throw Error(Errc::InvalidParams, "negative factorial argument");
    if (base < 1) throw Error(Errc::InvalidParams, "threshold base below 2");
    LogThreshold t;
    t.base = base;
    if (N > kFactorialCap) {
        // N! > 2^N, so (N!)^2 * base > 2^8192 while log2 magnitudes of
        // representable numbers stay below 2^63
        t.huge = true;
        return t;
    }
    BigInt f;
    mpz_fac_ui(f.backend().data(), static_cast<unsigned long>(N));
    t.fac_sq = f * f;
    return t;
}

std::optional<Index> find_large_coordinate(const Basis& b, const FVector& x, int n, const Real& log2_base,
                                           Index cutoff) {
    const StepLayout& st = built_step(b, n);
    const bool th1 = b.schedule().is_th1();
    const Index top = th1 ? st.mu : st.a;
    FVector qx = apply_Q(b, th1 ? QKind::Mu : QKind::A, n, x);
    FVector xe = b.f_to_e(qx);
    for (const auto& [j, v] : xe) {
        if (j > cutoff || j > top) break;
        if (v == 0) continue;
        if (factorial_threshold(top - j + 1, log2_base).admits(log2abs(v))) return j;
    }
    return std::nullopt;
}

// ---- triangular polynomial solver -------------------------------------

Polynomial solve_fact_f(const FVector& xe, const FVector& ye, Index m, Index i_n, Index kmax) {
    if (!xe.empty() && (xe.min_index() < i_n || xe.max_index() > m))
        throw Error(Errc::NotInDomain, "x outside [i_n, m]");
    if (!ye.empty() && (ye.min_index() < i_n || ye.max_index() > m))
        throw Error(Errc::NotInDomain, "y outside [i_n, m]");
    const Real lead = xe.get(i_n);
    if (lead == 0) throw Error(Errc::ZeroLeading, "x has no e_" + to_string(i_n) + " coordinate");
    if (ye.empty()) return {};
    const Index k0 = ye.min_index() - i_n;
    Index kend = m - i_n;
    if (kmax >= 0) kend = std::min(kend, k0 + kmax);
    std::vector<std::pair<Index, Real>> tail;  // (t - i_n, x_t) for t > i_n
    for (const auto& [t, v] : xe)
        if (t > i_n) tail.emplace_back(t - i_n, v);
    const Real inv = 1 / lead;
    std::vector<Real> p(static_cast<std::size_t>(kend - k0 + 1));
    for (Index k = k0; k <= kend; ++k) {
        Real rhs = ye.get(i_n + k);
        for (const auto& [d, v] : tail) {
            if (k - d < k0) break;
            rhs -= p[static_cast<std::size_t>(k - d - k0)] * v;
        }
        p[static_cast<std::size_t>(k - k0)] = rhs * inv;
    }
    Polynomial out;
    for (std::size_t i = 0; i < p.size(); ++i) out.set(k0 + static_cast<Index>(i), p[i]);
    return out;
}

std::map<Index, Rational> solve_fact_f_exact(const ExactVec& xe, const ExactVec& ye, Index m, Index i_n) {
    auto lo_hi_ok = [&](const ExactVec& v) {
        return v.empty() || (v.begin()->first >= i_n && v.rbegin()->first <= m);
    };
    if (!lo_hi_ok(xe) || !lo_hi_ok(ye)) throw Error(Errc::NotInDomain, "vector outside [i_n, m]");
    auto it = xe.find(i_n);
    if (it == xe.end() || it->second == 0) throw Error(Errc::ZeroLeading, "x has no e_" + to_string(i_n) + " coordinate");
    const Rational lead = it->second;
    std::map<Index, Rational> p;
    if (ye.empty()) return p;
    const Index k0 = ye.begin()->first - i_n;
    for (Index k = k0; k <= m - i_n; ++k) {
        Rational rhs = 0;
        if (auto y = ye.find(i_n + k); y != ye.end()) rhs = y->second;
        for (const auto& [t, v] : xe) {
            if (t <= i_n) continue;
            Index d = t - i_n;
            if (k - d < k0) break;
            auto pk = p.find(k - d);
            if (pk != p.end()) rhs -= pk->second * v;
        }
        if (rhs != 0) p.emplace(k, rhs / lead);
    }
    return p;
}

ExactVec truncated_poly_apply(const std::map<Index, Rational>& p, const ExactVec& xe, Index m) {
    ExactVec acc;
    if (p.empty()) return acc;
    ExactVec y = xe;
    const Index deg = p.rbegin()->first;
    for (Index k = 0; k <= deg && !y.empty(); ++k) {
        if (auto c = p.find(k); c != p.end())
            for (const auto& [i, v] : y) {
                auto& slot = acc[i];
                slot += c->second * v;
                if (slot == 0) acc.erase(i);
            }
        // T_m: e_i -> e_{i+1}, e_m -> 0
        ExactVec next;
        for (const auto& [i, v] : y)
            if (i < m) next.emplace_hint(next.end(), i + 1, v);
        y = std::move(next);
    }
    return acc;
}

// ---- certified checks ---------------------------------------------------

CertReport check_shift(const Basis& b, Index N_exhaustive, const std::vector<Index>& samples) {
    std::unordered_map<Index, FVector, IndexHash> cols;
    auto col = [&](Index m) -> const FVector& {
        auto it = cols.find(m);
        if (it != cols.end()) return it->second;
        return cols.emplace(m, column_Tf(b, m)).first->second;
    };
    Real worst = -std::numeric_limits<double>::infinity();
    Index worst_j = -1, zeros = 0, count = 0;
    auto one = [&](Index j, const FVector& ej, const FVector& ej1) {
        FVector te;
        for (const auto& [m, v] : ej)
            for (const auto& [i, w] : col(m)) te.add(i, v * w);
        Real r = b.norm(te - ej1);
        ++count;
        if (r == 0) {
            ++zeros;
            return;
        }
        Real l = log2abs(r) - log2abs(b.norm(ej));
        if (l > worst) {
            worst = l;
            worst_j = j;
        }
    };
    FVector cur = b.e_in_f(0);
    for (Index j = 0; j <= N_exhaustive && j + 1 <= b.horizon(); ++j) {
        FVector nxt = b.e_in_f(j + 1);
        one(j, cur, nxt);
        cur = std::move(nxt);
    }
    std::size_t sampled = 0;
    for (Index j : samples) {
        if (j <= N_exhaustive || j + 1 > b.horizon()) continue;
        // far out the expansions reach back ~a_n terms; keep only this sample's columns
        cols.clear();
        one(j, b.e_in_f(j), b.e_in_f(j + 1));
        ++sampled;
    }
    std::string cav = "exhaustive j<=" + to_string(N_exhaustive) + ", " + std::to_string(sampled) +
                      " sampled beyond; " + to_string(zeros) + "/" + to_string(count) + " residuals exactly zero";
    if (worst_j >= 0) cav += "; worst at j=" + to_string(worst_j);
    return CertReport::make("shift.identity", "T e_j = e_{j+1}", Real(-200), worst, cav);
}

CertReport check_boundedness(const Basis& b, Index N, std::vector<CertReport>* parts, std::uint64_t seed) {
    const Schedule& s = b.schedule();
    SKDecomposition sk = sk_split(b, N, false);
    SparseOperator op = assemble(b, N);
    NormBound nb = operator_norm_bound(b, op, seed);
    const Real rho = to_real(s.params.rho);
    CertReport nuc = CertReport::make("bounded.nuclear_sum", "sum over J~ below rho", rho, sk.nuclear_bound,
                                      "columns j<=" + to_string(N) + ", |J~|=" + std::to_string(sk.Jtilde.size()));
    nuc.pass = sk.nuclear_bound < rho;
    CertReport up = CertReport::make("bounded.norm_upper", "|T| <= 1+2rho", 1 + 2 * rho, nb.upper,
                                     "F_" + to_string(N) + " via " + nb.method);
    CertReport low = CertReport::make("bounded.norm_lower", "shift part", Real(-0.9), -nb.lower,
                                      "measured lower bound, negated");
    if (parts) *parts = {nuc, up, low};
    CertReport all = up;
    all.id = "bounded";
    all.pass = nuc.pass && up.pass && low.pass;
    all.caveat = "nuclear=" + dec(sk.nuclear_bound, 8) + " upper=" + dec(nb.upper, 8) + " lower=" + dec(nb.lower, 8) +
                 " on F_" + to_string(N);
    return all;
}

CertReport check_fact_a(const Basis& b) {
    const Schedule& s = b.schedule();
    int checked = 0, bad = 0;
    Real worst_dist = 0;
    std::string where;
    auto compare = [&](Index idx, const ExactVec& expect, const std::string& tag) {
        auto got = b.e_to_f_exact(ExactVec{{idx, Rational(1)}});
        ++checked;
        if (!got || *got != expect) {
            ++bad;
            if (where.empty()) where = tag + (got ? " differs" : " left the rational path");
        }
    };
    for (int n = 1; n <= s.n_max(); ++n) {
        if (!s.is_th1()) {
            ExactVec expect{{0, Rational(1)}};
            for (int k = 1; k <= n; ++k) {
                auto a = s.alpha_exact(k);
                if (!a) {
                    where = "alpha not rational";
                    ++bad;
                    break;
                }
                Index j = s.a(k);
                FIdentity id = b.f_identity(j);
                if (id.kind != FIdentity::Z || id.i != s.params.kappa_step * k) ++bad;
                expect[j] = *a;
            }
            compare(s.a(n), expect, "e_{a_" + std::to_string(n) + "}");
            worst_dist = rmax(worst_dist, b.norm(b.e_in_f(s.a(n)) - FVector::unit(0)));
        } else {
            for (int N = 0; N < n; ++N) {
                ExactVec expect{{0, Rational(1)}};
                Rational aN(to_bigint(s.a(N)));
                for (int m = N + 1; m <= n; ++m) {
                    auto a = s.alpha_exact(m - N);
                    if (!a) {
                        ++bad;
                        break;
                    }
                    Index j = (m - N) * s.a(m);
                    FIdentity id = b.f_identity(j);
                    if (id.kind != FIdentity::ZCopy || id.d != s.d[static_cast<std::size_t>(N + 1)] || id.i != m - N) {
                        ++bad;
                        if (where.empty()) where = "copy identity at " + to_string(j);
                    }
                    expect[j] = *a / aN;
                }
                compare((n - N) * s.a(n), expect, "n=" + std::to_string(n) + " N=" + std::to_string(N));
                // a_N |e_{(n-N)a_n} - e_0| = max_k alpha_k
                worst_dist = rmax(worst_dist, to_real(aN) * b.norm(b.e_in_f((n - N) * s.a(n)) - FVector::unit(0)));
            }
        }
    }
    Real claimed = to_real(s.params.epsilon);
    if (s.is_th1()) {
        claimed = s.alpha(1);
        for (int k = 2; k <= s.n_max(); ++k) claimed = rmax(claimed, s.alpha(k));
    }
    CertReport r = CertReport::make("fact_a.identity", "e_{a_n} - e_0 in Z", claimed, worst_dist,
                                    std::to_string(checked) + " exact identities, " + std::to_string(bad) + " mismatches" +
                                        (where.empty() ? "" : " (" + where + ")"));
    r.pass = r.pass && bad == 0 && (s.is_th1() || worst_dist < claimed);
    return r;
}

CertReport check_fact_b(const Basis& b, int n, std::size_t samples, std::uint64_t seed) {
    const Schedule& s = b.schedule();
    const StepLayout& st = built_step(b, n);
    if (!st.net_frozen) throw Error(Errc::NetNotFixed, "step " + std::to_string(n));
    bool sampled = false;
    auto js = column_set(0, st.nu, std::max<std::size_t>(samples, 4) * 64, step_marks(s, n), &sampled);
    Real worst = -std::numeric_limits<double>::infinity();
    std::string at = "none";
    for (int k = 1; k <= st.k; ++k) {
        const Index c = st.c[static_cast<std::size_t>(k - 1)];
        auto terms = poly_terms(st.net[static_cast<std::size_t>(k - 1)], Real(-1));
        terms.emplace_back(c, Real(1));
        SparseOperator op;
        for (Index j : js) {
            FVector xe = b.f_to_e(FVector::unit(j));
            if (xe.max_index() + c > b.horizon()) continue;
            op.set_column(j, b.e_to_f(combo_e(xe, terms)));
        }
        op.dom_max = st.nu;
        NormBound nb = operator_norm_bound(b, op, seed);
        Real l = log2_or_floor(nb.upper);
        if (l > worst || k == 1) {
            worst = l;
            at = "k=" + std::to_string(k);
        }
    }
    std::string cav = "log2 values; columns f_j, j<=nu_" + std::to_string(n) + (sampled ? " (sampled)" : "") +
                      "; worst " + at;
    return CertReport::make("fact_b.log2." + std::to_string(n), "|T^c y - p(T)y| <= delta_n |y|",
                            to_real(st.log2_delta), worst, cav);
}

CertReport check_tail_bound(const Basis& b, int n, Index N_cut, std::uint64_t seed) {
    const Schedule& s = b.schedule();
    const StepLayout& st = built_step(b, n);
    const bool th1 = s.is_th1();
    const Real claimed = th1 ? Real(103) : Real(100);
    const auto corr = q_corrections(s, n);
    Index an1 = s.a(n + 1);
    if (N_cut < 0) N_cut = an1 + s.xi(n + 1) + st.c.back();
    Real worst = 0;
    std::string method, at;
    bool any_sampled = false;
    Index cut_used = 0;
    for (int k = 1; k <= st.k; ++k) {
        const Index c = st.c[static_cast<std::size_t>(k - 1)];
        const Index hi = std::min(N_cut, b.horizon() - c);
        cut_used = std::max(cut_used, hi);
        bool sampled = false;
        // exhaustive up to 2^20 columns; past that a 4096-column sample, since
        // each shifted column expands deep into the next step
        const std::size_t cap = hi - st.nu <= (Index(1) << 20) ? std::size_t(1) << 20 : 4096;
        auto js = column_set(st.nu + 1, hi, cap, step_marks(s, n), &sampled);
        any_sampled = any_sampled || sampled;
        SparseOperator op;
        for (Index j : js) {
            FVector xe = b.f_to_e(FVector::unit(j));
            for (const auto& q : corr)
                if (j >= q.lo && j <= q.hi) xe.add(j - q.shift, q.w);
            if (xe.empty()) continue;
            op.set_column(j, b.e_to_f(xe.shifted(c)));
        }
        op.dom_max = hi;
        NormBound nb = operator_norm_bound(b, op, seed);
        if (nb.upper > worst || at.empty()) {
            worst = nb.upper;
            method = nb.method;
            at = "k=" + std::to_string(k);
        }
    }
    std::string cav = "columns nu_" + std::to_string(n) + "<j<=" + to_string(cut_used) + " (cut at " +
                      to_string(N_cut) + ", horizon " + to_string(b.horizon()) + ")" +
                      (any_sampled ? ", sampled columns" : "") + ", " + method + ", worst " + at +
                      ", log2=" + dec(log2_or_floor(worst), 10);
    return CertReport::make("tail." + std::to_string(n), th1 ? "tail <= 103" : "tail <= 100", claimed, worst, cav);
}

CertReport check_b_damping(const Basis& b, int n, std::uint64_t seed) {
    const Schedule& s = b.schedule();
    const StepLayout& st = built_step(b, n);
    const Index top = s.is_th1() ? st.mu : st.a;
    const Real bb = to_real(st.b);
    SparseOperator op;
    for (Index j = 0; j <= top; ++j)
        op.set_column(j, e_shift_combo(b, FVector::unit(j), {{st.b + 1, 1 / bb}, {1, Real(-1)}}));
    op.dom_max = top;
    NormBound nb = operator_norm_bound(b, op, seed);
    return CertReport::make("b_damping." + std::to_string(n), "|(T^b/b - I)T y| <= |y|/sqrt(b)", 1 / sqrt(bb), nb.upper,
                            "F_" + to_string(top) + " basis, " + nb.method + ", measured C'=" + dec(nb.upper * bb, 10));
}

CertReport check_prop3(const Basis& b, int n, std::uint64_t seed) {
    const Schedule& s = b.schedule();
    const StepLayout& st = built_step(b, n);
    const Index lo = st.A() + 1;
    const Real bb = to_real(st.b);
    bool sampled = false;
    auto js = column_set(lo, st.nu, std::size_t(1) << 16, step_marks(s, n), &sampled);
    SparseOperator op;
    for (Index j : js) op.set_column(j, e_shift_combo(b, FVector::unit(j), {{st.b + 1, 1 / bb}}));
    op.dom_max = st.nu;
    NormBound nb = operator_norm_bound(b, op, seed);
    return CertReport::make("prop3." + std::to_string(n), "|(T^{b+1}/b) pi x| <= 2|x|/b", 2 / bb, nb.upper,
                            "columns [" + to_string(lo) + "," + to_string(st.nu) + "]" + (sampled ? " sampled" : "") +
                                ", " + nb.method + ", b*measured=" + dec(nb.upper * bb, 10));
}

CertReport check_q_norm(const Basis& b, int n, std::uint64_t seed) {
    const Schedule& s = b.schedule();
    const StepLayout& st = built_step(b, n);
    // identity part: a prefix plus every (a)-index, the other identity
    // columns are unit vectors of l_p and cannot raise the bound
    SparseOperator op;
    const Index keep = std::min<Index>(st.nu, 4096);
    for (Index j = 0; j <= keep; ++j) op.set_column(j, FVector::unit(j));
    for (int k = 1; k <= n; ++k) {
        const Index lo = s.first_a_left(k);
        const Index hi = s.is_th1() ? k * s.a(k) + s.xi(1) : s.a(k);
        for (Index j = lo; j <= hi; ++j)
            if (b.a_interval(j)) op.set_column(j, FVector::unit(j));
    }
    for (const auto& q : q_corrections(s, n))
        for (Index j = q.lo; j <= q.hi; ++j) op.set_column(j, b.e_to_f(FVector::unit(j - q.shift, -q.w)));
    NormBound nb = operator_norm_bound(b, op, seed);
    const Real eps = to_real(s.params.epsilon);
    Real claimed;
    std::string cav;
    if (!s.is_th1()) {
        Real d0 = s.alpha(1);
        for (int k = 2; k <= n + 1; ++k) d0 = rmin(d0, s.alpha(k));
        claimed = 1 + (1 + eps) / d0;
        cav = "M = C + (1+eps)/delta_0, C=1, delta_0=" + dec(d0, 8);
    } else {
        // 1 + a_n n xi_n / inf alpha_r * sup_{j<=n a_n} |e_j|
        Real inf_a = s.alpha(2);
        for (int r = 3; r <= n + 1; ++r) inf_a = rmin(inf_a, s.alpha(r));
        const Index top = std::min<Index>(n * st.a, 4096);
        Real sup_e = 0;
        for (Index j = 0; j <= top; ++j) sup_e = rmax(sup_e, b.norm(b.e_in_f(j)));
        claimed = 1 + to_real(st.a) * n * to_real(s.xi(n)) / inf_a * sup_e;
        cav = "M_{a_n} with sup|e_j| over j<=" + to_string(top) + (top < n * st.a ? " (truncated)" : "");
    }
    cav += ", " + nb.method + ", lower=" + dec(nb.lower, 10);
    return CertReport::make("q_norm." + std::to_string(n), "|Q_nu| <= M", claimed, nb.upper, cav);
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{"shift", "boundedness", "fact-a", "fact-b",
                                                "tail",  "b-damping",   "prop3",  "q-norm"};
    return names;
}

std::vector<CertReport> run_checks(const Basis& b, const std::set<std::string>& names, int steps,
                                   std::uint64_t seed) {
    for (const auto& nm : names)
        if (std::find(check_names().begin(), check_names().end(), nm) == check_names().end())
            throw Error(Errc::InvalidParams, "unknown check '" + nm + "'");
    const Schedule& s = b.schedule();
    steps = std::min(steps, s.n_max());
    std::vector<CertReport> out;
    if (names.count("shift")) {
        std::vector<Index> samples;
        for (int n = 2; n <= steps; ++n)
            // the last intervals before nu_n expand to ~a_n terms each, a few seconds apiece
            for (Index m : step_marks(s, n, 64, 10)) samples.push_back(m);
        out.push_back(check_shift(b, std::min(s.xi(2), b.horizon() - 1), samples));
    }
    if (names.count("boundedness")) out.push_back(check_boundedness(b, std::min(s.xi(2), b.horizon() - 1), nullptr, seed));
    if (names.count("fact-a")) out.push_back(check_fact_a(b));
    for (int n = 1; n <= steps; ++n) {
        if (names.count("fact-b")) out.push_back(check_fact_b(b, n, 64, seed));
        if (names.count("tail")) out.push_back(check_tail_bound(b, n, -1, seed));
        if (names.count("b-damping")) out.push_back(check_b_damping(b, n, seed));
        if (names.count("prop3")) out.push_back(check_prop3(b, n, seed));
        if (names.count("q-norm")) out.push_back(check_q_norm(b, n, seed));
    }
    return out;
}

// ---- pipelines ------------------------------------------------------------

P3Plan plan_p3(const Basis& b, const FVector& x, int n, VerificationConstants& k) {
    const Schedule& s = b.schedule();
    if (s.is_th1()) throw Error(Errc::InvalidParams, "the approximation demo runs on the single-copy build");
    const StepLayout& st = built_step(b, n);
    if (x.empty()) throw Error(Errc::InvalidParams, "x = 0");
    if (x.max_index() > st.nu) throw Error(Errc::InvalidParams, "x must lie in F_nu");
    auto jn = find_large_coordinate(b, x, n, k.log2_C, st.a - 1);
    if (!jn) throw Error(Errc::NoLargeCoordinate, "no large coordinate below a_" + std::to_string(n));
    P3Plan plan;
    plan.n = n;
    plan.j_n = *jn;
    FVector xe = b.f_to_e(apply_Q(b, QKind::A, n, x)).restricted(*jn, st.a);
    plan.lead = xe.get(*jn);
    plan.p = solve_fact_f(xe, FVector::unit(st.a - 1), st.a, *jn);
    plan.q = plan.p.shifted(st.b + 1).scaled(1 / to_real(st.b));
    plan.log2_D = log2abs(plan.p.modulus()) + to_real(st.a - *jn + 1) * log2abs(plan.lead);
    if (plan.log2_D > k.log2_D_measured) {
        k.log2_D_measured = plan.log2_D;
        k.D_instance = "n=" + std::to_string(n) + " j_n=" + to_string(*jn) + " |p|=" + dec(plan.p.modulus(), 8);
    }
    return plan;
}

ScheduleParams inject_net(const ScheduleParams& params, int n, const std::vector<Polynomial>& qs) {
    ScheduleParams p = params;
    p.step_net[n] = qs;
    return p;
}

namespace {

int match_net(const StepLayout& st, const Polynomial& q) {
    if (!st.net_frozen) throw Error(Errc::NetNotFixed, "step " + std::to_string(st.n));
    const Real eps = exp2r(to_real(st.log2_eps));
    for (std::size_t i = 0; i < st.net.size(); ++i)
        if ((st.net[i] - q).modulus() <= eps) return static_cast<int>(i) + 1;
    throw Error(Errc::NetMiss, "no member of the step-" + std::to_string(st.n) + " net within eps_n");
}

}  // namespace

DemoResult run_p3(const Basis& b, const FVector& x, const P3Plan& plan) {
    const Schedule& s = b.schedule();
    const StepLayout& st = built_step(b, plan.n);
    if (plan.q.modulus() > 2) throw Error(Errc::NetMiss, "|q_n| = " + dec(plan.q.modulus(), 8) + " exceeds 2");
    if (plan.q.degree() > st.l) throw Error(Errc::NetMiss, "deg q_n exceeds l_n");
    DemoResult r;
    r.k = match_net(st, plan.q);
    r.c = st.c[static_cast<std::size_t>(r.k - 1)];
    FVector y = power_apply(b, r.c, x);
    y.add(0, Real(-1));
    r.dist = b.norm(y);
    r.bound = to_real(s.params.epsilon) + Real(10) / to_real(st.a);
    r.report = CertReport::make("p3.dist." + std::to_string(plan.n), "|T^c x - g_0| < eps + 10/a_n", r.bound, r.dist,
                                "c=" + to_string(r.c) + " k=" + std::to_string(r.k) + " j_n=" + to_string(plan.j_n) +
                                    " |p|=" + dec(plan.p.modulus(), 8));
    r.report.pass = r.dist < r.bound;
    return r;
}

DemoResult demo_p3(const ScheduleParams& params, const FVector& x, int n, VerificationConstants& k) {
    Basis phase1(build_schedule(params));
    P3Plan plan = plan_p3(phase1, x, n, k);
    Basis phase2(build_schedule(inject_net(params, n, {plan.q})));
    const StepLayout& s1 = phase1.schedule().step(n);
    const StepLayout& s2 = phase2.schedule().step(n);
    if (s1.a != s2.a || s1.b != s2.b || s1.nu != s2.nu)
        throw Error(Errc::InvalidParams, "injection moved the (a)/(b) layout");
    return run_p3(phase2, x, plan);
}

P2Result demo_p2_ordering(const ScheduleParams& params, const FVector& x, const FVector& y, int n,
                          VerificationConstants& k) {
    Basis phase1(build_schedule(params));
    const Schedule& s = phase1.schedule();
    if (s.is_th1()) throw Error(Errc::InvalidParams, "the ordering demo runs on the single-copy build");
    const StepLayout& st = built_step(phase1, n);
    const Real bound0 = Real(10) / to_real(st.a);
    P2Result res;
    if (y.empty()) {
        res.dist = 0;
        res.bound = bound0;
        res.report = CertReport::make("p2.dist." + std::to_string(n), "|T^c x - T y| <= 10/a_n + tails", bound0,
                                      Real(0), "y = 0");
        return res;
    }
    auto jx = find_large_coordinate(phase1, x, n, k.log2_C, st.a - 1);
    auto jy = find_large_coordinate(phase1, y, n, k.log2_C, st.a - 1);
    if (!jx || !jy) throw Error(Errc::NoLargeCoordinate, "no large coordinate below a_" + std::to_string(n));
    if (*jx > *jy)
        throw Error(Errc::OrderingFails, "j_n(x)=" + to_string(*jx) + " > j_n(y)=" + to_string(*jy));
    FVector xe = phase1.f_to_e(apply_Q(phase1, QKind::A, n, x)).restricted(*jx, st.a);
    FVector ye = phase1.f_to_e(apply_Q(phase1, QKind::A, n, y)).restricted(*jx, st.a);
    Polynomial p = solve_fact_f(xe, ye, st.a, *jx);
    Real log2D = log2abs(p.modulus()) + to_real(st.a - *jx + 1) * log2abs(xe.get(*jx));
    if (log2D > k.log2_D_measured) {
        k.log2_D_measured = log2D;
        k.D_instance = "p2 n=" + std::to_string(n) + " j_n=" + to_string(*jx);
    }
    Polynomial q = p.shifted(st.b + 1).scaled(1 / to_real(st.b));
    if (q.modulus() > 2) throw Error(Errc::NetMiss, "|q_n| = " + dec(q.modulus(), 8) + " exceeds 2");
    Basis phase2(build_schedule(inject_net(params, n, {q})));
    const StepLayout& st2 = phase2.schedule().step(n);
    int kk = match_net(st2, q);
    res.c = st2.c[static_cast<std::size_t>(kk - 1)];
    FVector diff = power_apply(phase2, res.c, x) - apply_T(phase2, y);
    res.dist = phase2.norm(diff);
    Real tails = 100 * (phase2.norm(x - x.restricted(0, st.nu)) + phase2.norm(y - y.restricted(0, st.nu)));
    res.bound = bound0 + tails;
    res.report = CertReport::make("p2.dist." + std::to_string(n), "|T^c x - T y| <= 10/a_n + tails", res.bound,
                                  res.dist, "c=" + to_string(res.c) + " j(x)=" + to_string(*jx) + " j(y)=" + to_string(*jy));
    return res;
}

std::pair<Index, Real> orbit_distance(const Basis& b, const FVector& x, const FVector& target, Index horizon) {
    FVector xe = b.f_to_e(x);
    if (!xe.empty() && xe.max_index() + horizon > b.horizon())
        throw Error(Errc::HorizonExceeded, "orbit search to " + to_string(horizon) + " leaves the horizon");
    Index best_c = 0;
    Real best = b.norm(x - target);
    for (Index c = 1; c <= horizon; ++c) {
        Real d = b.norm(b.e_to_f(xe.shifted(c)) - target);
        if (d < best) {
            best = d;
            best_c = c;
        }
    }
    return {best_c, best};
}

}  // namespace rop
