#include "rop/factorize.hpp"

#include <algorithm>

namespace rop {

namespace {

Real eq5_exponent(const Real& p) {
    const Real q = p / (p - 1);
    return rmin(1 / p, 1 / q);
}

Real eq5_term(const Real& p, const Real& dual, const Real& un) {
    if (un == 0) return 0;
    return (1 + pow(dual, p)) * pow(un, eq5_exponent(p));
}

}  // namespace

Factorization build_factorization(const Basis& b, Index N, const Real& eq5_budget, bool kernel_only) {
    const Schedule& s = b.schedule();
    const ScheduleParams& prm = s.params;
    if (prm.space != SpaceKind::Lp || !(prm.p > 1))
        throw Error(Errc::InvalidParams, "the factorization needs l_p with 1 < p < inf");
    if (N + 1 >= b.horizon()) throw Error(Errc::OutOfHorizon, "factorization up to " + to_string(N));
    Factorization fz;
    fz.N = N;
    fz.p = to_real(prm.p);
    fz.eq5_partial = 0;
    fz.kernel_only = kernel_only;
    const Real ip = 1 / fz.p;
    auto shift_weight = [&](Index j) {
        FVector col = column_Tf(b, j);
        Real w = col.get(j + 1);
        if (col.size() != 1 || w == 0)
            throw Error(Errc::InvalidParams, "column " + to_string(j) + " is not a weighted shift");
        fz.weights[j] = w;
        return w;
    };
    for (Index j = 0; j <= N + 1; ++j) {
        if (in_jtilde(s, j)) {
            FVector col = column_Tf(b, j);
            fz.Jtilde.insert(j);
            Real un = b.norm(col);
            fz.unorm[j] = un;
            if (un != 0) fz.A.set_column(j, FVector::unit(j, pow(un, ip)));
            if (j <= N) {
                fz.eq5_partial += eq5_term(fz.p, b.dual_norm(j), un);
                if (un != 0) fz.B.set_column(j, col.scaled(1 / pow(un, ip)));
            }
            fz.u.emplace(j, std::move(col));
            continue;
        }
        if (kernel_only) continue;
        Real w = shift_weight(j);
        fz.A.set_column(j, FVector::unit(j));
        if (j <= N) fz.B.set_column(j, FVector::unit(j + 1, w));
    }
    if (kernel_only)
        for (const auto& [j, col] : fz.B.columns)
            for (const auto& [r, v] : col)
                if (r >= 1 && r <= N + 1 && !fz.Jtilde.count(r - 1) && !fz.weights.count(r - 1)) shift_weight(r - 1);
    fz.A.dom_max = N + 1;
    fz.B.dom_max = N;
    if (fz.eq5_partial > eq5_budget)
        throw Error(Errc::Eq5Exceeded, "nuclear-weight partial sum " + dec(fz.eq5_partial, 8) + " above " + dec(eq5_budget, 8));
    return fz;
}

namespace {
void require_full(const Factorization& fz) {
    if (fz.kernel_only) throw Error(Errc::InvalidParams, "factorization was built for the kernel check only");
}
}  // namespace

CertReport check_BA(const Basis& b, const Factorization& fz) {
    require_full(fz);
    Real worst = -std::numeric_limits<double>::infinity();
    Index at = -1;
    for (Index j = 0; j <= fz.N; ++j) {
        FVector ba = fz.B.apply(fz.A.column(j));
        FVector t = fz.Jtilde.count(j) ? fz.u.at(j) : FVector::unit(j + 1, fz.weights.at(j));
        Real r = b.norm(ba - t);
        if (r == 0) continue;
        Real l = log2abs(r) - log2abs(rmax(Real(1), b.norm(t)));
        if (l > worst) {
            worst = l;
            at = j;
        }
    }
    return CertReport::make("factor.BA", "BA = T", Real(-190), worst,
                            "log2 relative column residual, columns j<=" + to_string(fz.N) +
                                (at >= 0 ? ", worst at " + to_string(at) : ", all exact"));
}

T0Split split_T0(const Factorization& fz) {
    require_full(fz);
    T0Split sp;
    for (Index j = 0; j <= fz.N; ++j) {
        FVector col = fz.A.apply(fz.B.column(j));
        const bool shift = !fz.Jtilde.count(j) && !fz.Jtilde.count(j + 1);
        FVector s2 = shift ? FVector::unit(j + 1) : FVector();
        if (!s2.empty()) sp.S2.set_column(j, s2);
        FVector k2 = col - s2;
        if (!k2.empty()) sp.K2.set_column(j, k2);
        if (!col.empty()) sp.T0.set_column(j, std::move(col));
    }
    sp.T0.dom_max = sp.S2.dom_max = sp.K2.dom_max = fz.N;
    return sp;
}

CertReport check_S2_contraction(const T0Split& sp) {
    std::set<Index> rows;
    bool ok = true;
    for (const auto& [j, c] : sp.S2.columns) {
        if (c.size() != 1 || c.begin()->second != 1 || !rows.insert(c.begin()->first).second) ok = false;
    }
    // a column-injective 0/1 matrix is an isometry on its support, hence |S2| <= 1
    CertReport r = CertReport::make("factor.S2", "|S_2| <= 1", Real(1), Real(ok ? 1 : 2),
                                    std::to_string(sp.S2.columns.size()) + " shift columns");
    return r;
}

CertReport check_K2(const Factorization& fz, const T0Split& sp) {
    Real worst = 0;
    for (Index j = 0; j <= fz.N; ++j) {
        FVector d = sp.T0.column(j) - sp.S2.column(j) - sp.K2.column(j);
        for (const auto& [i, v] : d) worst = rmax(worst, abs(v));
    }
    Real normA = 1, nuc = 0;
    const Real ip = 1 / fz.p, ex = eq5_exponent(fz.p);
    for (const auto& [j, un] : fz.unorm) {
        if (j > fz.N || un == 0) continue;
        normA = rmax(normA, pow(un, ip));
        nuc += pow(un, ex);
    }
    return CertReport::make("factor.K2", "T0 = S2 + K2", exp2r(Real(-190)), worst,
                            "K2 nuclear-style bound " + dec(rmax(Real(2), normA) * nuc, 8) + ", " +
                                std::to_string(sp.K2.columns.size()) + " nonzero K2 columns");
}

unsigned factorization_precision_bits(const Schedule& s, Index N) {
    Index need = 0;
    for (int n = 1; n <= s.n_max(); ++n)
        if (!s.step(n).c.empty() && s.step(n).c[0] <= N + 1) need = std::max(need, -s.step(n).log2_gamma);
    const Index bits = std::max<Index>(Index(precision_bits()), need + 512);
    return static_cast<unsigned>(bits);
}

KernelResult check_kernel_localization(const Basis& b, const Factorization& fz) {
    const Schedule& s = b.schedule();
    KernelResult kr;
    kr.allowed.insert(0);
    for (int n = 1; n <= s.n_max() + 1; ++n) {
        kr.allowed.insert(s.a(n) - 1);
        kr.allowed.insert(s.a(n));
    }
    // rows j+1 with j outside J~ are owned by the column w_j f_{j+1}; the
    // remaining rows only see J~ columns
    auto owned_row = [&](Index r) { return r >= 1 && r <= fz.N + 1 && !fz.Jtilde.count(r - 1); };
    std::vector<Index> cols;
    for (Index j : fz.Jtilde)
        if (j <= fz.N && fz.B.columns.count(j)) cols.push_back(j);
    std::map<Index, std::size_t> rowid;
    for (Index j : cols)
        for (const auto& [r, v] : fz.B.columns.at(j))
            if (!owned_row(r)) rowid.emplace(r, 0);
    std::size_t k = 0;
    for (auto& [r, id] : rowid) id = k++;
    const std::size_t m = rowid.size(), nc = cols.size();
    std::vector<std::vector<Real>> C(m, std::vector<Real>(nc, Real(0)));
    Real scale = 0;
    for (std::size_t c = 0; c < nc; ++c)
        for (const auto& [r, v] : fz.B.columns.at(cols[c])) {
            auto it = rowid.find(r);
            if (it == rowid.end()) continue;
            C[it->second][c] = v;
            scale = rmax(scale, abs(v));
        }
    // column-wise scaling so the pivot test is relative per column
    std::vector<Real> cs(nc, Real(0));
    for (std::size_t c = 0; c < nc; ++c) {
        for (std::size_t r = 0; r < m; ++r) cs[c] = rmax(cs[c], abs(C[r][c]));
        if (cs[c] != 0)
            for (std::size_t r = 0; r < m; ++r) C[r][c] /= cs[c];
    }
    // reduced row echelon form
    const Real tiny = exp2r(Real(-static_cast<long>(precision_bits()) + 64));
    std::vector<int> pivot_col;
    std::size_t row = 0;
    std::vector<bool> is_pivot(nc, false);
    for (std::size_t c = 0; c < nc && row < m; ++c) {
        std::size_t best = row;
        for (std::size_t r = row + 1; r < m; ++r)
            if (abs(C[r][c]) > abs(C[best][c])) best = r;
        if (abs(C[best][c]) <= tiny) continue;
        std::swap(C[row], C[best]);
        const Real pv = C[row][c];
        for (std::size_t cc = 0; cc < nc; ++cc) C[row][cc] /= pv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == row || C[r][c] == 0) continue;
            const Real f = C[r][c];
            for (std::size_t cc = 0; cc < nc; ++cc) C[r][cc] -= f * C[row][cc];
        }
        pivot_col.push_back(static_cast<int>(c));
        is_pivot[c] = true;
        ++row;
    }
    for (std::size_t fcol = 0; fcol < nc; ++fcol) {
        if (is_pivot[fcol]) continue;
        std::vector<Real> y(nc, Real(0));
        y[fcol] = 1;
        for (std::size_t r = 0; r < pivot_col.size(); ++r) y[static_cast<std::size_t>(pivot_col[r])] = -C[r][fcol];
        FVector v;
        for (std::size_t c = 0; c < nc; ++c)
            if (y[c] != 0) v.set(cols[c], cs[c] != 0 ? Real(y[c] / cs[c]) : y[c]);
        // fill the owned coordinates: y_j w_j + sum_i y_i B_i[j+1] = 0
        FVector jt = fz.B.apply(v);
        for (const auto& [r, val] : jt)
            if (owned_row(r)) v.set(r - 1, -val / fz.weights.at(r - 1));
        kr.kernel.push_back(v);
    }
    std::string off;
    const Real mass = exp2r(Real(-100));
    for (const auto& v : kr.kernel) {
        Real all = 0, stray = 0;
        Index first = -1;
        for (const auto& [j, val] : v) {
            all += val * val;
            if (kr.allowed.count(j)) continue;
            stray += val * val;
            if (first < 0) first = j;
        }
        if (sqrt(stray) > mass * sqrt(all)) {
            kr.localized = false;
            if (off.empty()) off = ", first stray index " + to_string(first);
        }
    }
    kr.report = CertReport::make("factor.kernel", "ker B in span{g_0, g_{a_n-1}, g_{a_n}}", Real(0),
                                 Real(kr.localized ? 0 : 1),
                                 "dim ker = " + std::to_string(kr.kernel.size()) + ", |J~ cols| = " +
                                     std::to_string(nc) + ", constraint rows = " + std::to_string(m) +
                                     ", elimination at " + std::to_string(precision_bits()) + " bits" + off);
    return kr;
}

Eq5Census eq5_census(const Basis& b, int steps, std::size_t cap) {
    const Schedule& s = b.schedule();
    const ScheduleParams& prm = s.params;
    if (prm.space != SpaceKind::Lp || !(prm.p > 1)) throw Error(Errc::InvalidParams, "the weight census needs 1 < p < inf");
    const Real p = to_real(prm.p);
    Eq5Census c;
    steps = std::min(steps, s.n_max());
    for (int n = 1; n <= steps; ++n) {
        Real sum = 0;
        std::size_t counted = 0;
        if (n == 1) sum += eq5_term(p, b.dual_norm(0), b.norm(column_Tf(b, 0)));
        auto iv = step_intervals(s, n);
        for (const auto& t : iv) {
            if (counted >= cap) break;
            ++counted;
            std::vector<Index> js;
            if (t.kind == Kind::AWork)
                for (Index j = t.left; j <= t.right; ++j) js.push_back(j);
            else if (in_jtilde(s, t.right))
                js.push_back(t.right);
            for (Index j : js) {
                if (j >= b.horizon()) continue;
                sum += eq5_term(p, b.dual_norm(j), b.norm(column_Tf(b, j)));
            }
        }
        c.per_step.push_back(sum);
        c.counted.push_back(counted);
        c.total.push_back(iv.size());
    }
    return c;
}

CertReport check_eq5(const Eq5Census& c, const Real& budget) {
    Real total = 0;
    for (const auto& v : c.per_step) total += v;
    Real worst_ratio = 0;
    std::string cav = "per step:";
    for (std::size_t i = 0; i < c.per_step.size(); ++i) {
        cav += " " + dec(c.per_step[i], 6) + " (" + std::to_string(c.counted[i]) + "/" + std::to_string(c.total[i]) +
               " intervals)";
        if (i > 0) worst_ratio = rmax(worst_ratio, c.per_step[i] / c.per_step[i - 1]);
    }
    cav += ", worst ratio " + dec(worst_ratio, 6);
    CertReport r = CertReport::make("factor.eq5", "nuclear-weight partial sums converge", budget, total, cav);
    r.pass = r.pass && c.per_step.size() >= 2 && worst_ratio < Real(1) / 4;
    return r;
}

}  // namespace rop
