#include "rop/operator.hpp"

#include <random>

namespace rop {

void SparseOperator::set_column(Index j, FVector col) {
    if (j > dom_max) dom_max = j;
    if (col.max_index() > codom_max) codom_max = col.max_index();
    if (col.empty())
        columns.erase(j);
    else
        columns[j] = std::move(col);
}

FVector SparseOperator::column(Index j) const {
    auto it = columns.find(j);
    return it == columns.end() ? FVector() : it->second;
}

FVector SparseOperator::apply(const FVector& x) const {
    if (x.max_index() > dom_max)
        throw Error(Errc::DomainExceeded, "input index " + to_string(x.max_index()) + " beyond " + to_string(dom_max));
    FVector y;
    for (const auto& [j, v] : x) {
        auto it = columns.find(j);
        if (it == columns.end()) continue;
        for (const auto& [i, w] : it->second) y.add(i, v * w);
    }
    return y;
}

std::size_t SparseOperator::nnz() const {
    std::size_t n = 0;
    for (const auto& [j, c] : columns) n += c.size();
    return n;
}

FVector e_shift_combo(const Basis& b, const FVector& x, const std::vector<std::pair<Index, Real>>& terms) {
    if (x.empty() || terms.empty()) return {};
    FVector xe = b.f_to_e(x);
    Index maxk = 0;
    for (const auto& [k, w] : terms) maxk = std::max(maxk, k);
    if (!xe.empty() && xe.max_index() + maxk > b.horizon())
        throw Error(Errc::HorizonExceeded,
                    "index " + to_string(xe.max_index() + maxk) + " beyond the horizon " + to_string(b.horizon()));
    FVector acc;
    for (const auto& [k, w] : terms)
        for (const auto& [i, v] : xe) acc.add(i + k, v * w);
    return b.e_to_f(acc);
}

FVector apply_T(const Basis& b, const FVector& x) { return e_shift_combo(b, x, {{1, Real(1)}}); }

FVector power_apply(const Basis& b, Index c, const FVector& x) {
    if (c < 0) throw Error(Errc::InvalidParams, "negative power");
    return e_shift_combo(b, x, {{c, Real(1)}});
}

FVector apply_poly(const Basis& b, const Polynomial& p, const FVector& x) {
    std::vector<std::pair<Index, Real>> terms(p.coeffs().begin(), p.coeffs().end());
    return e_shift_combo(b, x, terms);
}

FVector column_Tf(const Basis& b, Index j) {
    if (j < 0 || j >= b.horizon()) throw Error(Errc::OutOfHorizon, "column " + to_string(j));
    return apply_T(b, FVector::unit(j));
}

SparseOperator assemble(const Basis& b, Index N) {
    if (N < 0 || N >= b.horizon()) throw Error(Errc::OutOfHorizon, "assemble up to " + to_string(N));
    SparseOperator op;
    for (Index j = 0; j <= N; ++j) op.set_column(j, column_Tf(b, j));
    op.dom_max = N;
    return op;
}

namespace {

struct QPlan {
    Index keep;  // f_j kept for j <= keep
    // correction: f_j -> -w e_{j - shift} for j in [lo, hi]
    struct Corr {
        Index lo, hi, shift;
        Real w;
    };
    std::vector<Corr> corr;
};

QPlan q_plan(const Basis& b, QKind which, int n) {
    const Schedule& s = b.schedule();
    if (n < 1 || n > s.n_max()) throw Error(Errc::StepNotBuilt, "projection at step " + std::to_string(n));
    const StepLayout& st = s.step(n);
    QPlan plan;
    if (!s.is_th1()) {
        if (which == QKind::Mu) throw Error(Errc::InvalidParams, "Q_mu belongs to the multi-copy build");
        plan.keep = which == QKind::Nu ? st.nu : st.a;
        Index an1 = s.a(n + 1);
        plan.corr.push_back({an1, an1, an1 - st.a, 1 / s.alpha(n + 1)});
        return plan;
    }
    if (which == QKind::A) throw Error(Errc::InvalidParams, "Q_a belongs to the single-copy build");
    plan.keep = which == QKind::Nu ? st.nu : st.mu;
    Index an1 = s.a(n + 1);
    // r = 1 maps to zero, as in the definition
    for (int r = 2; r <= n + 1; ++r) {
        Index lo = r * an1;
        Index hi = lo + s.xi(n + 2 - r);
        Index shift = r * an1 - (r - 1) * st.a;
        plan.corr.push_back({lo, hi, shift, to_real(s.a(n + 1 - r)) / s.alpha(r)});
    }
    return plan;
}

}  // namespace

FVector apply_Q(const Basis& b, QKind which, int n, const FVector& x) {
    QPlan plan = q_plan(b, which, n);
    FVector out, ecorr;
    for (const auto& [j, v] : x) {
        if (j <= plan.keep) {
            out.add(j, v);
            continue;
        }
        for (const auto& c : plan.corr)
            if (j >= c.lo && j <= c.hi) ecorr.add(j - c.shift, -v * c.w);
    }
    if (!ecorr.empty()) out += b.e_to_f(ecorr);
    return out;
}

SparseOperator projection_Q(const Basis& b, QKind which, int n, Index N) {
    QPlan plan = q_plan(b, which, n);
    SparseOperator op;
    for (Index j = 0; j <= std::min(N, plan.keep); ++j) op.set_column(j, FVector::unit(j));
    for (const auto& c : plan.corr)
        for (Index j = c.lo; j <= std::min(c.hi, N); ++j)
            op.set_column(j, b.e_to_f(FVector::unit(j - c.shift, -c.w)));
    op.dom_max = N;
    return op;
}

SparseOperator projection_pi(Index lo, Index hi, Index N) {
    SparseOperator op;
    for (Index j = std::max<Index>(lo, 0); j <= std::min(hi, N); ++j) op.set_column(j, FVector::unit(j));
    op.dom_max = N;
    return op;
}

bool in_jtilde(const Schedule& s, Index j) {
    if (j == 0) return true;
    IntervalTag t = classify_index(s, j);
    return t.kind == Kind::AWork || t.is_right_endpoint;
}

SKDecomposition sk_split(const Basis& b, Index N, bool enforce) {
    const Schedule& s = b.schedule();
    SKDecomposition d;
    bool first = true;
    for (Index j = 0; j <= N; ++j) {
        FVector col = column_Tf(b, j);
        if (in_jtilde(s, j)) {
            d.Jtilde.insert(j);
            d.nuclear_bound += (1 + b.dual_norm(j)) * b.norm(col);
            if (!b.a_interval(j)) d.weights[j] = 0;
            d.nuclear.emplace(j, std::move(col));
            continue;
        }
        Real w = col.get(j + 1);
        if (col.size() != 1 || w == 0)
            throw Error(Errc::InvalidParams, "column " + to_string(j) + " is not a weighted shift");
        if (first || w > d.max_weight) d.max_weight = w;
        if (first || w < d.min_weight) d.min_weight = w;
        first = false;
        d.weights[j] = w;
    }
    if (enforce && d.nuclear_bound >= to_real(s.params.rho))
        throw Error(Errc::BudgetExceeded, "nuclear sum " + dec(d.nuclear_bound) + " >= rho");
    return d;
}

std::vector<Polynomial> polynomial_net(const Schedule& s, int n, NetMode mode) {
    const StepLayout& st = s.step(n);
    if (mode == NetMode::Targeted) {
        if (!st.net_frozen) throw Error(Errc::NetNotFixed, "step " + std::to_string(n) + " has no targeted net");
        return st.net;
    }
    // (l+1) log2(4/eps) with log2 eps stored exactly
    Index cost = (st.l + 1) * (2 - st.log2_eps);
    if (cost > s.params.net_budget_log2)
        throw Error(Errc::NetTooLarge, "grid net at step " + std::to_string(n) + " needs 2^" + to_string(cost) + " points");
    Rational eps = Rational(1) / Rational(BigInt(1) << static_cast<unsigned>(-st.log2_eps));
    return grid_net(eps, static_cast<int>(st.l), s.params.net_budget_log2);
}

namespace {

Real mixed_norm_col_max(const Basis& b, const SparseOperator& op) {
    Real m = 0;
    for (const auto& [j, c] : op.columns) m = rmax(m, b.norm(c));
    return m;
}

// max column and row absolute sums of the coefficient matrix
std::pair<Real, Real> abs_sums(const SparseOperator& op) {
    Real colmax = 0;
    std::map<Index, Real> rows;
    for (const auto& [j, c] : op.columns) {
        Real s = 0;
        for (const auto& [i, v] : c) {
            s += abs(v);
            rows[i] += abs(v);
        }
        colmax = rmax(colmax, s);
    }
    Real rowmax = 0;
    for (const auto& [i, v] : rows) rowmax = rmax(rowmax, v);
    return {colmax, rowmax};
}

Real l2norm(const FVector& x) {
    Real s = 0;
    for (const auto& [j, v] : x) s += v * v;
    return sqrt(s);
}

}  // namespace

NormBound operator_norm_bound(const Basis& b, const SparseOperator& op, std::uint64_t seed) {
    const ScheduleParams& prm = b.schedule().params;
    NormBound nb;
    nb.lower = mixed_norm_col_max(b, op);

    if (prm.space == SpaceKind::Lp && prm.p == 1) {
        // The unit ball of l_1 (+)_1 Z is the convex hull of +-g_i and the unit
        // balls of the Z copies, so the norm is attained on those pieces.
        Real up = 0;
        std::map<Index, std::vector<Index>> zcols;
        for (const auto& [j, c] : op.columns) {
            auto ai = j > 0 ? b.a_interval(j) : std::nullopt;
            if (!ai) {
                up = rmax(up, b.norm(c));
                continue;
            }
            FIdentity id = b.f_identity(j);
            zcols[id.kind == FIdentity::ZCopy ? id.d : 0].push_back(j);
        }
        nb.method = "l1-extreme-points";
        for (const auto& [copy, cols] : zcols) {
            Real zb = 0;
            if (prm.z == ZKind::C0Canonical && cols.size() <= 20) {
                const std::size_t m = cols.size();
                for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << (m - 1)); ++mask) {
                    FVector y;
                    for (std::size_t i = 0; i < m; ++i) {
                        Real sg = (i + 1 < m && (mask >> i) & 1) ? Real(-1) : Real(1);
                        for (const auto& [r, v] : op.columns.at(cols[i])) y.add(r, sg * v);
                    }
                    zb = rmax(zb, b.norm(y));
                }
                nb.lower = rmax(nb.lower, zb);
            } else if (prm.z == ZKind::C0Canonical) {
                for (Index j : cols) zb += b.norm(op.columns.at(j));
                nb.method += "+z-triangle";
            } else {
                for (Index j : cols) {
                    Real v = b.norm(op.columns.at(j));
                    zb += v * v;
                }
                zb = sqrt(zb);
                nb.method += "+z-cauchy-schwarz";
            }
            up = rmax(up, zb);
        }
        nb.upper = up;
    } else if (prm.space == SpaceKind::Lp && prm.p == 2 && prm.z == ZKind::L2SecondCopy) {
        // Hilbert space with orthonormal f_j: Schur bound above, power
        // iteration on A^T A below.
        auto [c1, r1] = abs_sums(op);
        nb.upper = sqrt(c1 * r1);
        nb.method = "schur+power";
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1, 1);
        FVector x;
        for (const auto& [j, c] : op.columns) x.set(j, Real(u(rng)));
        for (int it = 0; it < 40 && !x.empty(); ++it) {
            x = x.scaled(1 / l2norm(x));
            FVector y = op.apply(x);
            Real ny = l2norm(y);
            nb.lower = rmax(nb.lower, ny);
            // A^T y
            FVector z;
            for (const auto& [j, c] : op.columns) {
                Real s = 0;
                for (const auto& [i, v] : c) s += v * y.get(i);
                z.set(j, s);
            }
            x = z;
        }
    } else {
        auto [c1, r1] = abs_sums(op);
        if (prm.space == SpaceKind::C0) {
            nb.upper = r1;
            nb.method = "row-sum";
        } else {
            Real ip = 1 / to_real(prm.p);
            nb.upper = pow(c1, ip) * pow(r1, 1 - ip);
            nb.method = "riesz-thorin";
        }
    }
    // only the interpolation bound can undershoot (mixed blocks); never report upper < lower
    if (nb.upper < nb.lower) {
        nb.upper = nb.lower;
        nb.method += "+clamped";
    }
    return nb;
}

std::string export_triplets(const SparseOperator& op) {
    std::string s;
    for (const auto& [j, c] : op.columns)
        for (const auto& [i, v] : c) s += to_string(i) + " " + to_string(j) + " " + hex(v) + "\n";
    return s;
}

}  // namespace rop
