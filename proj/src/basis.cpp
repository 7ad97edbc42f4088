#include "rop/basis.hpp"

#include <mpfr.h>

#include <limits>

namespace rop {

namespace {

Real lp_combine(const std::vector<Real>& parts, const ScheduleParams& prm) {
    if (prm.space == SpaceKind::C0) {
        Real m = 0;
        for (const auto& v : parts)
            if (v > m) m = v;
        return m;
    }
    if (prm.p == 1) {
        Real s = 0;
        for (const auto& v : parts) s += v;
        return s;
    }
    Real p = to_real(prm.p);
    Real s = 0;
    if (prm.p == 2) {
        for (const auto& v : parts) s += v * v;
        return sqrt(s);
    }
    for (const auto& v : parts)
        if (v != 0) s += pow(v, p);
    return pow(s, 1 / p);
}

}  // namespace

ExactVec to_exact(const FVector& x) {
    ExactVec r;
    for (const auto& [j, v] : x) r.emplace_hint(r.end(), j, to_rational(v));
    return r;
}

FVector from_exact(const ExactVec& x) {
    FVector r;
    for (const auto& [j, v] : x) r.set(j, to_real(v));
    return r;
}

Basis::Basis(Schedule s, std::size_t cache_cap) : s_(std::move(s)), cap_(cache_cap) {}

std::optional<std::pair<int, Index>> Basis::a_interval(Index j) const {
    for (const auto& st : s_.steps) {
        if (j > st.fan_end) continue;
        if (!s_.is_th1()) {
            if (j >= st.a - st.kgap && j <= st.a) return std::make_pair(st.n, Index(0));
        } else if (j >= st.a && j <= st.mu + s_.xi(1)) {
            Index r = j / st.a;
            if (r >= 1 && r <= st.n && j <= r * st.a + s_.xi(st.n + 1 - static_cast<int>(r)))
                return std::make_pair(st.n, r);
        }
        return std::nullopt;
    }
    return std::nullopt;
}

FIdentity Basis::f_identity(Index j) const {
    if (j < 0 || j > s_.horizon) throw Error(Errc::OutOfHorizon, "f_identity at " + to_string(j));
    FIdentity id;
    if (j == 0) return id;
    auto ai = a_interval(j);
    if (!ai) {
        id.i = j - a_count_below(s_, j);
        return id;
    }
    const auto& st = s_.step(ai->first);
    if (!s_.is_th1()) {
        id.kind = FIdentity::Z;
        id.i = s_.params.kappa_step * st.n - (st.a - j);
        return id;
    }
    Index r = ai->second;
    id.kind = FIdentity::ZCopy;
    id.i = r;
    id.d = s_.d[static_cast<std::size_t>(st.n - r + 1)] + j - r * st.a;
    return id;
}

Real Basis::log2_lambda(Index j) const {
    if (j <= 0 || j > s_.horizon) throw Error(Errc::NotLayOff, "index " + to_string(j) + " is not in a lay-off");
    IntervalTag t = classify_index(s_, j);
    if (t.kind != Kind::LayOff) throw Error(Errc::NotLayOff, "index " + to_string(j) + " is " + t.describe());
    Real len = to_real(t.lam_len);
    return (len / 2 + to_real(t.lam_base + 1 - j)) / sqrt(len);
}

Relation Basis::make_relation(Index j) const {
    Relation rel;
    if (j == 0) {
        rel.exact = true;
        return rel;
    }
    IntervalTag t = classify_index(s_, j);
    rel.kind = t.kind;
    const StepLayout& st = s_.step(t.n);
    switch (t.kind) {
        case Kind::Root: rel.exact = true; break;
        case Kind::LayOff: {
            Real len = to_real(t.lam_len);
            rel.c = exp2r((len / 2 + to_real(t.lam_base + 1 - j)) / sqrt(len));
            break;
        }
        case Kind::AWork: {
            if (!s_.is_th1()) {
                Index koff = st.a - j;
                if (koff > 0) {
                    // e_{a-k} = a^{k+1} f_{a-k}
                    rel.exact = true;
                    rel.cq = Rational(1) / Rational(boost::multiprecision::pow(to_bigint(st.a), static_cast<unsigned>(koff + 1)));
                    rel.c = to_real(rel.cq);
                } else {
                    // e_{a_n} = alpha_n f_{a_n} + e_{a_{n-1}}
                    Index prev = s_.a(t.n - 1);
                    auto ex = s_.alpha_exact(t.n);
                    if (ex) {
                        rel.exact = true;
                        rel.cq = 1 / *ex;
                        rel.c = to_real(rel.cq);
                        rel.Rq.emplace_back(prev, 1);
                    } else {
                        rel.c = 1 / s_.alpha(t.n);
                    }
                    rel.R.emplace_back(prev, Real(1));
                }
            } else {
                // f_j = (a_{n-r}/alpha_r)(e_j - e_{j - r a_n + (r-1) a_{n-1}})
                const int r = static_cast<int>(t.r);
                Index back = j - t.r * st.a + (t.r - 1) * s_.a(t.n - 1);
                auto ex = s_.alpha_exact(r);
                Rational an(to_bigint(s_.a(t.n - r)));
                if (ex) {
                    rel.exact = true;
                    rel.cq = an / *ex;
                    rel.c = to_real(rel.cq);
                    rel.Rq.emplace_back(back, 1);
                } else {
                    rel.c = to_real(an) / s_.alpha(r);
                }
                rel.R.emplace_back(back, Real(1));
            }
            break;
        }
        case Kind::BWork:
            rel.exact = true;
            rel.R.emplace_back(j - st.b, to_real(st.b));
            rel.Rq.emplace_back(j - st.b, Rational(to_bigint(st.b)));
            break;
        case Kind::CWork: {
            if (!st.net_frozen) throw Error(Errc::NetNotFixed, "net of step " + std::to_string(t.n) + " not fixed");
            // 1/gamma can leave the MPFR exponent range (multi-copy step 3);
            // then c is +inf and e -> f flushes the gamma f_j term to zero
            const Real e2 = Real(2 * (1 - t.abs_s)) - to_real(st.log2_gamma);
            if (e2 > Real(mpfr_get_emax()) - 2)
                rel.c = std::numeric_limits<Real>::infinity();
            else
                rel.c = exp2r(e2);
            const Polynomial& p = st.net.at(static_cast<std::size_t>(t.t - 1));
            const Index base = j - st.c[static_cast<std::size_t>(t.t - 1)];
            rel.R.reserve(p.terms());
            for (const auto& [k, v] : p.coeffs()) rel.R.emplace_back(base + k, v);
            break;
        }
    }
    return rel;
}

std::shared_ptr<const Relation> Basis::relation(Index j) const {
    if (j < 0 || j > s_.horizon) throw Error(Errc::OutOfHorizon, "index " + to_string(j) + " beyond the horizon");
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = cache_.find(j);
        if (it != cache_.end()) return it->second;
    }
    auto rel = std::make_shared<const Relation>(make_relation(j));
    std::lock_guard<std::mutex> lk(mu_);
    if (cache_.size() >= cap_) cache_.clear();
    cache_.emplace(j, rel);
    return rel;
}

FVector Basis::e_to_f(const FVector& e) const {
    std::map<Index, Real> pending(e.coeffs().begin(), e.coeffs().end());
    FVector out;
    while (!pending.empty()) {
        auto it = std::prev(pending.end());
        const Index m = it->first;
        Real v = std::move(it->second);
        pending.erase(it);
        if (v == 0) continue;
        auto rel = relation(m);
        out.set(m, v / rel->c);
        for (const auto& [i, r] : rel->R) pending[i] += v * r;
    }
    return out;
}

FVector Basis::f_to_e(const FVector& f) const {
    FVector out;
    for (const auto& [j, v] : f) {
        auto rel = relation(j);
        if (isinf(rel->c)) throw Error(Errc::Overflow, "f_" + to_string(j) + " has a weight outside the exponent range");
        Real w = v * rel->c;
        out.add(j, w);
        for (const auto& [i, r] : rel->R) out.add(i, -w * r);
    }
    return out;
}

std::optional<ExactVec> Basis::e_to_f_exact(const ExactVec& e) const {
    ExactVec pending = e;
    ExactVec out;
    while (!pending.empty()) {
        auto it = std::prev(pending.end());
        const Index m = it->first;
        Rational v = std::move(it->second);
        pending.erase(it);
        if (v == 0) continue;
        auto rel = relation(m);
        if (!rel->exact) return std::nullopt;
        out.emplace(m, v / rel->cq);
        for (const auto& [i, r] : rel->Rq) pending[i] += v * r;
    }
    return out;
}

std::optional<ExactVec> Basis::f_to_e_exact(const ExactVec& f) const {
    ExactVec out;
    auto add = [&](Index i, const Rational& v) {
        auto& slot = out[i];
        slot += v;
        if (slot == 0) out.erase(i);
    };
    for (const auto& [j, v] : f) {
        auto rel = relation(j);
        if (!rel->exact) return std::nullopt;
        Rational w = v * rel->cq;
        add(j, w);
        for (const auto& [i, r] : rel->Rq) add(i, -w * r);
    }
    return out;
}

Real Basis::norm(const FVector& x) const {
    const auto& prm = s_.params;
    std::vector<Real> parts;
    // Z parts keyed by copy (a single copy for the one-copy build)
    std::map<Index, Real> zpart;
    const bool l2z = prm.z == ZKind::L2SecondCopy;
    for (const auto& [j, v] : x) {
        auto ai = j > 0 ? a_interval(j) : std::nullopt;
        if (!ai) {
            parts.push_back(abs(v));
            continue;
        }
        Index copy = 0;
        if (s_.is_th1()) {
            const auto& st = s_.step(ai->first);
            copy = s_.d[static_cast<std::size_t>(st.n - ai->second + 1)] + j - ai->second * st.a;
        }
        Real& z = zpart[copy];
        if (l2z)
            z += v * v;
        else if (abs(v) > z)
            z = abs(v);
    }
    for (auto& [d, z] : zpart) parts.push_back(l2z ? Real(sqrt(z)) : z);
    return lp_combine(parts, prm);
}

// Coordinate functionals of the canonical bases of l_p, c_0 and l_2 all
// have norm one.
Real Basis::dual_norm(Index j) const {
    if (j < 0 || j > s_.horizon) throw Error(Errc::OutOfHorizon, "dual_norm at " + to_string(j));
    return 1;
}

}  // namespace rop
