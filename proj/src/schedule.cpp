#include "rop/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rop {

namespace {

constexpr long kRound = 16;

BigInt ceil_mul(const Rational& f, const BigInt& x) {
    BigInt num = boost::multiprecision::numerator(f) * x;
    BigInt den = boost::multiprecision::denominator(f);
    BigInt q = num / den;
    if (q * den < num) q += 1;
    return q;
}

BigInt round16(const BigInt& v) {
    BigInt r = (v + (kRound - 1)) / kRound * kRound;
    return r < kRound ? BigInt(kRound) : r;
}

struct Budget {
    BigInt limit;
    Index check(const BigInt& v, const char* what) const {
        if (v > limit)
            throw Error(Errc::GrowthOverflow, std::string(what) + " = " + v.str() + " exceeds the index budget");
        return index_from_bigint(v);
    }
};

int rule_at(const std::vector<int>& rule, int n) {
    if (rule.empty()) return 1;
    return rule[std::min<std::size_t>(static_cast<std::size_t>(n - 1), rule.size() - 1)];
}

Index bit_length(Index v) {
    Index n = 0;
    while (v > 0) {
        v >>= 1;
        ++n;
    }
    return n;
}

std::vector<Polynomial> net_for_step(const ScheduleParams& p, int n, bool& frozen) {
    auto it = p.step_net.find(n);
    if (it != p.step_net.end()) {
        frozen = true;
        return it->second;
    }
    if (p.net_mode == NetMode::Grid) {
        frozen = true;
        return grid_net(p.grid_eps, p.grid_degree, p.net_budget_log2);
    }
    if (!p.net.empty()) {
        frozen = true;
        return p.net;
    }
    frozen = false;
    return {};
}

Schedule build_common(const ScheduleParams& params, Variant variant) {
    ScheduleParams prm = params;
    prm.variant = variant;
    prm.validate();

    Schedule s;
    s.params = prm;
    Budget budget{BigInt(1) << prm.budget_log2};
    const bool th1 = variant == Variant::Th1;

    BigInt xi = 0;
    Index kappa_prev = 0;
    for (int n = 1; n <= prm.n_max; ++n) {
        StepLayout st;
        st.n = n;
        st.xi = budget.check(xi, "xi");
        Index kappa = prm.kappa_step * n;
        st.kgap = th1 ? 0 : kappa - kappa_prev - 1;
        kappa_prev = kappa;

        BigInt a = round16(ceil_mul(prm.floors[FloorA], xi));
        // room for a nonempty lay-off before the first (a)-interval
        BigInt prev_end = n == 1 ? BigInt(0) : to_bigint(s.steps.back().fan_end);
        while (a - to_bigint(st.kgap) < prev_end + 2) a += kRound;
        st.a = budget.check(a, "a_n");
        BigInt A = a;
        if (th1) {
            A = a * n;
            st.mu = budget.check(A, "mu_n");
        }
        const Rational& fb = prm.floors[FloorB];
        BigInt b = round16(ceil_mul(fb * fb, A));
        st.b = budget.check(b, "b_n");
        BigInt nu = A * (b + 1);
        st.nu = budget.check(nu, "nu_n");

        st.h = rule_at(prm.h_rule, n);
        bool frozen = false;
        st.net = net_for_step(prm, n, frozen);
        st.net_frozen = frozen;
        st.k = frozen ? static_cast<int>(st.net.size()) : rule_at(prm.k_rule, n);
        if (st.k < 1) throw Error(Errc::InvalidParams, "k_n must be at least 1");

        BigInt c = round16(ceil_mul(prm.floors[FloorC1], nu));
        BigInt lattice_top = 0;
        for (int k = 0; k < st.k; ++k) {
            if (k > 0) c = round16(ceil_mul(prm.floors[FloorCk], c * st.h));
            // the (c)-intervals stay disjoint and separated by nonempty lay-offs
            if (c <= lattice_top + nu + 1)
                throw Error(Errc::InvalidParams, "c-floor too small for disjoint (c)-intervals");
            st.c.push_back(budget.check(c, "c_{k,n}"));
            lattice_top += c * st.h;
        }
        BigInt fan_end = lattice_top + nu;
        st.fan_end = budget.check(fan_end, "fan end");
        BigInt xi_next = round16(ceil_mul(prm.floors[FloorXi], c * st.h));
        if (xi_next <= fan_end) xi_next = round16(fan_end + 1);
        budget.check(xi_next, "xi_{n+1}");

        st.log2_eps = -(2 * st.nu + 1);
        st.log2_delta = st.log2_eps;
        Index Ai = st.A();
        st.log2_gamma = st.log2_delta - Ai * bit_length(st.b) - isqrt_floor(st.b) - 9;
        st.l = th1 ? st.nu : st.b + st.a + 1;

        s.steps.push_back(std::move(st));
        xi = xi_next;
    }
    s.horizon = index_from_bigint(xi);
    BigInt next_a = round16(ceil_mul(prm.floors[FloorA], xi));
    Index kappa = prm.kappa_step * (prm.n_max + 1);
    s.next_kgap = th1 ? 0 : kappa - kappa_prev - 1;
    while (next_a - to_bigint(s.next_kgap) < xi + 2) next_a += kRound;
    s.next_a = index_from_bigint(next_a);

    if (th1) {
        s.d.assign(static_cast<std::size_t>(prm.n_max) + 3, 0);
        s.d[1] = 1;
        for (int m = 1; m <= prm.n_max + 1; ++m) s.d[m + 1] = s.d[m] + s.xi(m) + 1;
    }
    return s;
}

// Largest lattice point sum s_k c_k <= off with digits in [0,h].
std::vector<int> greedy_digits(const StepLayout& st, Index off) {
    std::vector<int> s(st.c.size(), 0);
    for (int k = static_cast<int>(st.c.size()) - 1; k >= 0; --k) {
        Index q = off / st.c[k];
        int d = static_cast<int>(std::min<Index>(q, st.h));
        s[k] = d;
        off -= st.c[k] * d;
    }
    return s;
}

Index lattice_value(const StepLayout& st, const std::vector<int>& s) {
    Index v = 0;
    for (std::size_t k = 0; k < s.size(); ++k) v += st.c[k] * s[k];
    return v;
}

bool lattice_next(const StepLayout& st, std::vector<int>& s) {
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] < st.h) {
            ++s[k];
            for (std::size_t i = 0; i < k; ++i) s[i] = 0;
            return true;
        }
    }
    return false;
}

IntervalTag layoff(int n, Index left, Index right) {
    IntervalTag t;
    t.kind = Kind::LayOff;
    t.n = n;
    t.left = left;
    t.right = right;
    t.k = left - 1;
    t.l = right - left + 1;
    t.lam_base = t.k;
    t.lam_len = t.l;
    return t;
}

IntervalTag modified_layoff(int n, Index left, Index right, Index r, Index base, Index b) {
    IntervalTag t = layoff(n, left, right);
    t.modified = true;
    t.mod_r = r;
    t.lam_base = base;
    t.lam_len = b;
    return t;
}

IntervalTag awork(int n, Index left, Index right) {
    IntervalTag t;
    t.kind = Kind::AWork;
    t.n = n;
    t.left = left;
    t.right = right;
    return t;
}

IntervalTag cwork(const StepLayout& st, const std::vector<int>& s) {
    IntervalTag t;
    t.kind = Kind::CWork;
    t.n = st.n;
    t.left = lattice_value(st, s);
    t.right = t.left + st.nu;
    t.s = s;
    for (std::size_t k = 0; k < s.size(); ++k) {
        t.abs_s += s[k];
        if (s[k] != 0) t.t = static_cast<int>(k) + 1;
    }
    return t;
}

}  // namespace

void ScheduleParams::validate() const {
    if (!(epsilon > 0 && epsilon < 1)) throw Error(Errc::InvalidParams, "epsilon must lie in (0,1)");
    if (n_max < 1) throw Error(Errc::InvalidParams, "n_max must be >= 1");
    for (const auto& f : floors)
        if (f < 2) throw Error(Errc::InvalidParams, "growth floors must be >= 2");
    if (space == SpaceKind::Lp && p < 1) throw Error(Errc::InvalidParams, "p must be >= 1");
    if (alpha_kind == AlphaKind::Constant) {
        if (!(alpha > 0)) throw Error(Errc::InvalidParams, "alpha must be positive");
        if (variant == Variant::Th2 && !(alpha < epsilon))
            throw Error(Errc::InvalidParams, "constant alpha must satisfy alpha < epsilon");
    } else {
        if (z != ZKind::L2SecondCopy) throw Error(Errc::InvalidParams, "harmonic alpha needs the l2 second copy");
        if (variant == Variant::Th1) throw Error(Errc::InvalidParams, "harmonic alpha is single-copy only");
    }
    if (kappa_step < 1) throw Error(Errc::InvalidParams, "kappa_step must be >= 1");
    for (int h : h_rule)
        if (h < 1) throw Error(Errc::InvalidParams, "h_n must be >= 1");
    if (!(rho > 0)) throw Error(Errc::InvalidParams, "rho must be positive");
    if (budget_log2 < 8 || budget_log2 > 124) throw Error(Errc::InvalidParams, "budget_log2 out of range");
    for (const auto& [n, polys] : step_net)
        for (const auto& q : polys)
            if (q.modulus() > 2) throw Error(Errc::InvalidParams, "net polynomial with |p| > 2");
    for (const auto& q : net)
        if (q.modulus() > 2) throw Error(Errc::InvalidParams, "net polynomial with |p| > 2");
}

ScheduleParams ScheduleParams::desk() { return ScheduleParams{}; }

ScheduleParams ScheduleParams::desk_multi_copy() {
    ScheduleParams p;
    p.variant = Variant::Th1;
    p.alpha = 1;
    return p;
}

ScheduleParams ScheduleParams::hilbert(const Rational& epsilon) {
    ScheduleParams p;
    p.space = SpaceKind::Lp;
    p.p = 2;
    p.z = ZKind::L2SecondCopy;
    p.epsilon = epsilon;
    p.alpha_kind = AlphaKind::HilbertHarmonic;
    return p;
}

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Root: return "Root";
        case Kind::LayOff: return "LayOff";
        case Kind::AWork: return "AWork";
        case Kind::BWork: return "BWork";
        case Kind::CWork: return "CWork";
    }
    return "?";
}

std::string IntervalTag::describe() const {
    std::string s = std::string(kind_name(kind)) + "{n=" + std::to_string(n);
    switch (kind) {
        case Kind::LayOff:
            s += ", k=" + to_string(k) + ", l=" + to_string(l) + ", modified=" + (modified ? "true" : "false");
            if (modified) s += ", r=" + to_string(mod_r);
            break;
        case Kind::AWork:
            s += r != 0 ? ", r=" + to_string(r) : ", koff=" + to_string(koff);
            break;
        case Kind::BWork: s += ", r=" + to_string(r); break;
        case Kind::CWork: {
            s += ", s=(";
            for (std::size_t i = 0; i < this->s.size(); ++i) s += (i ? "," : "") + std::to_string(this->s[i]);
            s += "), t=" + std::to_string(t);
            break;
        }
        case Kind::Root: break;
    }
    return s + "}";
}

bool IntervalTag::operator==(const IntervalTag& o) const {
    return kind == o.kind && n == o.n && left == o.left && right == o.right && k == o.k && l == o.l &&
           modified == o.modified && mod_r == o.mod_r && lam_base == o.lam_base && lam_len == o.lam_len &&
           r == o.r && s == o.s && t == o.t;
}

const StepLayout& Schedule::step(int n) const {
    if (n < 1 || n > n_max()) throw Error(Errc::StepNotBuilt, "step " + std::to_string(n) + " not built");
    return steps[static_cast<std::size_t>(n - 1)];
}

Index Schedule::xi(int n) const {
    if (n >= 1 && n <= n_max()) return steps[static_cast<std::size_t>(n - 1)].xi;
    if (n == n_max() + 1) return horizon;
    throw Error(Errc::StepNotBuilt, "xi_" + std::to_string(n));
}

Index Schedule::a(int n) const {
    if (n == 0) return is_th1() ? 1 : 0;
    if (n >= 1 && n <= n_max()) return steps[static_cast<std::size_t>(n - 1)].a;
    if (n == n_max() + 1) return next_a;
    throw Error(Errc::StepNotBuilt, "a_" + std::to_string(n));
}

Index Schedule::kgap(int n) const {
    if (n >= 1 && n <= n_max()) return steps[static_cast<std::size_t>(n - 1)].kgap;
    if (n == n_max() + 1) return next_kgap;
    throw Error(Errc::StepNotBuilt, "kgap_" + std::to_string(n));
}

Index Schedule::first_a_left(int n) const { return a(n) - (is_th1() ? 0 : kgap(n)); }

int Schedule::step_of(Index j) const {
    // steps are few; linear scan is fine
    int n = 1;
    for (int m = 1; m <= n_max(); ++m)
        if (steps[static_cast<std::size_t>(m - 1)].xi < j) n = m;
    return n;
}

Real Schedule::alpha(int n) const {
    if (params.alpha_kind == AlphaKind::Constant) return to_real(params.alpha);
    // sqrt(3) eps / (pi n)
    Real pi;
    mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
    return sqrt(Real(3)) * to_real(params.epsilon) / (pi * n);
}

std::optional<Rational> Schedule::alpha_exact(int n) const {
    (void)n;
    if (params.alpha_kind == AlphaKind::Constant) return params.alpha;
    return std::nullopt;
}

Schedule build_schedule(const ScheduleParams& params) { return build_common(params, Variant::Th2); }
Schedule build_schedule_multi(const ScheduleParams& params) { return build_common(params, Variant::Th1); }

IntervalTag classify_index(const Schedule& s, Index j) {
    if (j < 0 || j > s.horizon)
        throw Error(Errc::OutOfHorizon, "index " + to_string(j) + " outside [0, " + to_string(s.horizon) + "]");
    IntervalTag tag;
    if (j == 0) {
        tag.kind = Kind::Root;
        tag.is_right_endpoint = false;
        return tag;
    }
    const int n = s.step_of(j);
    const StepLayout& st = s.step(n);
    const Index prev_end = n == 1 ? 0 : s.step(n - 1).fan_end;
    const bool th1 = s.is_th1();
    const Index A = st.A();

    auto finish = [&](IntervalTag t) {
        t.is_right_endpoint = j == t.right;
        return t;
    };

    const Index first_left = th1 ? st.a : st.a - st.kgap;
    if (j < first_left) return finish(layoff(n, prev_end + 1, first_left - 1));
    if (j <= A) {
        if (!th1) {
            IntervalTag t = awork(n, first_left, st.a);
            t.koff = st.a - j;
            return finish(t);
        }
        Index r = j / st.a;
        Index top = r * st.a + s.xi(n + 1 - static_cast<int>(r));
        if (j <= top) {
            IntervalTag t = awork(n, r * st.a, top);
            t.r = r;
            return finish(t);
        }
        return finish(layoff(n, top + 1, (r + 1) * st.a - 1));
    }
    if (j <= st.b) return finish(modified_layoff(n, A + 1, st.b, 0, A, st.b));
    if (j <= st.nu) {
        Index r = j / (st.b + 1);
        if (j <= r * st.b + A) {
            IntervalTag t;
            t.kind = Kind::BWork;
            t.n = n;
            t.left = r * (st.b + 1);
            t.right = r * st.b + A;
            t.r = r;
            return finish(t);
        }
        return finish(modified_layoff(n, r * st.b + A + 1, (r + 1) * (st.b + 1) - 1, r, r * st.b + A, st.b));
    }
    // (c)-fan region
    std::vector<int> dig = greedy_digits(st, j);
    Index P = lattice_value(st, dig);
    bool nonzero = std::any_of(dig.begin(), dig.end(), [](int d) { return d != 0; });
    if (nonzero && j - P <= st.nu) return finish(cwork(st, dig));
    Index left = (nonzero ? P : 0) + st.nu + 1;
    std::vector<int> nxt = dig;
    Index right;
    if (lattice_next(st, nxt))
        right = lattice_value(st, nxt) - 1;
    else
        right = s.first_a_left(n + 1) - 1;
    return finish(layoff(n, left, right));
}

bool in_a_interval(const Schedule& s, Index j) {
    if (j <= 0) return false;
    return classify_index(s, j).kind == Kind::AWork;
}

Index a_count_below(const Schedule& s, Index j) {
    Index cnt = 0;
    for (int n = 1; n <= s.n_max(); ++n) {
        const StepLayout& st = s.step(n);
        if (!s.is_th1()) {
            Index lo = st.a - st.kgap, hi = st.a;
            if (j > lo) cnt += std::min(j, hi + 1) - lo;
        } else {
            for (int r = 1; r <= n; ++r) {
                Index lo = r * st.a, hi = r * st.a + s.xi(n + 1 - r);
                if (j > lo) cnt += std::min(j, hi + 1) - lo;
            }
        }
    }
    return cnt;
}

Index sigma(const Schedule& s, Index j) {
    if (j < 0 || j > s.horizon) throw Error(Errc::OutOfHorizon, "sigma at " + to_string(j));
    if (j > 0 && in_a_interval(s, j)) throw Error(Errc::NotInDomain, "index " + to_string(j) + " is in an (a)-interval");
    return j - a_count_below(s, j);
}

std::vector<IntervalTag> step_intervals(const Schedule& s, int n) {
    const StepLayout& st = s.step(n);
    std::vector<IntervalTag> out;
    const Index lo = st.xi + 1, hi = s.xi(n + 1);
    auto push = [&](IntervalTag t) {
        if (t.right < lo || t.left > hi) return;
        t.left = std::max(t.left, lo);
        t.right = std::min(t.right, hi);
        out.push_back(std::move(t));
    };
    const Index prev_end = n == 1 ? 0 : s.step(n - 1).fan_end;
    const Index A = st.A();
    if (!s.is_th1()) {
        push(layoff(n, prev_end + 1, st.a - st.kgap - 1));
        IntervalTag t = awork(n, st.a - st.kgap, st.a);
        push(t);
    } else {
        push(layoff(n, prev_end + 1, st.a - 1));
        for (int r = 1; r <= n; ++r) {
            Index top = r * st.a + s.xi(n + 1 - r);
            IntervalTag t = awork(n, r * st.a, top);
            t.r = r;
            push(t);
            if (r < n) push(layoff(n, top + 1, (r + 1) * st.a - 1));
        }
    }
    push(modified_layoff(n, A + 1, st.b, 0, A, st.b));
    for (Index r = 1; r <= A; ++r) {
        IntervalTag t;
        t.kind = Kind::BWork;
        t.n = n;
        t.left = r * (st.b + 1);
        t.right = r * st.b + A;
        t.r = r;
        push(t);
        if (r < A) push(modified_layoff(n, r * st.b + A + 1, (r + 1) * (st.b + 1) - 1, r, r * st.b + A, st.b));
    }
    std::vector<int> dig(st.c.size(), 0);
    Index prev = st.nu;
    while (lattice_next(st, dig)) {
        IntervalTag t = cwork(st, dig);
        push(layoff(n, prev + 1, t.left - 1));
        prev = t.right;
        push(t);
    }
    push(layoff(n, prev + 1, s.first_a_left(n + 1) - 1));
    for (auto& t : out) t.is_right_endpoint = false;
    return out;
}

std::string Schedule::dump(std::size_t fan_limit) const {
    std::ostringstream os;
    os << "# variant " << (is_th1() ? "th1" : "th2") << " horizon " << to_string(horizon) << " next_a "
       << to_string(next_a) << "\n";
    for (const auto& st : steps) {
        os << "# step " << st.n << " xi " << to_string(st.xi) << " a " << to_string(st.a) << " b " << to_string(st.b)
           << " nu " << to_string(st.nu);
        if (st.mu) os << " mu " << to_string(st.mu);
        os << " h " << st.h << " k " << st.k << " l " << to_string(st.l) << " log2_eps " << to_string(st.log2_eps)
           << " log2_gamma " << to_string(st.log2_gamma) << " c";
        for (Index c : st.c) os << " " << to_string(c);
        os << "\n";
        for (std::size_t i = 0; i < st.net.size(); ++i) os << "# net " << st.n << " " << i + 1 << " " << st.net[i].serialize() << "\n";
        const Index A = st.A();
        const bool compress = static_cast<std::size_t>(A) > fan_limit;
        std::vector<IntervalTag> iv;
        if (!compress) iv = step_intervals(*this, st.n);
        auto line = [&](const IntervalTag& t) {
            os << st.n << " " << kind_name(t.kind) << " " << to_string(t.left) << " " << to_string(t.right);
            switch (t.kind) {
                case Kind::LayOff:
                    os << " k=" << to_string(t.k) << " l=" << to_string(t.l);
                    if (t.modified) os << " modified r=" << to_string(t.mod_r);
                    break;
                case Kind::AWork:
                    if (t.r) os << " r=" << to_string(t.r);
                    break;
                case Kind::BWork: os << " r=" << to_string(t.r); break;
                case Kind::CWork:
                    os << " s=";
                    for (std::size_t i = 0; i < t.s.size(); ++i) os << (i ? "," : "") << t.s[i];
                    os << " t=" << t.t;
                    break;
                default: break;
            }
            os << "\n";
        };
        if (!compress) {
            for (const auto& t : iv) line(t);
        } else {
            // keep the head and tail of the (b)-fan, summarize the middle
            const Index lo = st.xi + 1;
            Index probe = lo;
            while (probe <= st.b) {
                IntervalTag t = classify_index(*this, probe);
                t.left = std::max(t.left, lo);
                line(t);
                probe = t.right + 1;
            }
            Index head = static_cast<Index>(fan_limit / 2);
            for (Index r = 1; r <= head; ++r) {
                line(classify_index(*this, r * (st.b + 1)));
                line(classify_index(*this, r * st.b + A + 1));
            }
            os << st.n << " BFanElided " << to_string((head + 1) * (st.b + 1)) << " "
               << to_string((A - head) * (st.b + 1) - 1) << " r=" << to_string(head + 1) << ".." << to_string(A - head)
               << "\n";
            for (Index r = A - head + 1; r <= A; ++r) {
                line(classify_index(*this, r * (st.b + 1)));
                if (r < A) line(classify_index(*this, r * st.b + A + 1));
            }
            probe = st.nu + 1;
            const Index hi = xi(st.n + 1);
            while (probe <= hi) {
                IntervalTag t = classify_index(*this, probe);
                t.right = std::min(t.right, hi);
                line(t);
                probe = t.right + 1;
            }
        }
    }
    return os.str();
}

const std::vector<std::string>& schedule_check_names() {
    static const std::vector<std::string> names{"a_damping", "b_damping", "eps_repr", "c_layoff", "h_shades", "tiling"};
    return names;
}

std::vector<CertReport> validate_schedule(const Schedule& s, const std::set<std::string>& checks) {
    std::vector<CertReport> out;
    if (checks.empty()) return out;
    auto want = [&](const char* name) { return checks.count("all") || checks.count(name); };
    for (const auto& st : s.steps) {
        const std::string sfx = "." + std::to_string(st.n);
        const Real n = st.n;
        const Index A = st.A();
        if (want("a_damping")) {
            // a_n^{kappa_n - kappa_{n-1}} 2^{-sqrt(a_n)/2} < 2^{-n}, in log2
            Real m = Real(to_real(st.kgap + 1)) * log2(to_real(st.a)) - sqrt(to_real(st.a)) / 2;
            out.push_back(CertReport::make("sched.a_damping_log2" + sfx, "a-interval weights", -n, m));
        }
        if (want("b_damping")) {
            Real m = to_real(A) * log2(to_real(st.b)) - sqrt(to_real(st.b)) / 2;
            out.push_back(CertReport::make("sched.b_damping_log2" + sfx, "b-fan column estimate", -n, m));
        }
        if (want("eps_repr")) {
            out.push_back(CertReport::make("sched.eps_repr_log2" + sfx, "eps_n < 4^-nu_n", to_real(-2 * st.nu),
                                           to_real(st.log2_eps), "stored exactly as a log2 integer"));
        }
        if (want("c_layoff")) {
            // right ends of (c)-intervals carry roughly 2^{-sqrt(c_1 - nu)/2}/gamma_n
            Real l = to_real(st.c.front() - st.nu - 1);
            Real m = -sqrt(l) / 2 - to_real(st.log2_gamma);
            out.push_back(CertReport::make("sched.c_layoff_log2" + sfx, "c-fan column estimate", -n, m,
                                           "needs c_1 - nu >= 4 (log2(1/gamma) + n)^2"));
        }
        if (want("h_shades")) {
            // the last shade is harmless once gamma_n 4^{h_n - 1} >= 1
            Index need = ceil_div(-st.log2_gamma, 2) + 1;
            Real m = to_real(-st.log2_gamma - 2 * Index(st.h - 1));
            out.push_back(CertReport::make("sched.h_shades_log2" + sfx, "shade count", Real(0), m,
                                           "h_n >= " + to_string(need) + " needed, have " + std::to_string(st.h)));
        }
        if (want("tiling")) {
            bool ok = true;
            std::string note;
            if (A > 4'000'000) {
                note = "skipped: " + to_string(A) + " (b)-intervals";
            } else {
                auto iv = step_intervals(s, st.n);
                Index expect = st.xi + 1;
                for (const auto& t : iv) {
                    if (t.left != expect || t.right < t.left) ok = false;
                    expect = t.right + 1;
                }
                if (expect != s.xi(st.n + 1) + 1) ok = false;
                note = std::to_string(iv.size()) + " intervals";
            }
            out.push_back(CertReport::make("sched.tiling" + sfx, "interval tiling", Real(0), Real(ok ? 0 : 1), note));
        }
    }
    return out;
}

std::vector<Polynomial> grid_net(const Rational& eps, int degree, int budget_log2) {
    if (!(eps > 0) || degree < 0) throw Error(Errc::InvalidParams, "grid needs eps > 0 and degree >= 0");
    double cost = (degree + 1) * std::log2(4.0 / static_cast<double>(eps.convert_to<double>()));
    if (cost > budget_log2) throw Error(Errc::NetTooLarge, "grid net of degree " + std::to_string(degree));
    const int D = degree + 1;
    const Rational step = eps * 2 / D;
    // integer points m with sum |m_i| * step <= 2
    Rational cap_q = Rational(2) / step;
    long cap = static_cast<long>(boost::multiprecision::numerator(cap_q) / boost::multiprecision::denominator(cap_q));
    std::vector<Polynomial> out;
    std::vector<long> m(static_cast<std::size_t>(D), -cap);
    const Real stepr = to_real(step);
    while (true) {
        long tot = 0;
        for (long v : m) tot += std::labs(v);
        if (tot <= cap) {
            Polynomial p;
            for (int i = 0; i < D; ++i)
                if (m[i] != 0) p.set(i, stepr * m[i]);
            out.push_back(std::move(p));
        }
        int i = 0;
        while (i < D && m[i] == cap) m[i++] = -cap;
        if (i == D) break;
        ++m[i];
    }
    return out;
}

}  // namespace rop
