#include "rop/schedule.hpp"

#include <gtest/gtest.h>

using namespace rop;

namespace {

// Hand evaluation of the floor-and-round rule: r16(x) = max(16, 16*ceil(x/16)).
long long r16(long long x) { return std::max<long long>(16, (x + 15) / 16 * 16); }

}  // namespace

TEST(Schedule, DeskStepOne) {
    Schedule s = build_schedule(ScheduleParams::desk());
    const auto& st = s.step(1);
    EXPECT_EQ(st.xi, 0);
    EXPECT_EQ(st.a, 16);
    EXPECT_EQ(st.b, 256);
    EXPECT_EQ(st.nu, 4112);
    EXPECT_EQ(st.c.size(), 1u);
    EXPECT_EQ(st.c[0], r16(4 * 4112));
    EXPECT_EQ(st.c[0], 16448);
    EXPECT_EQ(s.xi(2), r16(4 * 2 * 16448));
    EXPECT_EQ(s.xi(2), 131584);
    EXPECT_EQ(st.l, 256 + 16 + 1);
    EXPECT_EQ(st.log2_eps, -(2 * 4112 + 1));
}

TEST(Schedule, DeskStepTwo) {
    Schedule s = build_schedule(ScheduleParams::desk());
    const auto& st = s.step(2);
    EXPECT_EQ(st.a, r16(4 * 131584));
    EXPECT_EQ(st.a, 526336);
    EXPECT_EQ(st.b, 16 * 526336);
    EXPECT_EQ(st.nu, Index(526336) * (16 * 526336 + 1));
    EXPECT_LT(s.horizon, Index(1) << 48);
}

TEST(Schedule, SingletonAInterval) {
    ScheduleParams p = ScheduleParams::desk();
    p.n_max = 1;
    Schedule s = build_schedule(p);
    EXPECT_EQ(s.step(1).kgap, 0);
    IntervalTag t = classify_index(s, 16);
    EXPECT_EQ(t.kind, Kind::AWork);
    EXPECT_EQ(t.left, 16);
    EXPECT_EQ(t.right, 16);
}

TEST(Schedule, GrowthOverflow) {
    ScheduleParams p = ScheduleParams::desk();
    p.n_max = 3;
    for (auto& f : p.floors) f = Rational(BigInt(1) << 40);
    try {
        build_schedule(p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::GrowthOverflow);
    }
}

TEST(Schedule, InvalidParams) {
    ScheduleParams p = ScheduleParams::desk();
    p.epsilon = 1;
    EXPECT_THROW(build_schedule(p), Error);
    p = ScheduleParams::desk();
    p.alpha = Rational(1, 2);  // alpha must stay below epsilon
    EXPECT_THROW(build_schedule(p), Error);
    p = ScheduleParams::desk();
    p.floors[2] = 1;
    EXPECT_THROW(build_schedule(p), Error);
    p = ScheduleParams::desk();
    p.z = ZKind::C0Canonical;
    p.alpha_kind = AlphaKind::HilbertHarmonic;
    EXPECT_THROW(build_schedule(p), Error);
}

TEST(Schedule, MultiCopy) {
    ScheduleParams p = ScheduleParams::desk_multi_copy();
    p.budget_log2 = 100;
    p.n_max = 2;
    Schedule s = build_schedule_multi(p);
    EXPECT_EQ(s.d[1], 1);
    EXPECT_EQ(s.d[2], 2);
    EXPECT_EQ(s.d[3], 2 + s.xi(2) + 1);
    const auto& st = s.step(2);
    EXPECT_EQ(st.mu, 2 * st.a);
    EXPECT_EQ(st.nu, st.mu * (st.b + 1));
    int acount = 0;
    IntervalTag last;
    for (const auto& t : step_intervals(s, 2))
        if (t.kind == Kind::AWork) {
            ++acount;
            last = t;
        }
    EXPECT_EQ(acount, 2);
    EXPECT_EQ(last.left, 2 * st.a);
    EXPECT_EQ(last.right, 2 * st.a);  // xi_1 = 0
}

TEST(Classify, DeskExamples) {
    Schedule s = build_schedule(ScheduleParams::desk());
    IntervalTag t = classify_index(s, 16);
    EXPECT_EQ(t.kind, Kind::AWork);
    EXPECT_EQ(t.n, 1);
    t = classify_index(s, 257);
    EXPECT_EQ(t.kind, Kind::BWork);
    EXPECT_EQ(t.r, 1);
    EXPECT_EQ(t.left, 257);
    EXPECT_EQ(t.right, 256 + 16);
    t = classify_index(s, 1);
    EXPECT_EQ(t.kind, Kind::LayOff);
    EXPECT_EQ(t.k, 0);
    EXPECT_EQ(t.l, 15);
    EXPECT_FALSE(t.modified);
    t = classify_index(s, 17);
    EXPECT_TRUE(t.modified);
    EXPECT_EQ(t.left, 17);
    EXPECT_EQ(t.right, 256);
    t = classify_index(s, 273);
    EXPECT_TRUE(t.modified);
    EXPECT_EQ(t.mod_r, 1);
    EXPECT_EQ(t.right, 2 * 257 - 1);
    t = classify_index(s, 16448 + 4112);
    EXPECT_EQ(t.kind, Kind::CWork);
    EXPECT_EQ(t.s, std::vector<int>{1});
    EXPECT_TRUE(t.is_right_endpoint);
    EXPECT_THROW(classify_index(s, s.horizon + 1), Error);
}

// Every j of step 1 and the head of step 2 is classified consistently with
// the layout enumeration, and the enumeration tiles [xi_n+1, xi_{n+1}].
TEST(Classify, MatchesEnumeration) {
    Schedule s = build_schedule(ScheduleParams::desk());
    auto iv = step_intervals(s, 1);
    Index expect = 1;
    for (const auto& t : iv) {
        ASSERT_EQ(t.left, expect);
        for (Index j = t.left; j <= t.right; ++j) {
            IntervalTag c = classify_index(s, j);
            c.is_right_endpoint = false;
            ASSERT_EQ(c.kind, t.kind) << to_string(j);
            ASSERT_EQ(c.left, t.left) << to_string(j);
            // the lay-off crossing xi_2 keeps its full length; the listing clips it
            ASSERT_EQ(std::min(c.right, s.xi(2)), t.right) << to_string(j);
            if (c.right <= s.xi(2)) ASSERT_TRUE(c == t) << to_string(j);
        }
        expect = t.right + 1;
    }
    EXPECT_EQ(expect, s.xi(2) + 1);
}

TEST(Sigma, DeskExamples) {
    Schedule s = build_schedule(ScheduleParams::desk());
    EXPECT_EQ(sigma(s, 5), 5);
    EXPECT_EQ(sigma(s, 17), 16);
    try {
        sigma(s, 16);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotInDomain);
    }
    Index prev = 0;
    for (Index j = 1; j < 5000; ++j) {
        if (in_a_interval(s, j)) continue;
        Index v = sigma(s, j);
        ASSERT_EQ(v, prev + 1);
        prev = v;
    }
}

TEST(Validate, SelectorAndDeterminism) {
    Schedule s = build_schedule(ScheduleParams::desk());
    EXPECT_TRUE(validate_schedule(s, {}).empty());
    auto r = validate_schedule(s, {"b_damping"});
    EXPECT_EQ(r.size(), 2u);
    EXPECT_EQ(build_schedule(ScheduleParams::desk()).dump(), s.dump());
}

TEST(Validate, TightBFails) {
    // b_1 = a_1 + 1 cannot damp: b^a 2^{-sqrt(b)/2} is enormous
    ScheduleParams p = ScheduleParams::desk();
    p.n_max = 1;
    Schedule s = build_schedule(p);
    s.steps[0].b = s.steps[0].a + 1;
    auto r = validate_schedule(s, {"b_damping"});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_FALSE(r[0].pass);
}

TEST(GridNet, ThirteenPoints) {
    auto net = grid_net(1, 1);
    EXPECT_EQ(net.size(), 13u);
    for (const auto& q : net) EXPECT_LE(q.modulus(), 2);
    EXPECT_THROW(grid_net(Rational(1, 1024), 256), Error);
}

// Brute force: every lattice target at a finer spacing has a net point within eps.
TEST(GridNet, CoversBall) {
    for (int deg : {0, 1, 2}) {
        Rational eps(1, 2);
        auto net = grid_net(eps, deg, 30);
        const int fine = 12;
        std::vector<int> m(deg + 1, -2 * fine);
        while (true) {
            int tot = 0;
            for (int v : m) tot += std::abs(v);
            if (tot <= 2 * fine) {
                Real best = 100;
                for (const auto& q : net) {
                    Real d = 0;
                    for (int i = 0; i <= deg; ++i) d += abs(q.coeff(i) - Real(m[i]) / fine);
                    if (d < best) best = d;
                }
                ASSERT_LE(best, to_real(eps)) << deg;
            }
            int i = 0;
            while (i <= deg && m[i] == 2 * fine) m[i++] = -2 * fine;
            if (i > deg) break;
            ++m[i];
        }
    }
}
