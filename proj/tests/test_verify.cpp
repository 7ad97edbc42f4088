#include "rop/verify.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rop;

namespace {

const Basis& desk() {
    static Basis b(build_schedule(ScheduleParams::desk()));
    return b;
}

ScheduleParams desk1() {
    auto p = ScheduleParams::desk();
    p.n_max = 1;
    return p;
}

Real tol(int bits) { return exp2r(Real(-bits)); }

}  // namespace

TEST(Threshold, SmallTowersAreExact) {
    auto t = factorial_threshold(3, Real(1));
    EXPECT_FALSE(t.huge);
    EXPECT_EQ(t.fac_sq, BigInt(36));
    EXPECT_EQ(t.value(), Real(-36));
    EXPECT_TRUE(t.admits(Real(-36)));
    EXPECT_FALSE(t.admits(Real(-37)));
    auto t17 = factorial_threshold(17, Real(2));
    BigInt f = 355687428096000;  // 17!
    EXPECT_EQ(t17.fac_sq, f * f);
    EXPECT_EQ(t17.value(), -2 * to_real(BigInt(f * f)));
    EXPECT_TRUE(factorial_threshold(100000, Real(1)).huge);
    EXPECT_TRUE(factorial_threshold(100000, Real(1)).admits(Real(-1e18)));
}

TEST(LargeCoordinate, DeskExamples) {
    const Index a = 16;
    EXPECT_EQ(find_large_coordinate(desk(), FVector::unit(0), 1, Real(1), a - 1), Index(0));
    // e_{a_1} = f_0 + f_16/4 has no e-coordinate below a_1
    EXPECT_FALSE(find_large_coordinate(desk(), desk().e_in_f(a), 1, Real(1), a - 1).has_value());
    EXPECT_FALSE(find_large_coordinate(desk(), FVector(), 1, Real(1), a - 1).has_value());
    // f_16 = 4 e_16 - 4 e_0
    EXPECT_EQ(find_large_coordinate(desk(), FVector::unit(a), 1, Real(1), a - 1), Index(0));
    EXPECT_EQ(find_large_coordinate(desk(), FVector::unit(5), 1, Real(1), a - 1), Index(5));
    EXPECT_THROW(find_large_coordinate(desk(), FVector::unit(0), 3, Real(1), 0), Error);
}

TEST(TriangularSolve, TrivialInstances) {
    const Index m = 16;
    Polynomial p = solve_fact_f(FVector::unit(0), FVector::unit(m - 1), m, 0);
    EXPECT_EQ(p, Polynomial::monomial(m - 1));
    Polynomial h = solve_fact_f(FVector::unit(0, Real(2)), FVector::unit(0), m, 0);
    EXPECT_EQ(h, Polynomial::monomial(0, Real(1) / 2));
    EXPECT_THROW(solve_fact_f(FVector::unit(1), FVector::unit(3), m, 0), Error);
    try {
        solve_fact_f(FVector::unit(1), FVector::unit(3), m, 0);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ZeroLeading);
    }
}

TEST(TriangularSolve, RandomExactInstancesMatchTruncatedShifts) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 7), dim(1, 12);
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
        auto p = solve_fact_f_exact(x, y, m, i);
        EXPECT_EQ(truncated_poly_apply(p, x, m), y) << "instance " << it;
        // the floating solver agrees on the same instance
        Polynomial pr = solve_fact_f(from_exact(x), from_exact(y), m, i);
        for (const auto& [k, v] : p) EXPECT_LE(abs(pr.coeff(k) - to_real(v)), tol(200) * (1 + abs(to_real(v))));
    }
}

TEST(Orbit, SmallExamples) {
    auto [c0, d0] = orbit_distance(desk(), FVector::unit(0), FVector::unit(0), 0);
    EXPECT_EQ(c0, Index(0));
    EXPECT_EQ(d0, 0);
    auto [c, d] = orbit_distance(desk(), desk().e_in_f(0), desk().e_in_f(5), 5);
    EXPECT_EQ(c, Index(5));
    EXPECT_LE(d, tol(190));
    EXPECT_THROW(orbit_distance(desk(), FVector::unit(0), FVector::unit(0), desk().horizon() + 1), Error);
}

TEST(Checks, DeskStepOne) {
    auto pr = check_prop3(desk(), 1);
    EXPECT_TRUE(pr.pass) << pr.line() << " " << pr.caveat;
    auto bd = check_b_damping(desk(), 1);
    EXPECT_TRUE(bd.pass) << bd.line() << " " << bd.caveat;
    auto fb = check_fact_b(desk(), 1);
    EXPECT_TRUE(fb.pass) << fb.line() << " " << fb.caveat;
    auto q = check_q_norm(desk(), 1);
    EXPECT_TRUE(q.pass) << q.line();
    // the a_2 column of Q_nu is -4 e_16 = -f_16 - 4 f_0; z_16 - z_{a_2} has
    // c_0 norm 1 and maps to 2 f_16 + 4 f_0
    EXPECT_EQ(q.measured, Real(6));
    auto fa = check_fact_a(desk());
    EXPECT_TRUE(fa.pass) << fa.caveat;
    EXPECT_EQ(fa.measured, Real(1) / 4);
    EXPECT_THROW(check_prop3(desk(), 3), Error);
}

TEST(Checks, TailColumnAtNextA) {
    // (I - Q_nu) f_{a_2} = 4 e_{a_2}; after T^{c_1} it sits deep in a lay-off
    const Schedule& s = desk().schedule();
    const Index c = s.step(1).c[0];
    FVector col = desk().e_to_f(FVector::unit(s.a(2) + c, Real(4)));
    EXPECT_LT(log2abs(desk().norm(col)), Real(-10));
}

TEST(Pipeline, P3OnBasisVectors) {
    VerificationConstants k;
    auto r = demo_p3(desk1(), FVector::unit(0), 1, k);
    EXPECT_TRUE(r.report.pass) << r.report.line();
    EXPECT_LT(r.dist, Real(1) / 4 + Real(10) / 16);
    // scaling x scales p by the inverse, q and c stay put
    auto r3 = demo_p3(desk1(), FVector::unit(0, Real(3)), 1, k);
    EXPECT_EQ(r3.c, r.c);
    EXPECT_LE(abs(r3.dist - r.dist), tol(200));
    EXPECT_THROW(demo_p3(desk1(), FVector(), 1, k), Error);
}

TEST(Pipeline, BruteForceMatchesOrBeats) {
    VerificationConstants k;
    FVector x;
    x.set(0, Real(1));
    x.set(3, Real(1) / 8);
    auto r = demo_p3(desk1(), x, 1, k);
    ASSERT_TRUE(r.report.pass) << r.report.line();
    Basis b2(build_schedule(inject_net(desk1(), 1, {plan_p3(Basis(build_schedule(desk1())), x, 1, k).q})));
    auto [c, d] = orbit_distance(b2, x, FVector::unit(0), r.c);
    EXPECT_LE(d, r.dist);
    EXPECT_LE(c, r.c);
}

TEST(Pipeline, P2Ordering) {
    VerificationConstants k;
    auto r = demo_p2_ordering(desk1(), FVector::unit(0), FVector::unit(0), 1, k);
    EXPECT_TRUE(r.report.pass) << r.report.line();
    EXPECT_LE(r.dist, Real(10) / 16);
    auto z = demo_p2_ordering(desk1(), FVector::unit(0), FVector(), 1, k);
    EXPECT_TRUE(z.report.pass);
    try {
        demo_p2_ordering(desk1(), FVector::unit(1), FVector::unit(0), 1, k);
        FAIL() << "expected OrderingFails";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::OrderingFails);
    }
}
