#include "rop/basis.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace rop;

namespace {

const Basis& desk() {
    static Basis b(build_schedule(ScheduleParams::desk()));
    return b;
}

Real tol200() { return exp2r(Real(-200)); }

}  // namespace

TEST(FIdentity, DeskExamples) {
    EXPECT_EQ(desk().f_identity(0), (FIdentity{FIdentity::G, 0, 0}));
    EXPECT_EQ(desk().f_identity(16), (FIdentity{FIdentity::Z, 1, 0}));
    EXPECT_EQ(desk().f_identity(17), (FIdentity{FIdentity::G, 16, 0}));
    // step 2: J_2 = {a_2}, kappa_2 = 2
    EXPECT_EQ(desk().f_identity(desk().schedule().a(2)), (FIdentity{FIdentity::Z, 2, 0}));
    EXPECT_THROW(desk().f_identity(desk().horizon() + 1), Error);
}

TEST(FIdentity, InjectiveOnStepOne) {
    std::set<std::tuple<int, long long, long long>> seen;
    for (Index j = 0; j <= desk().schedule().xi(2); ++j) {
        FIdentity id = desk().f_identity(j);
        ASSERT_TRUE(seen.insert({id.kind, (long long)id.i, (long long)id.d}).second);
    }
}

TEST(Lambda, FormulaValues) {
    Real s15 = sqrt(Real(15));
    EXPECT_LE(abs(desk().log2_lambda(1) - Real(7.5) / s15), tol200());
    EXPECT_LE(abs(desk().log2_lambda(15) - Real(-6.5) / s15), tol200());
    for (Index j = 1; j < 15; ++j)
        EXPECT_LE(abs(desk().log2_lambda(j) - desk().log2_lambda(j + 1) - 1 / s15), tol200());
    // modified lay-off [a+1, b] uses b as length and a as base
    Real s256 = 16;
    EXPECT_LE(abs(desk().log2_lambda(17) - (Real(128) + 16 + 1 - 17) / s256), tol200());
    EXPECT_THROW(desk().log2_lambda(16), Error);
    EXPECT_THROW(desk().log2_lambda(257), Error);
}

TEST(Expansion, DeskExamples) {
    auto ea = desk().e_to_f_exact({{16, 1}});
    ASSERT_TRUE(ea);
    EXPECT_EQ(*ea, (ExactVec{{0, 1}, {16, Rational(1, 4)}}));

    FVector e257 = desk().e_in_f(257);
    EXPECT_EQ(e257.size(), 2u);
    EXPECT_EQ(e257.get(257), 1);
    Real lam1 = exp2r(Real(7.5) / sqrt(Real(15)));
    EXPECT_LE(abs(e257.get(1) - 256 / lam1), tol200());

    EXPECT_EQ(desk().e_in_f(0), FVector::unit(0));
    // lay-off indices lose exactness
    EXPECT_FALSE(desk().e_to_f_exact({{1, 1}}));
}

TEST(Expansion, TriangularRoundTrip) {
    const Basis& b = desk();
    for (Index j : {Index(0), Index(1), Index(15), Index(16), Index(17), Index(256), Index(257), Index(300),
                    Index(4112), Index(4113), Index(16448), Index(16448 + 4112), Index(20000), Index(131584)}) {
        FVector ef = b.e_in_f(j);
        ASSERT_EQ(ef.max_index(), j);
        ASSERT_NE(ef.get(j), 0);
        FVector back = b.f_to_e(ef);
        FVector diff = back - FVector::unit(j);
        ASSERT_LE(diff.max_abs(), tol200() * b.norm(ef)) << to_string(j);
    }
}

TEST(Norm, DeskExamples) {
    const Basis& b = desk();
    EXPECT_EQ(b.norm(FVector::unit(0)), 1);
    EXPECT_EQ(b.norm(b.e_in_f(16)), Real(5) / 4);
    for (int n = 1; n <= 2; ++n) {
        Index a = b.schedule().a(n);
        EXPECT_EQ(b.norm(b.e_in_f(a) - b.e_in_f(0)), Real(1) / 4);
    }
    // two Z coordinates under the sup norm, one G coordinate
    FVector x;
    x.set(16, 3);
    x.set(b.schedule().a(2), -5);
    x.set(2, 1);
    EXPECT_EQ(b.norm(x), 6);
    EXPECT_EQ(b.dual_norm(3), 1);
    EXPECT_EQ(b.dual_norm(16), 1);
    EXPECT_EQ(b.dual_norm(0), 1);
}

TEST(Norm, MultiCopyIsPSum) {
    ScheduleParams p = ScheduleParams::desk_multi_copy();
    p.budget_log2 = 100;
    p.p = 2;
    Basis b(build_schedule_multi(p));
    const auto& s = b.schedule();
    // J_{2,1} = [a_2, a_2 + xi_2] lies in copies d_2 .. d_2 + xi_2
    Index a2 = s.a(2);
    FIdentity id = b.f_identity(a2 + 3);
    EXPECT_EQ(id.kind, FIdentity::ZCopy);
    EXPECT_EQ(id.i, 1);
    EXPECT_EQ(id.d, s.d[2] + 3);
    // same copy d, two coordinates: sup; different copies: 2-sum
    FVector x;
    x.set(a2 + 1, 3);  // z_1^{(d_2+1)}
    x.set(5, 4);       // g
    EXPECT_LE(abs(b.norm(x) - 5), tol200());
}

TEST(MultiCopyIdentity, Exact) {
    ScheduleParams p = ScheduleParams::desk_multi_copy();
    p.budget_log2 = 100;
    p.n_max = 2;
    Basis b(build_schedule_multi(p));
    const auto& s = b.schedule();
    for (int n = 1; n <= 2; ++n)
        for (int N = 0; N < n; ++N) {
            Index j = (n - N) * s.a(n);
            auto ex = b.e_to_f_exact({{j, 1}});
            ASSERT_TRUE(ex);
            // (1/a_N) sum_{k=1}^{n-N} alpha_k z_k^{(d_{N+1})} + e_0, alpha = 1, a_0 = 1
            ExactVec want{{0, 1}};
            for (int k = 1; k <= n - N; ++k) {
                // z_k^{(d)} = f_{k a_{m+k-1} + d - d_m} with d_m <= d < d_{m+1}; here d = d_{N+1}, m = N+1
                Index idx = k * s.a(N + k) + s.d[N + 1] - s.d[N + 1];
                want[idx] = Rational(1) / Rational(to_bigint(s.a(N)));
            }
            EXPECT_EQ(*ex, want) << n << " " << N;
        }
}

TEST(FVectorIO, RoundTrip) {
    FVector x;
    x.set(0, Real(1) / 3);
    x.set(Index(1) << 40, -exp2r(Real(-5000)));
    std::istringstream in(export_fvector(x));
    EXPECT_EQ(import_fvector(in), x);
    std::istringstream v("0 1\n\n5 1/2\n7 0x1p-3\n\n");
    auto vs = parse_vectors(v);
    ASSERT_EQ(vs.size(), 2u);
    EXPECT_EQ(vs[1].get(7), Real(1) / 8);
    std::istringstream bad("0 1 2\n");
    EXPECT_THROW(parse_vectors(bad), Error);
}
