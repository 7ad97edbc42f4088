#pragma once

#include "rop/operator.hpp"
#include "rop/report.hpp"

#include <optional>

namespace rop {

// Per-step constants the proofs only call "large enough". Bases are kept
// as log2 values; thresholds are ((a - j + 1)!)^2 towers of them.
struct VerificationConstants {
    Real log2_C = 1;  // coordinate-largeness base (C_n = 2)
    Real log2_A = 1;  // base for the (a_n - 1) search (A_n = 2)
    Real log2_D_ceiling = 64;
    // measured: max over solves of log2(|p| |lead|^{m - i + 1}) and where it happened
    Real log2_D_measured = -1e9;
    std::string D_instance;
};

// -((N!)^2) * base, with N! exact up to a cap. Beyond the cap the tower is
// known to exceed 2^126, far past any representable log2 magnitude.
struct LogThreshold {
    bool huge = false;
    BigInt fac_sq;  // (N!)^2 when !huge
    Real base;
    Real value() const;  // the log2 threshold; -inf when huge
    bool admits(const Real& log2_abs) const;
};
LogThreshold factorial_threshold(Index N, const Real& base);

// Smallest j <= cutoff whose e-coordinate of Q x (Q = Q_{a_n} or Q_{mu_n})
// is at least the tower threshold for (top - j + 1), top = a_n or mu_n.
std::optional<Index> find_large_coordinate(const Basis& b, const FVector& x, int n, const Real& log2_base,
                                           Index cutoff);

// p with p(T_m) x = y in e-coordinates, x and y supported in [i_n, m].
// kmax (if >= 0) stops after that many coefficients past the first one
// y forces; the remainder of the convolution is then left to the caller.
Polynomial solve_fact_f(const FVector& xe, const FVector& ye, Index m, Index i_n, Index kmax = -1);
std::map<Index, Rational> solve_fact_f_exact(const ExactVec& xe, const ExactVec& ye, Index m, Index i_n);
// p(T_m) x by repeated truncated shifts (oracle for the solver)
ExactVec truncated_poly_apply(const std::map<Index, Rational>& p, const ExactVec& xe, Index m);

// Certified checks. Reports are log2-valued where the quantities are tiny.
CertReport check_shift(const Basis& b, Index N_exhaustive, const std::vector<Index>& samples);
CertReport check_boundedness(const Basis& b, Index N, std::vector<CertReport>* parts = nullptr,
                              std::uint64_t seed = 1);
CertReport check_fact_a(const Basis& b);
CertReport check_fact_b(const Basis& b, int n, std::size_t samples = 64, std::uint64_t seed = 1);
CertReport check_tail_bound(const Basis& b, int n, Index N_cut = -1, std::uint64_t seed = 1);
CertReport check_b_damping(const Basis& b, int n, std::uint64_t seed = 1);
CertReport check_prop3(const Basis& b, int n, std::uint64_t seed = 1);
CertReport check_q_norm(const Basis& b, int n, std::uint64_t seed = 1);

// Names accepted by run_checks: shift, boundedness, fact-a, fact-b, tail,
// b-damping, prop3, q-norm.
const std::vector<std::string>& check_names();
// seed feeds the sampled lower bounds
std::vector<CertReport> run_checks(const Basis& b, const std::set<std::string>& names, int steps,
                                   std::uint64_t seed = 1);

// Approximation demo, split in the two co-design phases.
struct P3Plan {
    int n = 0;
    Index j_n = -1;
    Polynomial p;  // p(T_{a_n}) x' = e_{a_n - 1}
    Polynomial q;  // zeta^{b_n+1} p / b_n
    Real lead;
    Real log2_D;   // log2(|p| |lead|^{a_n - j_n})
};
P3Plan plan_p3(const Basis& phase1, const FVector& x, int n, VerificationConstants& k);
// Copy of params with the listed polynomials as the frozen net of step n.
ScheduleParams inject_net(const ScheduleParams& params, int n, const std::vector<Polynomial>& qs);

struct DemoResult {
    Index c = 0;
    Real dist;
    Real bound;
    int k = 0;  // net member used
    CertReport report;
};
DemoResult run_p3(const Basis& phase2, const FVector& x, const P3Plan& plan);
// Both phases: plan on a build of params, inject, rebuild, run.
DemoResult demo_p3(const ScheduleParams& params, const FVector& x, int n, VerificationConstants& k);

// Ordering step: c with |T^c x - T y| small when j_n(x) <= j_n(y).
struct P2Result {
    Index c = 0;
    Real dist;
    Real bound;
    CertReport report;
};
P2Result demo_p2_ordering(const ScheduleParams& params, const FVector& x, const FVector& y, int n,
                          VerificationConstants& k);

// min over 0 <= c <= horizon of |T^c x - target|
std::pair<Index, Real> orbit_distance(const Basis& b, const FVector& x, const FVector& target, Index horizon);

}  // namespace rop
