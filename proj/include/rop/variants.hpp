#pragma once

#include "rop/verify.hpp"

#include <memory>

namespace rop {

// ---- multi-copy build ---------------------------------------------------

// d[m] for m = 1..n_max+1 and, per copy, the (a)-indices living in it.
struct CopyLayout {
    std::vector<Index> d;
    std::map<Index, std::vector<std::pair<Index, Index>>> members;  // copy -> (j, coordinate)
};
// members are listed for intervals with at most `per_interval` indices
CopyLayout copy_layout(const Basis& b, Index per_interval = 4096);

Schedule build_multi_copy(ScheduleParams params);

// e_{(n-N) a_n} = (1/a_N) sum alpha_k z_k^{(d_{N+1})} + e_0, exactly
CertReport check_fact1bis(const Basis& b);

// some n in [N+2, n_max] has a large coordinate below (n-N) a_n
CertReport check_prop6bis(const Basis& b, const FVector& x, int N, const VerificationConstants& k);

struct HypercyclicResult {
    int n = 0;
    Index j_n = -1;
    Index c = 0;
    Index window = 0;  // coefficients kept past the forced one
    Real dist;         // |T^c x - e_0|
    Real bound;        // 1/a_N + 7/a_n
    CertReport report;
};
// Both co-design phases at step n on the multi-copy build.
HypercyclicResult demo_hypercyclic(const ScheduleParams& params, const FVector& x, int N, int n,
                                   VerificationConstants& k);

// ---- Hilbert instance ---------------------------------------------------

struct Enclosure {
    Real lo, hi;
    bool contains(const Real& v) const { return lo <= v && v <= hi; }
    Real width() const { return hi - lo; }
};

// sum_{j > J} 1/j^2, Euler-Maclaurin with the remainder trapped between
// two consecutive truncations
Enclosure basel_tail(Index J);
// |u_0| = (sqrt(3) eps / pi) (sum_j 1/j^2)^{1/2}, partial sum to J plus the tail
Enclosure u0_norm_enclosure(const Rational& epsilon, Index J = Index(1) << 16);

struct HilbertInstance {
    Rational epsilon;
    std::shared_ptr<Basis> basis;
    // x_0 = e_0 + u_0 restricted to the built steps, in f-coordinates
    FVector x0_truncated() const;
};
HilbertInstance build_hilbert(const Rational& epsilon, int n_max = 2);

// u_0 enclosure, |e_{a_n} - x_0|^2 against the closed form, |T x_0| tail
std::vector<CertReport> check_hilbert(const HilbertInstance& h);

// large coordinate below a_n at some built n, or x colinear to x_0
CertReport check_propnewC(const HilbertInstance& h, const FVector& x, const VerificationConstants& k);

}  // namespace rop
