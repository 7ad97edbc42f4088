#pragma once

#include "rop/operator.hpp"
#include "rop/report.hpp"

#include <limits>

namespace rop {

// T = BA through l_p on the truncation F_N, for 1 < p < inf.
// A: f_j -> g_j (j not in J~) or |u_j|^{1/p} g_j; B: g_j -> w_j f_{j+1} or
// |u_j|^{-1/p} u_j. The l_p copy is indexed by j itself.
struct Factorization {
    Index N = 0;
    Real p;
    std::set<Index> Jtilde;
    std::map<Index, Real> unorm;    // |u_j| for j in J~
    std::map<Index, Real> weights;  // w_j for j not in J~
    std::map<Index, FVector> u;     // u_j = T f_j for j in J~
    SparseOperator A;               // columns j <= N+1, g-coordinates
    SparseOperator B;               // columns j <= N, f-coordinates
    Real eq5_partial;               // sum over J~ of (1 + |f_j*|^p) |u_j|^{min(1/p, 1/q)}
    // only J~ columns and the weights of rows their images reach
    bool kernel_only = false;
};

// Eq5Exceeded when eq5_partial > budget. kernel_only skips the shift
// columns, which is all the kernel check needs.
Factorization build_factorization(const Basis& b, Index N,
                                  const Real& eq5_budget = std::numeric_limits<Real>::infinity(),
                                  bool kernel_only = false);

// |BA f_j - T f_j| <= 2^-190 max(1, |T f_j|) for every column
CertReport check_BA(const Basis& b, const Factorization& fz);

struct T0Split {
    SparseOperator T0;  // AB on l_p, columns j <= N
    SparseOperator S2;  // g_j -> g_{j+1} when j, j+1 not in J~
    SparseOperator K2;  // T0 - S2
};
T0Split split_T0(const Factorization& fz);
// every column of S2 is a single unit entry and no two share a row
CertReport check_S2_contraction(const T0Split& sp);
// |T0 - S2 - K2| per column, and max(2, |A|) sum_{J~} |u_j|^{min(1/p,1/q)}
CertReport check_K2(const Factorization& fz, const T0Split& sp);

// Lay-off columns next to a (c)-fan differ from lower columns only at
// relative size gamma, so separating them needs about -log2(gamma) bits.
unsigned factorization_precision_bits(const Schedule& s, Index N);

struct KernelResult {
    std::vector<FVector> kernel;  // basis of ker B (g-coordinates)
    std::set<Index> allowed;      // {0} and {a_n - 1, a_n}
    bool localized = true;
    CertReport report;
};
// Elimination on the rows not owned by a shift column; stray support
// counts when it carries more than 2^-100 of a kernel vector's 2-norm.
KernelResult check_kernel_localization(const Basis& b, const Factorization& fz);

// Per-step nuclear-weight contributions over J~ cap intervals per step at most.
struct Eq5Census {
    std::vector<Real> per_step;
    std::vector<std::size_t> counted, total;
};
Eq5Census eq5_census(const Basis& b, int steps, std::size_t cap = 4096);
// partial sum below budget and each step at most a quarter of the one before
CertReport check_eq5(const Eq5Census& c, const Real& budget);

}  // namespace rop
