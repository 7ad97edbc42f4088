#pragma once

#include "rop/basis.hpp"

#include <cstdint>
#include <set>

namespace rop {

// Column map j -> image of f_j, in f-coordinates.
struct SparseOperator {
    std::map<Index, FVector> columns;
    Index dom_max = -1;
    Index codom_max = -1;

    void set_column(Index j, FVector col);
    FVector column(Index j) const;
    // DomainExceeded if x has support beyond dom_max
    FVector apply(const FVector& x) const;
    std::size_t nnz() const;
};

// T f_j: expand f_j in e-coordinates, shift by one, expand back.
FVector column_Tf(const Basis& b, Index j);
SparseOperator assemble(const Basis& b, Index N);

// E2F(sum_t w_t * shift_{k_t}(F2E(x))). Every operator that is a polynomial
// in T goes through here, so differences cancel in e-space.
FVector e_shift_combo(const Basis& b, const FVector& x, const std::vector<std::pair<Index, Real>>& terms);
FVector apply_T(const Basis& b, const FVector& x);
FVector power_apply(const Basis& b, Index c, const FVector& x);
FVector apply_poly(const Basis& b, const Polynomial& p, const FVector& x);

enum class QKind { Nu, A, Mu };

// Q_{nu_n}, Q_{a_n} (single copy) or Q_{mu_n} (multi-copy) applied to x.
FVector apply_Q(const Basis& b, QKind which, int n, const FVector& x);
SparseOperator projection_Q(const Basis& b, QKind which, int n, Index N);
// pi_{[lo,hi]} on F_N
SparseOperator projection_pi(Index lo, Index hi, Index N);

struct SKDecomposition {
    std::map<Index, Real> weights;    // w_j, j not in Jtilde
    std::map<Index, FVector> nuclear; // u_j = T f_j, j in Jtilde
    std::set<Index> Jtilde;
    Real nuclear_bound = 0;           // sum over Jtilde of (1 + |f_j*|) |u_j|
    Real max_weight = 0, min_weight = 0;
};

bool in_jtilde(const Schedule& s, Index j);
// BudgetExceeded when enforce is set and nuclear_bound >= rho.
SKDecomposition sk_split(const Basis& b, Index N, bool enforce = true);

// Targeted: the step's frozen list. Grid: the lattice net at (eps_n, l_n),
// which throws NetTooLarge unless (l_n+1) log2(4/eps_n) fits the budget.
std::vector<Polynomial> polynomial_net(const Schedule& s, int n, NetMode mode);

struct NormBound {
    Real upper = 0;
    Real lower = 0;
    std::string method;
};
NormBound operator_norm_bound(const Basis& b, const SparseOperator& op, std::uint64_t seed = 1);

// `row col hexfloat`, sorted by (col, row)
std::string export_triplets(const SparseOperator& op);

}  // namespace rop
