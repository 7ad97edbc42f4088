#pragma once

#include "rop/fvector.hpp"
#include "rop/schedule.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>

namespace rop {

// Where f_j lives in l_p (+) Z.
struct FIdentity {
    enum Kind { G, Z, ZCopy } kind = G;
    Index i = 0;  // G: sigma(j); Z: kappa index; ZCopy: coordinate r
    Index d = 0;  // ZCopy: copy number
    bool operator==(const FIdentity& o) const { return kind == o.kind && i == o.i && d == o.d; }
};

// f_j = c_j (e_j - sum_m R_m e_m), all m < j.
struct Relation {
    Kind kind = Kind::Root;
    Real c = 1;
    std::vector<std::pair<Index, Real>> R;
    // exact copy when no lay-off or (c)-weight enters
    bool exact = false;
    Rational cq = 1;
    std::vector<std::pair<Index, Rational>> Rq;
};

using ExactVec = std::map<Index, Rational>;

class Basis {
public:
    explicit Basis(Schedule s, std::size_t cache_cap = 1u << 20);

    const Schedule& schedule() const { return s_; }
    Index horizon() const { return s_.horizon; }

    std::shared_ptr<const Relation> relation(Index j) const;

    // log2 lambda_j on lay-off indices, NotLayOff elsewhere.
    Real log2_lambda(Index j) const;

    FIdentity f_identity(Index j) const;
    // (n, r) of the (a)-interval containing j, r = 0 for the single-copy build
    std::optional<std::pair<int, Index>> a_interval(Index j) const;

    // e-coordinates -> f-coordinates. The largest pending e-index is
    // expanded first so that equal indices merge before expansion.
    FVector e_to_f(const FVector& e) const;
    FVector f_to_e(const FVector& f) const;
    FVector e_in_f(Index j) const { return e_to_f(FVector::unit(j)); }

    // Rational versions; nullopt as soon as an inexact relation is needed.
    std::optional<ExactVec> e_to_f_exact(const ExactVec& e) const;
    std::optional<ExactVec> f_to_e_exact(const ExactVec& f) const;

    // Mixed norm of f-coordinates.
    Real norm(const FVector& x) const;
    Real dual_norm(Index j) const;

private:
    Relation make_relation(Index j) const;

    Schedule s_;
    std::size_t cap_;
    mutable std::mutex mu_;
    mutable std::unordered_map<Index, std::shared_ptr<const Relation>, IndexHash> cache_;
};

ExactVec to_exact(const FVector& x);
FVector from_exact(const ExactVec& x);

}  // namespace rop
