#pragma once

#include "rop/numeric.hpp"

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace rop {

// Finitely supported coefficient vector, keyed by basis index. The same
// container holds f-coordinates and e-coordinates; callers keep track of
// which one they have.
class FVector {
public:
    using Map = std::map<Index, Real>;

    FVector() = default;
    static FVector unit(Index j, const Real& v = Real(1));

    void set(Index j, const Real& v);
    void add(Index j, const Real& v);
    Real get(Index j) const;

    bool empty() const { return c_.empty(); }
    std::size_t size() const { return c_.size(); }
    Index max_index() const { return c_.empty() ? Index(-1) : c_.rbegin()->first; }
    Index min_index() const { return c_.empty() ? Index(-1) : c_.begin()->first; }
    std::vector<Index> support() const;

    FVector& operator+=(const FVector& o);
    FVector& operator-=(const FVector& o);
    FVector operator+(const FVector& o) const;
    FVector operator-(const FVector& o) const;
    FVector scaled(const Real& s) const;
    FVector shifted(Index by) const;
    // keep indices in [lo, hi]
    FVector restricted(Index lo, Index hi) const;

    Real max_abs() const;

    const Map& coeffs() const { return c_; }
    Map::const_iterator begin() const { return c_.begin(); }
    Map::const_iterator end() const { return c_.end(); }

    bool operator==(const FVector& o) const { return c_ == o.c_; }

private:
    Map c_;
};

// `index value` lines, values in hex-float.
std::string export_fvector(const FVector& x);
FVector import_fvector(std::istream& in);

// Blocks of `index value` lines separated by blank lines; values may be
// decimal, hex-float or num/den.
std::vector<FVector> parse_vectors(std::istream& in);

}  // namespace rop
