#pragma once

#include "rop/numeric.hpp"

#include <map>
#include <vector>

namespace rop {

// Sparse polynomial in the shift variable. Degrees can be astronomically
// large (powers like T^{c}), so coefficients are keyed by degree.
class Polynomial {
public:
    Polynomial() = default;
    static Polynomial monomial(Index degree, const Real& coeff = Real(1));
    static Polynomial from_dense(const std::vector<Real>& coeffs);

    void set(Index degree, const Real& coeff);
    void add(Index degree, const Real& coeff);
    Real coeff(Index degree) const;

    // Largest degree with a nonzero coefficient, -1 for the zero polynomial.
    Index degree() const;
    Index low_degree() const;
    bool is_zero() const { return c_.empty(); }
    std::size_t terms() const { return c_.size(); }

    // |p| = sum |a_k|
    Real modulus() const;

    Polynomial shifted(Index by) const;  // multiply by zeta^by
    Polynomial scaled(const Real& s) const;
    Polynomial operator-(const Polynomial& o) const;

    const std::map<Index, Real>& coeffs() const { return c_; }

    // "deg:value" pairs separated by spaces, values in hex-float
    std::string serialize() const;
    static Polynomial parse(std::string_view text);

    bool operator==(const Polynomial& o) const { return c_ == o.c_; }

private:
    std::map<Index, Real> c_;
};

}  // namespace rop
