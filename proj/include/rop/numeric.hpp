#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rop {

// Indices in the later steps of the multi-copy build pass 2^64, so the
// index type is 128 bits wide. The default build budget still keeps them
// below 2^48.
using Index = __int128;

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

enum class Errc {
    InvalidParams,
    GrowthOverflow,
    OutOfHorizon,
    NotInDomain,
    NotLayOff,
    NetNotFixed,
    NetTooLarge,
    DomainExceeded,
    HorizonExceeded,
    StepNotBuilt,
    BudgetExceeded,
    ZeroLeading,
    NoLargeCoordinate,
    NetMiss,
    OrderingFails,
    Eq5Exceeded,
    ParseError,
    Overflow,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);
    Errc code() const { return code_; }

private:
    Errc code_;
};

// Working precision in bits for every Real created afterwards. Also opens
// the MPFR exponent range to its maximum, since weights like 2^{sqrt(b)/2}
// leave the default range quickly.
void set_precision_bits(unsigned bits);
unsigned precision_bits();

std::string to_string(Index v);
Index parse_index(std::string_view s);
Index index_from_bigint(const BigInt& v);
BigInt to_bigint(Index v);

Real to_real(Index v);
Real to_real(const Rational& q);
Real to_real(const BigInt& z);
// Exact dyadic value of a finite Real.
Rational to_rational(const Real& x);

// 2^x; underflow yields 0, overflow throws Errc::Overflow.
Real exp2r(const Real& x);
inline Real rmax(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real rmin(const Real& a, const Real& b) { return b < a ? b : a; }

// log2|x|, -inf for 0.
Real log2abs(const Real& x);

// Hex-float text (C99 %a style) for bit-exact round trips.
std::string hex(const Real& x);
Real parse_real(std::string_view s);
Rational parse_rational(std::string_view s);
std::string to_string(const Rational& q);

// Short decimal rendering for reports.
std::string dec(const Real& x, int digits = 12);

Index ceil_div(Index a, Index b);
Index isqrt_floor(Index v);

struct IndexHash {
    std::size_t operator()(Index v) const noexcept {
        auto u = static_cast<unsigned __int128>(v);
        std::uint64_t lo = static_cast<std::uint64_t>(u);
        std::uint64_t hi = static_cast<std::uint64_t>(u >> 64);
        return std::hash<std::uint64_t>{}(lo ^ (hi * 0x9e3779b97f4a7c15ULL));
    }
};

}  // namespace rop
