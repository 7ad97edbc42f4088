#include "rop/numeric.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace rop {

namespace {
unsigned g_bits = 0;
}

const char* errc_name(Errc c) {
    switch (c) {
        case Errc::InvalidParams: return "InvalidParams";
        case Errc::GrowthOverflow: return "GrowthOverflow";
        case Errc::OutOfHorizon: return "OutOfHorizon";
        case Errc::NotInDomain: return "NotInDomain";
        case Errc::NotLayOff: return "NotLayOff";
        case Errc::NetNotFixed: return "NetNotFixed";
        case Errc::NetTooLarge: return "NetTooLarge";
        case Errc::DomainExceeded: return "DomainExceeded";
        case Errc::HorizonExceeded: return "HorizonExceeded";
        case Errc::StepNotBuilt: return "StepNotBuilt";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::ZeroLeading: return "ZeroLeading";
        case Errc::NoLargeCoordinate: return "NoLargeCoordinate";
        case Errc::NetMiss: return "NetMiss";
        case Errc::OrderingFails: return "OrderingFails";
        case Errc::Eq5Exceeded: return "Eq5Exceeded";
        case Errc::ParseError: return "ParseError";
        case Errc::Overflow: return "Overflow";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void set_precision_bits(unsigned bits) {
    if (bits < 64) bits = 64;
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
    // boost takes decimal digits; round up so the binary precision is at least `bits`
    unsigned d10 = static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
    Real::default_precision(d10);
    g_bits = bits;
}

unsigned precision_bits() {
    if (g_bits == 0) set_precision_bits(256);
    return g_bits;
}

namespace {
const unsigned g_default_bits = precision_bits();
}  // namespace

std::string to_string(Index v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

Index parse_index(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        neg = s[i] == '-';
        ++i;
    }
    if (i >= s.size()) throw Error(Errc::ParseError, "empty integer");
    // allow 2^k shorthand
    if (s.substr(i, 2) == "2^") {
        Index e = parse_index(s.substr(i + 2));
        if (e < 0 || e > 126) throw Error(Errc::ParseError, "exponent out of range");
        Index v = Index(1) << static_cast<int>(e);
        return neg ? -v : v;
    }
    Index v = 0;
    const Index lim = (~static_cast<unsigned __int128>(0) >> 1) / 10;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) break;
        if (c < '0' || c > '9') throw Error(Errc::ParseError, "bad integer '" + std::string(s) + "'");
        if (v > lim) throw Error(Errc::ParseError, "integer too large");
        v = v * 10 + (c - '0');
    }
    return neg ? -v : v;
}

BigInt to_bigint(Index v) { return BigInt(to_string(v)); }

Index index_from_bigint(const BigInt& v) {
    if (boost::multiprecision::msb(boost::multiprecision::abs(v) + 1) >= 126)
        throw Error(Errc::Overflow, "integer exceeds the index range");
    return parse_index(v.str());
}

Real to_real(Index v) {
    bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    std::uint64_t hi = static_cast<std::uint64_t>(u >> 64);
    std::uint64_t lo = static_cast<std::uint64_t>(u);
    Real r = Real(hi);
    r = ldexp(r, 64) + Real(lo);
    return neg ? Real(-r) : r;
}

Real to_real(const Rational& q) {
    Real n(boost::multiprecision::numerator(q));
    Real d(boost::multiprecision::denominator(q));
    return n / d;
}

Real to_real(const BigInt& z) { return Real(z); }

Rational to_rational(const Real& x) {
    if (x == 0) return 0;
    BigInt m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.backend().data(), x.backend().data());
    Rational q(m);
    if (e >= 0) return q * Rational(BigInt(1) << static_cast<unsigned>(e));
    return q / Rational(BigInt(1) << static_cast<unsigned>(-e));
}

Real exp2r(const Real& x) {
    Real r;
    mpfr_exp2(r.backend().data(), x.backend().data(), MPFR_RNDN);
    if (mpfr_inf_p(r.backend().data())) throw Error(Errc::Overflow, "2^x outside the exponent range");
    return r;
}

Real log2abs(const Real& x) {
    Real a = abs(x);
    Real r;
    mpfr_log2(r.backend().data(), a.backend().data(), MPFR_RNDN);
    return r;
}

std::string hex(const Real& x) {
    if (x == 0) return "0x0p+0";
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%Ra", x.backend().data());
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

Real parse_real(std::string_view s) {
    std::string t(s);
    auto slash = t.find('/');
    if (slash != std::string::npos) return to_real(parse_rational(t));
    Real r;
    char* end = nullptr;
    if (mpfr_strtofr(r.backend().data(), t.c_str(), &end, 0, MPFR_RNDN), end == t.c_str())
        throw Error(Errc::ParseError, "bad number '" + t + "'");
    while (*end && std::isspace(static_cast<unsigned char>(*end))) ++end;
    if (*end) throw Error(Errc::ParseError, "trailing characters in '" + t + "'");
    return r;
}

Rational parse_rational(std::string_view s) {
    std::string t(s);
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
    if (t.empty()) throw Error(Errc::ParseError, "empty rational");
    try {
        auto slash = t.find('/');
        if (slash == std::string::npos) {
            auto dot = t.find('.');
            if (dot == std::string::npos) return Rational(BigInt(t));
            std::string digits = t.substr(0, dot) + t.substr(dot + 1);
            BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(t.size() - dot - 1));
            return Rational(BigInt(digits), den);
        }
        BigInt den(t.substr(slash + 1));
        if (den == 0) throw Error(Errc::ParseError, "zero denominator");
        return Rational(BigInt(t.substr(0, slash)), den);
    } catch (const std::runtime_error& e) {
        if (dynamic_cast<const Error*>(&e)) throw;
        throw Error(Errc::ParseError, "bad rational '" + t + "'");
    }
}

std::string to_string(const Rational& q) {
    if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

std::string dec(const Real& x, int digits) {
    char* buf = nullptr;
    std::string fmt = "%." + std::to_string(digits) + "Rg";
    mpfr_asprintf(&buf, fmt.c_str(), x.backend().data());
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

Index ceil_div(Index a, Index b) { return (a + b - 1) / b; }

Index isqrt_floor(Index v) {
    if (v < 2) return v;
    Index x = static_cast<Index>(std::sqrt(static_cast<long double>(v)));
    while (x * x > v) --x;
    while ((x + 1) * (x + 1) <= v) ++x;
    return x;
}

}  // namespace rop
