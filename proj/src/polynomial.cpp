#include "rop/polynomial.hpp"

#include <sstream>

namespace rop {

Polynomial Polynomial::monomial(Index degree, const Real& coeff) {
    Polynomial p;
    p.set(degree, coeff);
    return p;
}

Polynomial Polynomial::from_dense(const std::vector<Real>& coeffs) {
    Polynomial p;
    for (std::size_t k = 0; k < coeffs.size(); ++k) p.set(static_cast<Index>(k), coeffs[k]);
    return p;
}

void Polynomial::set(Index degree, const Real& coeff) {
    if (degree < 0) throw Error(Errc::InvalidParams, "negative degree");
    if (coeff == 0)
        c_.erase(degree);
    else
        c_[degree] = coeff;
}

void Polynomial::add(Index degree, const Real& coeff) {
    auto it = c_.find(degree);
    if (it == c_.end()) {
        set(degree, coeff);
        return;
    }
    it->second += coeff;
    if (it->second == 0) c_.erase(it);
}

Real Polynomial::coeff(Index degree) const {
    auto it = c_.find(degree);
    return it == c_.end() ? Real(0) : it->second;
}

Index Polynomial::degree() const { return c_.empty() ? Index(-1) : c_.rbegin()->first; }
Index Polynomial::low_degree() const { return c_.empty() ? Index(-1) : c_.begin()->first; }

Real Polynomial::modulus() const {
    Real s = 0;
    for (const auto& [k, v] : c_) s += abs(v);
    return s;
}

Polynomial Polynomial::shifted(Index by) const {
    Polynomial p;
    for (const auto& [k, v] : c_) p.c_.emplace_hint(p.c_.end(), k + by, v);
    return p;
}

Polynomial Polynomial::scaled(const Real& s) const {
    Polynomial p;
    if (s == 0) return p;
    for (const auto& [k, v] : c_) p.c_.emplace_hint(p.c_.end(), k, v * s);
    return p;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    Polynomial p = *this;
    for (const auto& [k, v] : o.c_) p.add(k, -v);
    return p;
}

std::string Polynomial::serialize() const {
    std::string s;
    for (const auto& [k, v] : c_) {
        if (!s.empty()) s += ' ';
        s += to_string(k) + ":" + hex(v);
    }
    return s;
}

Polynomial Polynomial::parse(std::string_view text) {
    // Accepts "deg:value" tokens or a plain comma list of coefficients a0,a1,...
    Polynomial p;
    std::string t(text);
    if (t.find(':') == std::string::npos) {
        std::stringstream ss(t);
        std::string tok;
        Index k = 0;
        while (std::getline(ss, tok, ',')) {
            if (tok.find_first_not_of(" \t") == std::string::npos) throw Error(Errc::ParseError, "empty coefficient");
            p.set(k++, parse_real(tok));
        }
        return p;
    }
    std::stringstream ss(t);
    std::string tok;
    while (ss >> tok) {
        auto colon = tok.find(':');
        if (colon == std::string::npos) throw Error(Errc::ParseError, "expected deg:value in '" + tok + "'");
        p.add(parse_index(tok.substr(0, colon)), parse_real(tok.substr(colon + 1)));
    }
    return p;
}

}  // namespace rop
