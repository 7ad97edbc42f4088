#include "rop/fvector.hpp"

#include <sstream>

namespace rop {

FVector FVector::unit(Index j, const Real& v) {
    FVector x;
    x.set(j, v);
    return x;
}

void FVector::set(Index j, const Real& v) {
    if (v == 0)
        c_.erase(j);
    else
        c_[j] = v;
}

void FVector::add(Index j, const Real& v) {
    if (v == 0) return;
    auto [it, fresh] = c_.try_emplace(j, v);
    if (fresh) return;
    it->second += v;
    if (it->second == 0) c_.erase(it);
}

Real FVector::get(Index j) const {
    auto it = c_.find(j);
    return it == c_.end() ? Real(0) : it->second;
}

std::vector<Index> FVector::support() const {
    std::vector<Index> s;
    s.reserve(c_.size());
    for (const auto& [j, v] : c_) s.push_back(j);
    return s;
}

FVector& FVector::operator+=(const FVector& o) {
    for (const auto& [j, v] : o.c_) add(j, v);
    return *this;
}

FVector& FVector::operator-=(const FVector& o) {
    for (const auto& [j, v] : o.c_) add(j, -v);
    return *this;
}

FVector FVector::operator+(const FVector& o) const {
    FVector r = *this;
    r += o;
    return r;
}

FVector FVector::operator-(const FVector& o) const {
    FVector r = *this;
    r -= o;
    return r;
}

FVector FVector::scaled(const Real& s) const {
    FVector r;
    if (s == 0) return r;
    for (const auto& [j, v] : c_) r.c_.emplace_hint(r.c_.end(), j, v * s);
    return r;
}

FVector FVector::shifted(Index by) const {
    FVector r;
    for (const auto& [j, v] : c_) r.c_.emplace_hint(r.c_.end(), j + by, v);
    return r;
}

FVector FVector::restricted(Index lo, Index hi) const {
    FVector r;
    for (auto it = c_.lower_bound(lo); it != c_.end() && it->first <= hi; ++it) r.c_.emplace_hint(r.c_.end(), *it);
    return r;
}

Real FVector::max_abs() const {
    Real m = 0;
    for (const auto& [j, v] : c_)
        if (abs(v) > m) m = abs(v);
    return m;
}

std::string export_fvector(const FVector& x) {
    std::string s;
    for (const auto& [j, v] : x) s += to_string(j) + " " + hex(v) + "\n";
    return s;
}

namespace {

bool parse_line(const std::string& line, Index& j, Real& v) {
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) return false;
    if (a[0] == '#') return false;
    if (!(ls >> b) || (ls >> extra)) throw Error(Errc::ParseError, "expected `index value`, got '" + line + "'");
    j = parse_index(a);
    v = parse_real(b);
    return true;
}

}  // namespace

FVector import_fvector(std::istream& in) {
    FVector x;
    std::string line;
    Index j;
    Real v;
    while (std::getline(in, line))
        if (parse_line(line, j, v)) x.add(j, v);
    return x;
}

std::vector<FVector> parse_vectors(std::istream& in) {
    std::vector<FVector> out;
    FVector cur;
    bool open = false;
    std::string line;
    Index j;
    Real v;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            if (open) out.push_back(std::move(cur));
            cur = FVector();
            open = false;
            continue;
        }
        if (parse_line(line, j, v)) {
            cur.add(j, v);
            open = true;
        }
    }
    if (open) out.push_back(std::move(cur));
    return out;
}

}  // namespace rop
