#include "rop/config.hpp"

#include <boost/algorithm/string.hpp>

#include <fstream>
#include <sstream>

namespace rop {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    boost::split(out, s, [sep](char c) { return c == sep; });
    for (auto& t : out) boost::trim(t);
    if (out.size() == 1 && out[0].empty()) out.clear();
    return out;
}

int parse_int(const std::string& key, const std::string& v) {
    const Index x = parse_index(v);
    if (x < -(Index(1) << 30) || x > (Index(1) << 30)) throw Error(Errc::ParseError, key + ": out of range");
    return static_cast<int>(x);
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    for (const auto& t : split(v, ',')) out.push_back(parse_int(key, t));
    if (out.empty()) throw Error(Errc::ParseError, key + ": empty list");
    return out;
}

std::vector<Polynomial> parse_poly_list(const std::string& v) {
    std::vector<Polynomial> out;
    for (const auto& t : split(v, ';')) {
        if (t.empty()) throw Error(Errc::ParseError, "empty polynomial in list");
        out.push_back(Polynomial::parse(t));
    }
    return out;
}

std::string poly_list(const std::vector<Polynomial>& ps) {
    std::string s;
    for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? " ; " : "") + ps[i].serialize();
    return s;
}

template <class T>
std::string join(const T& xs) {
    std::string s;
    bool first = true;
    for (const auto& x : xs) {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Rational>)
            s += (first ? "" : ",") + to_string(x);
        else
            s += (first ? "" : ",") + std::to_string(x);
        first = false;
    }
    return s;
}

template <class E>
E pick(const std::string& key, const std::string& v, std::initializer_list<std::pair<const char*, E>> opts) {
    for (const auto& [name, e] : opts)
        if (v == name) return e;
    throw Error(Errc::ParseError, key + ": unknown value '" + v + "'");
}

void apply(ScheduleParams& p, const std::string& key, const std::string& v) {
    if (key == "variant")
        p.variant = pick<Variant>(key, v, {{"th2", Variant::Th2}, {"th1", Variant::Th1}});
    else if (key == "space")
        p.space = pick<SpaceKind>(key, v, {{"lp", SpaceKind::Lp}, {"c0", SpaceKind::C0}});
    else if (key == "p")
        p.p = parse_rational(v);
    else if (key == "z")
        p.z = pick<ZKind>(key, v, {{"c0", ZKind::C0Canonical}, {"l2", ZKind::L2SecondCopy}});
    else if (key == "epsilon")
        p.epsilon = parse_rational(v);
    else if (key == "alpha_kind")
        p.alpha_kind =
            pick<AlphaKind>(key, v, {{"constant", AlphaKind::Constant}, {"hilbert", AlphaKind::HilbertHarmonic}});
    else if (key == "alpha")
        p.alpha = parse_rational(v);
    else if (key == "kappa_step")
        p.kappa_step = parse_index(v);
    else if (key == "n_max")
        p.n_max = parse_int(key, v);
    else if (key == "floors") {
        auto f = split(v, ',');
        if (f.size() != p.floors.size()) throw Error(Errc::ParseError, "floors: expected 5 values");
        for (std::size_t i = 0; i < f.size(); ++i) p.floors[i] = parse_rational(f[i]);
    } else if (key == "net_mode")
        p.net_mode = pick<NetMode>(key, v, {{"grid", NetMode::Grid}, {"targeted", NetMode::Targeted}});
    else if (key == "grid_eps")
        p.grid_eps = parse_rational(v);
    else if (key == "grid_degree")
        p.grid_degree = parse_int(key, v);
    else if (key == "net_budget_log2")
        p.net_budget_log2 = parse_int(key, v);
    else if (key == "net")
        p.net = parse_poly_list(v);
    else if (key.rfind("step_net.", 0) == 0)
        p.step_net[parse_int(key, key.substr(9))] = parse_poly_list(v);
    else if (key == "h_rule")
        p.h_rule = parse_int_list(key, v);
    else if (key == "k_rule")
        p.k_rule = parse_int_list(key, v);
    else if (key == "rho")
        p.rho = parse_rational(v);
    else if (key == "budget_log2")
        p.budget_log2 = parse_int(key, v);
    else
        throw Error(Errc::ParseError, "unknown key '" + key + "'");
}

}  // namespace

ScheduleParams parse_schedule_config(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line, base = "th2";
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        boost::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": no '='");
        std::string k = boost::trim_copy(line.substr(0, eq)), v = boost::trim_copy(line.substr(eq + 1));
        if (k.empty()) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": empty key");
        if (k == "base")
            base = v;
        else
            kv.emplace_back(k, v);
    }
    ScheduleParams p = base == "th2"       ? ScheduleParams::desk()
                       : base == "th1"     ? ScheduleParams::desk_multi_copy()
                       : base == "hilbert" ? ScheduleParams::hilbert(Rational(1, 2))
                                           : throw Error(Errc::ParseError, "base: unknown value '" + base + "'");
    for (const auto& [k, v] : kv) {
        try {
            apply(p, k, v);
        } catch (const Error& e) {
            if (e.code() == Errc::ParseError) throw;
            throw Error(Errc::ParseError, k + ": " + e.what());
        }
    }
    return p;
}

ScheduleParams load_schedule_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Errc::ParseError, "cannot read " + path);
    return parse_schedule_config(f);
}

std::string format_schedule_config(const ScheduleParams& p) {
    std::ostringstream o;
    o << "variant = " << (p.variant == Variant::Th1 ? "th1" : "th2") << "\n";
    o << "space = " << (p.space == SpaceKind::C0 ? "c0" : "lp") << "\n";
    o << "p = " << to_string(p.p) << "\n";
    o << "z = " << (p.z == ZKind::L2SecondCopy ? "l2" : "c0") << "\n";
    o << "epsilon = " << to_string(p.epsilon) << "\n";
    o << "alpha_kind = " << (p.alpha_kind == AlphaKind::HilbertHarmonic ? "hilbert" : "constant") << "\n";
    o << "alpha = " << to_string(p.alpha) << "\n";
    o << "kappa_step = " << to_string(p.kappa_step) << "\n";
    o << "n_max = " << p.n_max << "\n";
    o << "floors = " << join(p.floors) << "\n";
    o << "net_mode = " << (p.net_mode == NetMode::Grid ? "grid" : "targeted") << "\n";
    o << "grid_eps = " << to_string(p.grid_eps) << "\n";
    o << "grid_degree = " << p.grid_degree << "\n";
    o << "net_budget_log2 = " << p.net_budget_log2 << "\n";
    o << "net = " << poly_list(p.net) << "\n";
    for (const auto& [n, ps] : p.step_net) o << "step_net." << n << " = " << poly_list(ps) << "\n";
    o << "h_rule = " << join(p.h_rule) << "\n";
    o << "k_rule = " << join(p.k_rule) << "\n";
    o << "rho = " << to_string(p.rho) << "\n";
    o << "budget_log2 = " << p.budget_log2 << "\n";
    return o.str();
}

}  // namespace rop
