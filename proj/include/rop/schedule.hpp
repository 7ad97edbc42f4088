#pragma once

#include "rop/numeric.hpp"
#include "rop/polynomial.hpp"
#include "rop/report.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rop {

enum class Variant { Th2, Th1 };
enum class SpaceKind { Lp, C0 };
enum class ZKind { C0Canonical, L2SecondCopy };
enum class AlphaKind { Constant, HilbertHarmonic };
enum class NetMode { Grid, Targeted };

// Growth floors, in build order.
enum Floor { FloorA = 0, FloorB = 1, FloorC1 = 2, FloorCk = 3, FloorXi = 4 };

struct ScheduleParams {
    Variant variant = Variant::Th2;
    SpaceKind space = SpaceKind::Lp;
    Rational p = 1;
    ZKind z = ZKind::C0Canonical;
    Rational epsilon = Rational(1, 2);
    AlphaKind alpha_kind = AlphaKind::Constant;
    Rational alpha = Rational(1, 4);
    Index kappa_step = 1;  // kappa_j = kappa_step * j
    int n_max = 2;
    std::array<Rational, 5> floors{4, 4, 4, 4, 4};
    NetMode net_mode = NetMode::Targeted;
    Rational grid_eps = 1;
    int grid_degree = 1;
    int net_budget_log2 = 20;
    // Targeted net shared by every step; step_net overrides per step
    // (co-design injection). A step with neither is left unfrozen with
    // k_n taken from k_rule.
    std::vector<Polynomial> net{Polynomial::monomial(1)};
    std::map<int, std::vector<Polynomial>> step_net;
    std::vector<int> h_rule{2};
    std::vector<int> k_rule{1};
    Rational rho = Rational(1, 2);
    int budget_log2 = 48;

    void validate() const;
    static ScheduleParams desk();
    static ScheduleParams desk_multi_copy();
    static ScheduleParams hilbert(const Rational& epsilon);
};

struct StepLayout {
    int n = 0;
    Index xi = 0, a = 0, b = 0, nu = 0, mu = 0;
    Index kgap = 0;  // kappa_n - kappa_{n-1} - 1
    std::vector<Index> c;
    int k = 0, h = 0;
    Index log2_eps = 0, log2_delta = 0, log2_gamma = 0;
    Index l = 0;
    Index fan_end = 0;  // right end of the last (c)-interval
    std::vector<Polynomial> net;
    bool net_frozen = false;

    Index A() const { return mu != 0 ? mu : a; }  // a_n, or mu_n for the multi-copy build
};

enum class Kind { Root, LayOff, AWork, BWork, CWork };

struct IntervalTag {
    Kind kind = Kind::Root;
    int n = 0;
    Index left = 0, right = 0;
    // lay-off: f_j = lambda_j e_j with log2 lambda_j = (len/2 + base + 1 - j)/sqrt(len)
    Index k = 0, l = 0;
    bool modified = false;
    Index mod_r = -1;  // 0 for [A+1, b], r >= 1 for the gap after the r-th (b)-interval
    Index lam_base = 0, lam_len = 0;
    // (a): r for the multi-copy build, koff = a_n - j otherwise
    Index r = 0;
    Index koff = 0;
    // (c)
    std::vector<int> s;
    int t = 0;
    int abs_s = 0;
    bool is_right_endpoint = false;

    std::string describe() const;
    bool operator==(const IntervalTag& o) const;
};

const char* kind_name(Kind k);

class Schedule {
public:
    ScheduleParams params;
    std::vector<StepLayout> steps;  // steps[0] is step 1
    Index horizon = 0;              // xi_{n_max+1}
    Index next_a = 0;               // a_{n_max+1}, outside the horizon
    Index next_kgap = 0;
    std::vector<Index> d;           // d[m] = d_m (multi-copy build), d[0] unused

    int n_max() const { return static_cast<int>(steps.size()); }
    const StepLayout& step(int n) const;
    Index xi(int n) const;          // xi_n for 1 <= n <= n_max+1
    Index a(int n) const;           // a_0 = 0 (single copy) or 1 (multi-copy); a_{n_max+1} = next_a
    Index kgap(int n) const;
    int step_of(Index j) const;     // n with xi_n < j <= xi_{n+1}
    bool is_th1() const { return params.variant == Variant::Th1; }

    Real alpha(int n) const;
    std::optional<Rational> alpha_exact(int n) const;

    // Left end of the first (a)-interval of step n (n may be n_max+1).
    Index first_a_left(int n) const;

    std::string dump(std::size_t fan_limit = 4096) const;
};

Schedule build_schedule(const ScheduleParams& params);
Schedule build_schedule_multi(const ScheduleParams& params);

IntervalTag classify_index(const Schedule& s, Index j);
bool in_a_interval(const Schedule& s, Index j);
// number of (a)-interval indices strictly below j
Index a_count_below(const Schedule& s, Index j);
Index sigma(const Schedule& s, Index j);

// All intervals of step n in order, lay-offs clipped to [xi_n+1, xi_{n+1}].
std::vector<IntervalTag> step_intervals(const Schedule& s, int n);

// Names: a_damping, b_damping, eps_repr, c_layoff, h_shades, tiling.
std::vector<CertReport> validate_schedule(const Schedule& s, const std::set<std::string>& checks);
const std::vector<std::string>& schedule_check_names();

// Polynomial net of step n for the given mode. Grid uses spacing
// 2*eps/(degree+1), so coordinate-wise rounding stays within eps in |.|.
std::vector<Polynomial> grid_net(const Rational& eps, int degree, int budget_log2 = 20);

}  // namespace rop
