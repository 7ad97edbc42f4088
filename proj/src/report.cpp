#include "rop/report.hpp"

namespace rop {

CertReport CertReport::make(std::string id, std::string anchor, const Real& claimed, const Real& measured,
                            std::string caveat, const Real& tolerance) {
    CertReport r;
    r.id = std::move(id);
    r.anchor = std::move(anchor);
    r.claimed = claimed;
    r.measured = measured;
    r.slack = claimed - measured;
    r.caveat = std::move(caveat);
    r.pass = !isnan(measured) && measured <= claimed + tolerance;
    return r;
}

std::string CertReport::line() const {
    return id + " " + dec(claimed, 20) + " " + dec(measured, 20) + " " + dec(slack, 20) + " " + (pass ? "pass" : "fail");
}

std::string report_lines(const std::vector<CertReport>& reports, bool with_caveats) {
    std::string s;
    for (const auto& r : reports) {
        s += r.line();
        s += '\n';
        if (with_caveats && !r.caveat.empty()) s += "# " + r.id + " [" + r.anchor + "] " + r.caveat + "\n";
    }
    return s;
}

bool all_pass(const std::vector<CertReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

}  // namespace rop
