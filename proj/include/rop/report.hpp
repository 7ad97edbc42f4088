#pragma once

#include "rop/numeric.hpp"

#include <string>
#include <vector>

namespace rop {

// One certified inequality: pass iff measured <= claimed (+ tolerance).
struct CertReport {
    std::string id;
    std::string anchor;  // short name of the statement being checked
    Real claimed;
    Real measured;
    Real slack;
    std::string caveat;
    bool pass = false;

    static CertReport make(std::string id, std::string anchor, const Real& claimed, const Real& measured,
                           std::string caveat = {}, const Real& tolerance = Real(0));

    // `check_id claimed measured slack pass|fail`
    std::string line() const;
};

std::string report_lines(const std::vector<CertReport>& reports, bool with_caveats = true);
bool all_pass(const std::vector<CertReport>& reports);

}  // namespace rop
