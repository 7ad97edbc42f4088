#pragma once

#include "rop/report.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rop {

enum class Command { Build, Validate, Verify, Orbit, Demo, Factorize, Export };

struct RunConfig {
    Command command = Command::Build;
    std::string schedule_path;  // key=value config; empty uses the variant's default
    std::string variant = "th2";  // th2 | th1 | hilbert
    int steps = 1;
    std::vector<std::string> checks;  // empty: every check of the command
    std::string vectors_path;
    std::string out_dir;  // empty: stdout only
    unsigned precision = 256;
    std::uint64_t seed = 1;
    // factorize / orbit / export
    std::string p = "2";
    std::string N;  // empty: command default
    std::string eq5_budget = "1";
    // demo on the multi-copy build
    int demo_N = 1;
    int demo_n = 3;
};

// Exit status: 0 all selected checks pass, 1 a check failed or a pipeline
// threw, 2 usage error (bad config, missing or malformed input).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace rop
