#include "rop/run.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

int main(int argc, char** argv) {
    CLI::App app{"rop: finite-truncation checks for the invariant-subset counterexample construction"};
    app.require_subcommand(1, 1);
    rop::RunConfig cfg;

    const std::map<std::string, rop::Command> cmds{
        {"build", rop::Command::Build},   {"validate", rop::Command::Validate},
        {"verify", rop::Command::Verify}, {"orbit", rop::Command::Orbit},
        {"demo", rop::Command::Demo},     {"factorize", rop::Command::Factorize},
        {"export", rop::Command::Export}};
    const std::map<std::string, std::string> help{
        {"build", "build a schedule (co-designing the net from --vectors) and dump it"},
        {"validate", "certify the schedule inequalities"},
        {"verify", "run operator checks per step"},
        {"orbit", "smallest |T^c x - target| over c <= --N"},
        {"demo", "orbit approximation demo, or the hypercyclic demo with --variant th1"},
        {"factorize", "T = BA through l_p, S2/K2 split, kernel of B, summability of the nuclear weights"},
        {"export", "schedule dump and T on F_N as triplets"}};

    for (const auto& [name, cmd] : cmds) {
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--schedule", cfg.schedule_path, "key=value schedule config");
        sub->add_option("--variant", cfg.variant, "th2 | th1 | hilbert")->check(CLI::IsMember({"th2", "th1", "hilbert"}));
        sub->add_option("--steps", cfg.steps, "steps to check (or the step of a demo)");
        sub->add_option("--checks", cfg.checks, "comma list of check names")->delimiter(',');
        sub->add_option("--vectors", cfg.vectors_path, "test vectors: `index value` blocks");
        sub->add_option("--precision", cfg.precision, "working precision in bits (>= 128)");
        sub->add_option("--out", cfg.out_dir, "directory for reports and exports");
        sub->add_option("--seed", cfg.seed, "seed for sampled lower bounds");
        if (name == "factorize") {
            sub->add_option("--p", cfg.p, "exponent, 1 < p < inf");
            sub->add_option("--eq5-budget", cfg.eq5_budget, "budget for the nuclear-weight partial sum");
        }
        if (name == "factorize" || name == "orbit" || name == "export")
            sub->add_option("--N", cfg.N, "truncation index (orbit: power horizon)");
        if (name == "demo") {
            sub->add_option("--demo-N", cfg.demo_N, "N of the multi-copy demo");
            sub->add_option("--demo-n", cfg.demo_n, "n of the multi-copy demo");
        }
        sub->callback([&cfg, cmd = cmd] { cfg.command = cmd; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return rop::run(cfg, std::cout, std::cerr);
}
