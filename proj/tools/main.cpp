#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ageom/cli.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Operator geometry of A-isometries: calculus, sections, completions, minimal curves"};
    app.require_subcommand(1);

    ageom::RunConfig config;
    double tol = 0.0;
    std::uint64_t horizon = 0;
    std::size_t trials = 0;
    double t1 = 0.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tol", tol, "tolerance override (> 0)");
        sub->add_option("--seed", config.seed, "master seed (default 0)");
        sub->add_option("--out", config.out, "write the JSON report here instead of stdout");
    };
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("input", config.input, "input JSON file, - for stdin")->required();
    };

    struct Entry {
        const char* name;
        const char* help;
    };
    const Entry with_input[] = {
        {"check", "isometry / symmetrizable / adjoint check ({\"mode\", \"A\", \"T\" or \"B\"})"},
        {"project", "compatible projector onto range(F) ({\"A\", \"F\"})"},
        {"douglas", "solvability of AX = B three ways ({\"A\", \"B\"})"},
        {"section", "cross-section sigma_T0(T) ({\"A\", \"T0\", \"T\"})"},
        {"conjugate", "conjugator K with KHT1 = T2 ({\"A\", \"T1\", \"T2\", \"H\"})"},
        {"extend", "selfadjoint norm-one completion ({\"X\", \"P\"})"},
        {"geodesic", "minimal curve through T ({\"A\", \"T\", \"V\" or \"H\"})"},
        {"race", "length race against exponential competitors"},
    };
    for (const auto& e : with_input) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        add_common(sub);
        add_input(sub);
        if (std::string(e.name) == "geodesic" || std::string(e.name) == "race")
            sub->add_option("--t1", t1, "curve parameter bound");
        if (std::string(e.name) == "race")
            sub->add_option("--trials", trials, "competitors (default 200)");
    }

    CLI::App* seq = app.add_subcommand("seq", "weighted sequence backend: wold|adjoint|demo <name> [space]");
    add_common(seq);
    seq->add_option("args", config.args, "wold|adjoint|demo, operator name, optional space")->required();
    seq->add_option("--horizon", horizon, "index horizon");

    CLI::App* suite = app.add_subcommand("suite", "run the acceptance suite");
    add_common(suite);
    suite->add_option("criteria", config.args, "criterion numbers (default all)");

    CLI11_PARSE(app, argc, argv);

    CLI::App* chosen = app.get_subcommands().front();
    config.command = chosen->get_name();
    if (chosen->count("--tol"))
        config.tol = tol;
    if (chosen->get_option_no_throw("--horizon") && chosen->count("--horizon"))
        config.horizon = horizon;
    if (chosen->get_option_no_throw("--trials") && chosen->count("--trials"))
        config.trials = trials;
    if (chosen->get_option_no_throw("--t1") && chosen->count("--t1"))
        config.t1 = t1;

    const ageom::RunResult result = ageom::run(config);
    const std::string text = ageom::render(result.report);
    if (config.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(config.out);
        if (!f) {
            std::cerr << "cannot write " << config.out << "\n";
            return 1;
        }
        f << text;
    }
    return result.exit_code;
}
