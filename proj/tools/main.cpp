#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sublin/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"sublin: sublinear integral equations on finite measure spaces"};
    app.require_subcommand(1);

    struct Args {
        std::string scenario;
        std::string out_dir;
        bool emit_plot_data = false;
    };

    const std::vector<std::string> names = {"solve",  "potentials", "kappa",
                                            "capacity", "verify",   "check-existence"};
    const std::vector<std::string> blurbs = {
        "solve u = G(u^q dsigma) + f and verify the bilateral bounds",
        "emit G sigma, K sigma, h and the kappa certificates",
        "embedding constant kappa(E) with optimality certificate",
        "Wiener capacity cap(K) and cap0(K) with equilibrium measures",
        "structural certificates: kappa, quasi-symmetry, WMP, Ptolemy, modifiability",
        "existence criteria: potential finiteness and tail integrals"};

    std::vector<std::shared_ptr<Args>> args;
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto a = std::make_shared<Args>();
        args.push_back(a);
        CLI::App* sub = app.add_subcommand(names[i], blurbs[i]);
        sub->add_option("scenario", a->scenario, "scenario file")->required();
        sub->add_option("--out", a->out_dir, "override output directory");
        sub->add_flag("--emit-plot-data", a->emit_plot_data,
                      "also write per-center radial step-function CSVs");
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!app.get_subcommand(names[i])->parsed()) continue;
        const Args& a = *args[i];
        return sublin::run_command_guarded(names[i], a.scenario, a.out_dir, a.emit_plot_data);
    }
    return sublin::exit_config;
}
