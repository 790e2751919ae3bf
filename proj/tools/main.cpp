#include "cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

using photocount::cli::Command;
using photocount::cli::Family;
using photocount::cli::Format;
using photocount::cli::RunConfig;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg, bool needs_eta) {
    auto* eta = sub->add_option("--eta", cfg.eta, "Detection efficiency in (0, 1]");
    if (needs_eta) eta->required();
    sub->add_option("--input,-i", cfg.input_path, "Input vector (JSON or index,value CSV)");
    sub->add_option("--output,-o", cfg.output_path, "Output file (default stdout)");
    sub->add_option("--format", cfg.format, "Output format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Format>{{"json", Format::json}, {"csv", Format::csv}}));
}

void add_family(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--family", cfg.family, "Analytic distribution family")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Family>{
            {"poisson", Family::poisson}, {"compound-poisson", Family::compound_poisson}}));
    sub->add_option("--mean", cfg.mean, "Mean count")->check(CLI::PositiveNumber);
    sub->add_option("--a", cfg.a, "Clusterization parameter (compound Poisson)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--epsilon-tail", cfg.epsilon_tail, "Truncation tail mass")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photocount statistics: Bernoulli transform, inversion and stability analysis"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* fwd = app.add_subcommand("forward", "Photon-number to photocount distribution");
    add_common(fwd, cfg, true);
    add_family(fwd, cfg);
    fwd->add_option("--dim", cfg.dim, "Number of output components");

    auto* inv = app.add_subcommand("invert", "Reconstruct P_n from a photocount distribution");
    add_common(inv, cfg, true);
    add_family(inv, cfg);
    inv->add_option("--dim", cfg.dim, "Number of reconstructed components");
    inv->add_flag("--extended", cfg.extended_precision,
                  "Evaluate in arbitrary precision and round once");

    auto* stab = app.add_subcommand("stability", "Convergence analysis of the inverse series");
    add_common(stab, cfg, true);
    add_family(stab, cfg);
    stab->add_option("--n-max", cfg.n_max, "Largest reconstruction index to analyse");

    auto* crit = app.add_subcommand("etacrit", "Critical detection efficiency");
    add_common(crit, cfg, false);
    add_family(crit, cfg);

    auto* simp = app.add_subcommand("simplex", "Q-simplex vertices and membership");
    add_common(simp, cfg, true);
    simp->add_option("--dim", cfg.dim, "Simplex dimension");
    simp->add_option("--vertices", cfg.vertices_path, "Also write vertex CSV here");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo photodetection");
    add_common(sim, cfg, true);
    add_family(sim, cfg);
    sim->add_option("--samples", cfg.samples, "Number of trials")->capture_default_str();
    sim->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sim->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

    auto* fig = app.add_subcommand("figures", "Data behind the reference figures");
    add_common(fig, cfg, false);
    fig->add_option("--which", cfg.which, "Figure number (1 or 2)")->capture_default_str();
    fig->add_option("--max-index", cfg.max_index, "Last row of figure 2")->capture_default_str();
    fig->add_option("--epsilon-tail", cfg.epsilon_tail, "Truncation tail mass")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e);
    } catch (CLI::CallForAllHelp const& e) {
        return app.exit(e);
    } catch (CLI::ParseError const& e) {
        std::cerr << "error: BadConfig: " << e.what() << '\n';
        return photocount::cli::exit_bad_config;
    }

    std::map<CLI::App*, Command> const commands{
        {fwd, Command::forward},   {inv, Command::invert},     {stab, Command::stability},
        {crit, Command::etacrit},  {simp, Command::simplex},   {sim, Command::simulate},
        {fig, Command::figures}};
    for (auto const& [sub, command] : commands) {
        if (sub->parsed()) cfg.command = command;
    }
    return photocount::cli::run(cfg, std::cout, std::cerr);
}
