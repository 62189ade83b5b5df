#include "hhq/cli.hpp"
#include "hhq/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>

namespace {

using hhq::cli::CommandRequest;

void add_output_flag(CLI::App* cmd, CommandRequest& req) {
    cmd->add_option_function<std::string>(
           "--output",
           [&req](const std::string& v) {
               req.output = v == "csv" ? hhq::cli::OutputFormat::csv
                                       : hhq::cli::OutputFormat::json;
           },
           "Report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->default_str("json");
}

void add_function_args(CLI::App* cmd, CommandRequest& req) {
    cmd->add_option("-f,--function", req.function_text, "Expression in x")
        ->required();
    cmd->add_option("-a", req.a, "Left endpoint")->required();
    cmd->add_option("-b", req.b, "Right endpoint")->required();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Certified integral enclosures for convex and concave functions, with "
        "inequality verification suites"};
    app.require_subcommand(1);

    CommandRequest req;
    try {
        req.seed = hhq::cli::seed_from_env_or_default();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::size_t n_opt = 0;
    double tol_opt = 0.0;
    std::size_t n_max_opt = 0;
    std::string shape = "auto";
    std::string suite = "all";

    auto* integrate = app.add_subcommand(
        "integrate", "Bracket an integral between midpoint and trapezoid sums");
    add_function_args(integrate, req);
    auto* n_flag = integrate->add_option("-n,--n", n_opt, "Fixed partition size");
    auto* tol_flag =
        integrate->add_option("--tol", tol_opt, "Target bracket width");
    auto* nmax_flag = integrate->add_option("--n-max", n_max_opt,
                                            "Refinement cap (default 2^20)");
    integrate->add_option("--shape", shape, "convex | concave | auto")
        ->check(CLI::IsMember({"convex", "concave", "auto"}));
    add_output_flag(integrate, req);

    auto* verify =
        app.add_subcommand("verify", "Run seeded property suites; exit 1 on any "
                                     "falsified inequality");
    verify->add_option("--suite", suite, "hh | ostrowski | maps | all")
        ->check(CLI::IsMember({"hh", "ostrowski", "maps", "all"}));
    verify->add_option("--trials", req.trials, "Generated functions per suite");
    verify->add_option("--seed", req.seed, "Generator seed");
    verify->add_flag("--f-map-halved,!--no-f-map-halved", req.f_map_halved,
                     "Apply the 1/2 normalization to the F map (default on)");
    verify->add_flag("--weighted-unscaled", req.weighted_unscaled,
                     "Use the unscaled weighted evaluation point");
    add_output_flag(verify, req);

    auto* sharp = app.add_subcommand(
        "sharpness", "Measure the tight constants on the identity map");
    sharp->add_option("-a", req.a, "Left endpoint (default 0)");
    sharp->add_option("-b", req.b, "Right endpoint (default 1)");
    auto* sharp_n = sharp->add_option("-n,--n", n_opt, "Partition size (default 8)");
    add_output_flag(sharp, req);

    auto* maps = app.add_subcommand(
        "maps", "Tabulate the interpolation maps H(t) and F(t)");
    add_function_args(maps, req);
    auto* maps_n = maps->add_option("-n,--n", n_opt, "Partition size (default 1)");
    maps->add_option("--t-steps", req.t_steps, "Number of t steps (default 100)");
    maps->add_option("--panels", req.panels,
                     "Inner quadrature panels (default 65536)");
    maps->add_flag("--f-map-halved,!--no-f-map-halved", req.f_map_halved,
                   "Apply the 1/2 normalization to the F map (default on)");
    add_output_flag(maps, req);

    auto* oracle = app.add_subcommand(
        "oracle", "Reference integral with cross-checked uncertainty");
    add_function_args(oracle, req);
    oracle->add_option("--panels", req.panels,
                       "Midpoint panels, power of two >= 1024 (default 65536)");
    add_output_flag(oracle, req);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (integrate->parsed()) {
        req.command = hhq::cli::Command::integrate;
        if (n_flag->count()) req.n = n_opt;
        if (tol_flag->count()) req.tol = tol_opt;
        if (nmax_flag->count()) req.n_max = n_max_opt;
        req.shape = shape == "convex"    ? hhq::cli::ShapeRequest::convex
                    : shape == "concave" ? hhq::cli::ShapeRequest::concave
                                         : hhq::cli::ShapeRequest::automatic;
    } else if (verify->parsed()) {
        req.command = hhq::cli::Command::verify;
        req.suite = suite == "hh"          ? hhq::cli::Suite::hh
                    : suite == "ostrowski" ? hhq::cli::Suite::ostrowski
                    : suite == "maps"      ? hhq::cli::Suite::maps
                                           : hhq::cli::Suite::all;
    } else if (sharp->parsed()) {
        req.command = hhq::cli::Command::sharpness;
        if (sharp_n->count()) req.n = n_opt;
    } else if (maps->parsed()) {
        req.command = hhq::cli::Command::maps;
        if (maps_n->count()) req.n = n_opt;
    } else {
        req.command = hhq::cli::Command::oracle;
    }

    try {
        hhq::cli::RunOutcome out = hhq::cli::run(req);
        std::fwrite(out.body.data(), 1, out.body.size(), stdout);
        return out.exit_code;
    } catch (const hhq::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const hhq::ShapeError& e) {
        std::cerr << "shape error: " << e.what() << "\n";
        return 3;
    } catch (const hhq::EvalError& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return 3;
    } catch (const hhq::OracleError& e) {
        std::cerr << "oracle error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
