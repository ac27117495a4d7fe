// Command-line front end for the coherent-state library.
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include "aacs/cli.hpp"
#include "aacs/error.hpp"

using namespace aacs;

int main(int argc, char** argv) {
    CLI::App app{"Temporally stable coherent states for discrete spectra"};
    app.require_subcommand(1);
    app.fallthrough();

    cli::RunConfig config;
    std::string model_name;
    std::string format = "csv";
    double omega = 0.0;

    app.add_option("--model", model_name, "builtin spectrum: harmonic | hydrogen_like");
    app.add_option("--file", config.spectrum_file, "spectrum document (JSON)");
    auto* omega_opt = app.add_option("--omega", omega, "energy scale override");
    app.add_option("--tol", config.tol, "tail tolerance")->capture_default_str();
    app.add_option("--nmax", config.n_max, "weight table depth cap")->capture_default_str();
    app.add_option("--format", format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", config.out_path, "output file (default stdout)");
    app.add_option("--seed", config.seed, "seed for sampled checks")->capture_default_str();
    app.add_option("--measure", config.measure_file, "measure document (JSON)");

    std::size_t count = 10;
    double J = 0.5, gamma = 0.0, t = 0.0;
    std::string grid, gamma_text = "inf";
    std::optional<double> weights_J;
    std::size_t n_check = 15, dim = 30;

    auto* spectrum = app.add_subcommand("spectrum", "list levels and validate the spectrum");
    spectrum->add_option("--count", count, "number of levels")->capture_default_str();

    auto* weights = app.add_subcommand("weights", "action-identity weights and N(J)");
    weights->add_option("--count", count, "number of weights shown")->capture_default_str();
    weights->add_option("--J", weights_J, "evaluate N(J)");

    auto* state = app.add_subcommand("state", "coherent-state amplitudes");
    state->add_option("--J", J)->required();
    state->add_option("--gamma", gamma)->capture_default_str();

    auto* variance = app.add_subcommand("variance", "energy variance over a J grid");
    variance->add_option("--grid", grid, "start:stop:step or comma list (empty for no points)");

    auto* evolve = app.add_subcommand("evolve", "temporal stability residual");
    evolve->add_option("--J", J)->required();
    evolve->add_option("--gamma", gamma)->capture_default_str();
    evolve->add_option("--t", t)->required();

    auto* verify = app.add_subcommand("verify", "run every invariant suite");

    auto* resolution = app.add_subcommand("resolution", "moment and gamma-average checks");
    resolution->add_option("--J", J)->capture_default_str();
    resolution->add_option("--Gamma", gamma_text, "averaging window or inf")->capture_default_str();
    resolution->add_option("--ncheck", n_check)->capture_default_str();
    resolution->add_option("--dim", dim, "projector basis size - 1")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kInvalid;
    }

    try {
        if (!model_name.empty()) {
            config.model = parse_model(model_name);
            if (!config.model) throw ValidationError("unknown model '" + model_name + "'");
        }
        if (omega_opt->count() > 0) config.omega = omega;
        config.format = format == "json" ? OutputFormat::json : OutputFormat::csv;

        std::ofstream file;
        if (!config.out_path.empty()) {
            file.open(config.out_path, std::ios::binary);
            if (!file) throw ValidationError("cannot write '" + config.out_path + "'");
        }
        std::ostream& out = config.out_path.empty() ? std::cout : file;

        if (*spectrum) return cli::cmd_spectrum(config, count, out);
        if (*weights) return cli::cmd_weights(config, count, weights_J, out);
        if (*state) return cli::cmd_state(config, J, gamma, out);
        if (*variance) return cli::cmd_variance(config, cli::parse_grid(grid), out);
        if (*evolve) return cli::cmd_evolve(config, J, gamma, t, out);
        if (*verify) return cli::cmd_verify(config, out);
        if (*resolution) {
            double Gamma = std::numeric_limits<double>::infinity();
            if (gamma_text != "inf") Gamma = std::stod(gamma_text);
            return cli::cmd_resolution(config, J, Gamma, n_check, dim, out);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kInvalid;
    }
    return cli::kInvalid;
}
