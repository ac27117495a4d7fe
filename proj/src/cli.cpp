#include "aacs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "aacs/dynamics.hpp"
#include "aacs/error.hpp"
#include "aacs/observables.hpp"
#include "aacs/resolution.hpp"
#include "aacs/state.hpp"

namespace aacs::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t table_depth(const RunConfig& config, const Spectrum& s) {
    std::size_t depth = config.n_max;
    if (auto count = s.level_count()) depth = std::min(depth, *count - 1);
    return depth;
}

Table::Cell e_star_cell(const Spectrum& s) {
    if (auto e = s.e_star()) return *e;
    return std::string("unknown");
}

void describe_spectrum(Table& table, const Spectrum& s) {
    table.meta("spectrum", s.name());
    table.meta("omega", s.omega());
    table.meta("e_star", e_star_cell(s));
}

Table::Cell real_or_empty(double x) {
    if (std::isnan(x)) return std::monostate{};
    return x;
}

}  // namespace

void check_config(const RunConfig& config) {
    if (!(config.tol > 0.0)) throw ValidationError("--tol must be positive");
    if (config.n_max < 8) throw ValidationError("--nmax must be at least 8");
    if (config.model.has_value() == !config.spectrum_file.empty())
        throw ValidationError("give exactly one of --model or --file");
    if (config.omega && !(*config.omega > 0.0)) throw ValidationError("--omega must be positive");
}

ResolvedSpectrum resolve_spectrum(const RunConfig& config, bool validated) {
    check_config(config);
    if (config.model) return {make_builtin(*config.model, config.omega.value_or(1.0)), config.model};

    std::string text = read_file(config.spectrum_file);
    std::optional<Model> model;
    try {
        auto doc = nlohmann::json::parse(text);
        if (config.omega) {
            doc["omega"] = *config.omega;
            text = doc.dump();
        }
        if (doc.value("kind", std::string{}) == "builtin")
            model = parse_model(doc.value("model", std::string{}));
    } catch (const nlohmann::json::exception&) {
        // parse_spectrum reports the error
    }
    return {validated ? load_spectrum(text) : parse_spectrum(text), model};
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.find_first_not_of(" \t") == std::string::npos) return grid;
    auto number = [&](const std::string& token) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || token.find_first_not_of(" \t", used) != std::string::npos)
            throw ValidationError("bad grid value '" + token + "'");
        return x;
    };
    if (text.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream in(text);
        for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
        if (parts.size() != 3) throw ValidationError("grid range must be start:stop:step");
        const double a = number(parts[0]), b = number(parts[1]), h = number(parts[2]);
        if (!(h > 0.0) || b < a) throw ValidationError("grid range needs step > 0 and stop >= start");
        const auto count = static_cast<std::size_t>(std::floor((b - a) / h + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i) grid.push_back(a + h * static_cast<double>(i));
        return grid;
    }
    std::stringstream in(text);
    for (std::string token; std::getline(in, token, ',');) grid.push_back(number(token));
    return grid;
}

int cmd_spectrum(const RunConfig& config, std::size_t count, std::ostream& out) {
    const auto [s, model] = resolve_spectrum(config, false);
    if (count == 0) throw ValidationError("--count must be positive");
    std::size_t shown = count;
    if (auto c = s.level_count()) shown = std::min(shown, *c);
    const auto report = validate(s, shown - 1);

    Table table({"n", "energy", "level"});
    describe_spectrum(table, s);
    table.meta("shift_applied", report.shift_applied);
    table.meta("valid", report.ok);
    table.meta("violations", describe(report));
    for (std::size_t n = 0; n < shown; ++n)
        table.row({static_cast<std::int64_t>(n), s.energy(n), s.level(n)});
    table.write(out, config.format);
    return report.ok ? kSuccess : kInvalid;
}

int cmd_weights(const RunConfig& config, std::size_t count, std::optional<double> J,
                std::ostream& out) {
    const auto [s, model] = resolve_spectrum(config);
    const auto w = compute_weights(s, table_depth(config, s));

    Table table({"n", "log_rho", "rho"});
    describe_spectrum(table, s);
    table.meta("n_max", static_cast<std::int64_t>(w.n_max()));
    table.meta("j_star", w.j_star);
    table.meta("j_star_estimated", w.j_star_estimated);
    if (J) {
        const auto N = normalization(w, s, *J, {config.tol, kDefaultEdge});
        table.meta("J", *J);
        table.meta("normalization", N.value);
        table.meta("log_normalization", N.log_value);
        table.meta("tail_bound", N.tail_bound);
        table.meta("terms_used", static_cast<std::int64_t>(N.terms_used));
    }
    const std::size_t shown = std::min(count, w.n_max() + 1);
    for (std::size_t n = 0; n < shown; ++n)
        table.row({static_cast<std::int64_t>(n), w.log_rho[n], w.rho(n)});
    table.write(out, config.format);
    return kSuccess;
}

int cmd_state(const RunConfig& config, double J, double gamma, std::ostream& out) {
    const auto [s, model] = resolve_spectrum(config);
    const auto w = compute_weights(s, table_depth(config, s));
    const auto state = coefficients(s, w, {J, gamma}, config.tol);

    Table table({"n", "re", "im", "probability"});
    describe_spectrum(table, s);
    table.meta("J", J);
    table.meta("gamma", gamma);
    table.meta("terms", static_cast<std::int64_t>(state.c.size()));
    table.meta("tail_mass_bound", state.tail_mass_bound);
    table.meta("norm_deficit", norm_deficit(state));
    auto amplitudes = nlohmann::ordered_json::array();
    for (std::size_t n = 0; n < state.c.size(); ++n) {
        const auto c = state.c[n];
        table.row({static_cast<std::int64_t>(n), c.real(), c.imag(), std::norm(c)});
        amplitudes.push_back({c.real(), c.imag()});
    }
    table.json_extra("amplitudes", std::move(amplitudes));
    table.write(out, config.format);
    return kSuccess;
}

int cmd_variance(const RunConfig& config, const std::vector<double>& grid, std::ostream& out) {
    const auto [s, model] = resolve_spectrum(config);
    const auto w = compute_weights(s, table_depth(config, s));
    VarianceOptions opts;
    opts.tol = config.tol;
    const auto points = variance_curve(s, w, grid, opts);
    const bool hydrogen = model == Model::hydrogen_like;
    const double omega2 = s.omega() * s.omega();

    Table table({"J", "mean", "variance", "bound", "tail_bound", "double_sum", "error"});
    describe_spectrum(table, s);
    int code = kSuccess;
    for (const auto& p : points) {
        Table::Cell bound;
        if (hydrogen) bound = 0.75 * omega2 * p.J * (1.0 - p.J);
        Table::Cell pairwise;
        if (p.double_sum_variance) pairwise = *p.double_sum_variance;
        table.row({p.J, real_or_empty(p.mean), real_or_empty(p.variance), bound,
                   real_or_empty(p.tail_bound), pairwise, p.error});
        code = std::max(code, p.error_code);
    }
    table.write(out, config.format);
    return code;
}

int cmd_evolve(const RunConfig& config, double J, double gamma, double t, std::ostream& out) {
    const auto [s, model] = resolve_spectrum(config);
    const auto w = compute_weights(s, table_depth(config, s));
    const StateLabel l{J, gamma};
    const auto moved = evolve_label(l, t, s.omega());

    const double residual = temporal_stability_residual(s, w, l, t, config.tol);
    const auto a = coefficients(s, w, l, config.tol);
    const auto b = coefficients(s, w, moved, config.tol);
    const double contract = 2.0 * (a.tail_mass_bound + b.tail_mass_bound);
    const bool pass = residual <= contract;

    Table table({"J", "gamma", "t", "gamma_t", "residual", "contract", "terms", "pass"});
    describe_spectrum(table, s);
    table.row({J, gamma, t, moved.gamma, residual, contract, static_cast<std::int64_t>(a.c.size()),
               pass});
    table.write(out, config.format);
    return pass ? kSuccess : kVerificationFailed;
}

int cmd_resolution(const RunConfig& config, double J, double Gamma, std::size_t n_check,
                   std::size_t dim, std::ostream& out) {
    const auto [s, model] = resolve_spectrum(config);
    const auto w = compute_weights(s, table_depth(config, s));

    std::optional<Measure> measure;
    if (!config.measure_file.empty())
        measure = parse_measure(read_file(config.measure_file));
    else if (model)
        measure = builtin_measure(*model);

    dim = std::min(dim, w.n_max());
    const auto P = gamma_averaged_projector(s, w, J, Gamma, dim, {config.tol, kDefaultEdge});
    double off = 0.0;
    for (Eigen::Index i = 0; i < P.entries.rows(); ++i)
        for (Eigen::Index j = 0; j < P.entries.cols(); ++j)
            if (i != j) off = std::max(off, std::abs(P.entries(i, j)));

    Table table({"n", "moment", "rho", "rel_error", "unity"});
    describe_spectrum(table, s);
    table.meta("J", J);
    table.meta("Gamma", Gamma);
    table.meta("projector_dim", static_cast<std::int64_t>(dim + 1));
    table.meta("projector_trace", P.entries.trace().real());
    table.meta("max_off_diagonal", off);

    if (!measure) {
        table.meta("moments", std::string("skipped (no measure)"));
    } else {
        n_check = std::min(n_check, w.n_max());
        const auto unity = unity_check(*measure, w, s, n_check);
        double worst = 0.0;
        for (std::size_t n = 0; n <= n_check; ++n) {
            const double rho = w.rho(n);
            const double moment = measure_moment(*measure, n);
            const double rel = std::fabs(moment - rho) / rho;
            worst = std::max(worst, rel);
            table.row({static_cast<std::int64_t>(n), moment, rho, rel, unity[n]});
        }
        table.meta("max_rel_error", worst);
    }
    table.write(out, config.format);
    return kSuccess;
}

int cmd_verify(const RunConfig& config, std::ostream& out) {
    const auto [s, model] = resolve_spectrum(config);
    VerifyOptions opts;
    opts.tol = config.tol;
    opts.n_max = config.n_max;
    opts.seed = config.seed;
    opts.model = model;
    if (!config.measure_file.empty()) opts.measure = parse_measure(read_file(config.measure_file));

    const auto results = run_verification(s, opts);
    Table table({"check", "status", "value", "threshold", "detail"});
    describe_spectrum(table, s);
    table.meta("seed", static_cast<std::int64_t>(config.seed));
    bool ok = true;
    for (const auto& r : results) {
        ok = ok && r.status != CheckStatus::fail;
        table.row({r.name, std::string(to_string(r.status)), real_or_empty(r.value),
                   real_or_empty(r.threshold), r.detail});
    }
    table.meta("all_passed", ok);
    table.write(out, config.format);
    return ok ? kSuccess : kVerificationFailed;
}

}  // namespace aacs::cli
