// diracheun: spectra, wavefunctions and the verification suite from the command line.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diracheun/errors.hpp"
#include "diracheun/model.hpp"
#include "diracheun/oracle.hpp"
#include "diracheun/report.hpp"
#include "diracheun/routes.hpp"
#include "diracheun/verify.hpp"

using namespace diracheun;

namespace {

struct RunConfig {
    double mass = 1.0;
    std::optional<double> coupling;
    std::string j = "1/2";
    int parity = -1; // the sector holding the ground state
    int n_max = 3;
    std::string route = "all";
    std::string format; // empty: json, or text for verify
    std::string out;
    std::size_t grid_points = 2000;
    double r_min = 0.01;
    double r_max = 40.0;
    std::optional<double> tol;
    bool no_timestamp = false;
    int n = 0; // wavefunction level
};

// "1/2", "3/2" or a decimal; nu = j + 1/2 must be a positive integer.
int nu_from_j(const std::string& text, double* j_out) {
    double j = 0.0;
    try {
        std::size_t pos = 0;
        const auto slash = text.find('/');
        if (slash != std::string::npos) {
            const double num = std::stod(text.substr(0, slash), &pos);
            if (pos != slash) throw std::invalid_argument(text);
            const std::string den_text = text.substr(slash + 1);
            const double den = std::stod(den_text, &pos);
            if (pos != den_text.size() || den == 0.0) throw std::invalid_argument(text);
            j = num / den;
        } else {
            j = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument(text);
        }
    } catch (const std::logic_error&) {
        throw InvalidParams("j must be a half-integer such as 1/2 or 1.5, got '" + text + "'");
    }
    const double nu = j + 0.5;
    if (!(nu >= 1.0) || std::abs(nu - std::round(nu)) > 1e-12) {
        throw InvalidParams("j must be a positive half-integer, got '" + text + "'");
    }
    *j_out = j;
    return static_cast<int>(std::round(nu));
}

SystemParams system_from(const RunConfig& cfg, double* j) {
    if (!cfg.coupling) throw InvalidParams("--coupling is required");
    SystemParams p{cfg.mass, *cfg.coupling, nu_from_j(cfg.j, j), cfg.parity};
    validate(p);
    return p;
}

std::vector<Route> routes_from(const std::string& name) {
    if (name == "all") {
        return {Route::Standard, Route::Mixed1, Route::Mixed2, Route::Heun, Route::Oracle};
    }
    const auto r = route_from_string(name);
    if (!r || *r == Route::ClosedForm) throw InvalidParams("unknown route '" + name + "'");
    return {*r};
}

Format format_from(const RunConfig& cfg) {
    if (cfg.format.empty()) return Format::Json;
    const auto f = format_from_string(cfg.format);
    if (!f) throw InvalidParams("unknown format '" + cfg.format + "' (json or csv)");
    return *f;
}

ShootConfig shoot_from(const RunConfig& cfg) {
    ShootConfig sc;
    if (cfg.tol) sc.energy_tol = *cfg.tol;
    validate(sc);
    return sc;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) throw InvalidParams("cannot open output file '" + cfg.out + "'");
    file << text;
}

int cmd_spectrum(const RunConfig& cfg) {
    SpectrumReport report;
    report.params = system_from(cfg, &report.j);
    if (cfg.n_max < 0) throw InvalidParams("--n-max must be >= 0");
    const auto routes = routes_from(cfg.route);
    const auto shoot = shoot_from(cfg);
    const Format format = format_from(cfg);
    for (int n = 0; n <= cfg.n_max; ++n) {
        const bool bound = has_bound_state(report.params, n);
        const std::size_t first = report.rows.size();
        for (Route r : routes) {
            SpectrumRow row;
            row.route = r;
            row.bound_state = bound;
            if (r == Route::Oracle) {
                if (!bound) continue; // nothing to shoot for
                row.level = find_level(report.params, n, shoot);
            } else {
                row.level = quantization_root(report.params, n, r);
            }
            report.rows.push_back(row);
        }
        if (cfg.route == "all") {
            double dev = 0.0;
            for (std::size_t a = first; a < report.rows.size(); ++a) {
                for (std::size_t b = a + 1; b < report.rows.size(); ++b) {
                    const double Ea = report.rows[a].level.E, Eb = report.rows[b].level.E;
                    dev = std::max(dev, std::abs(Ea - Eb) / std::max(std::abs(Ea), std::abs(Eb)));
                }
            }
            for (std::size_t a = first; a < report.rows.size(); ++a) {
                report.rows[a].max_pairwise_deviation = dev;
            }
        }
    }
    if (!cfg.no_timestamp) report.timestamp = utc_timestamp();
    emit(cfg, format == Format::Json ? spectrum_json(report) : spectrum_csv(report));
    return 0;
}

int cmd_wavefunction(const RunConfig& cfg, bool n_max_given) {
    WavefunctionReport report;
    const SystemParams p = system_from(cfg, &report.j);
    if (cfg.n < 0) throw InvalidParams("n must be >= 0");
    if (n_max_given && cfg.n > cfg.n_max) throw InvalidParams("n exceeds --n-max");
    const auto routes = routes_from(cfg.route);
    report.route = cfg.route == "all" ? Route::Standard : routes.front();
    const Format format = format_from(cfg);
    if (cfg.grid_points < 2) throw InvalidParams("empty grid: --grid-points must be >= 2");
    if (!(cfg.r_min > 0.0 && cfg.r_max > cfg.r_min)) {
        throw InvalidParams("empty grid: need 0 < --r-min < --r-max");
    }
    if (!has_bound_state(p, cfg.n)) {
        throw NoBoundState("no bound state n=" + std::to_string(cfg.n) + " in parity " +
                           std::to_string(p.parity) + " sector");
    }
    const double lambda = standard_vars(p, energy_closed_form(cfg.n, p).E).lambda;
    const auto grid = RadialGrid::scaled(lambda, cfg.grid_points, cfg.r_min, cfg.r_max);
    if (report.route == Route::Oracle) {
        report.solution = oracle_wavefunction(p, cfg.n, grid, shoot_from(cfg));
    } else {
        report.solution = normalize(solve(report.route, p, cfg.n, grid));
    }
    report.residual = residual(report.solution);
    if (!cfg.no_timestamp) report.timestamp = utc_timestamp();
    emit(cfg, format == Format::Json ? wavefunction_json(report) : wavefunction_csv(report));
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    VerifyConfig vc;
    vc.mass = cfg.mass;
    if (!(vc.mass > 0.0) || !std::isfinite(vc.mass)) throw InvalidParams("--mass must be positive");
    vc.tol_override = cfg.tol;
    if (vc.tol_override && !(*vc.tol_override > 0.0)) throw InvalidParams("--tol must be positive");
    if (cfg.route != "all") {
        for (Route r : routes_from(cfg.route)) vc.routes.insert(r);
    }
    if (cfg.grid_points < 10) throw InvalidParams("--grid-points must be >= 10 for verification");
    vc.grid_points = cfg.grid_points;
    const auto results = run_verification(vc);
    const bool ok = all_passed(results);
    std::string text;
    if (cfg.format.empty()) {
        text = verification_text(results);
        text += ok ? "verification passed\n" : "verification FAILED\n";
    } else if (format_from(cfg) == Format::Json) {
        text = verification_json(results, ok);
    } else {
        text = verification_text(results);
    }
    emit(cfg, text);
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dirac-Coulomb bound states via Heun, Kummer and shooting routes"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
    app.allow_config_extras(false);

    RunConfig cfg;
    app.add_option("--mass", cfg.mass, "Particle mass m")->capture_default_str();
    app.add_option("--coupling", cfg.coupling, "Coulomb coupling e (Z alpha)");
    app.add_option("--j", cfg.j, "Total angular momentum, e.g. 1/2 or 1.5")->capture_default_str();
    app.add_option("--parity", cfg.parity, "Parity sector, 1 or -1")
        ->capture_default_str()
        ->check(CLI::IsMember({1, -1}));
    auto* n_max_opt = app.add_option("--n-max", cfg.n_max, "Largest radial quantum number")
                          ->capture_default_str();
    app.add_option("--route", cfg.route, "standard, mixed1, mixed2, heun, oracle or all")
        ->capture_default_str();
    app.add_option("--format", cfg.format, "json or csv");
    app.add_option("--out", cfg.out, "Output file (default stdout)");
    app.add_option("--grid-points", cfg.grid_points, "Wavefunction grid size")->capture_default_str();
    app.add_option("--r-min", cfg.r_min, "Innermost radius in units of 1/lambda")->capture_default_str();
    app.add_option("--r-max", cfg.r_max, "Outermost radius in units of 1/lambda")->capture_default_str();
    app.add_option("--tol", cfg.tol,
                   "Oracle energy tolerance |dE|/m; for verify, replaces every threshold");
    app.add_flag("--no-timestamp", cfg.no_timestamp, "Omit the timestamp for byte-stable output");

    auto* spectrum = app.add_subcommand("spectrum", "Energy levels n = 0..n-max")->fallthrough();
    auto* wave = app.add_subcommand("wavefunction", "Normalized f, g of level n")->fallthrough();
    wave->add_option("n", cfg.n, "Radial quantum number")->capture_default_str();
    auto* verify = app.add_subcommand("verify", "Run the acceptance suite and invariants")->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*spectrum) return cmd_spectrum(cfg);
        if (*wave) return cmd_wavefunction(cfg, n_max_opt->count() > 0);
        if (*verify) return cmd_verify(cfg);
    } catch (const NumericalFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
