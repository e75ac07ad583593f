#include "qrm2/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

namespace qrm2::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitWarning = 3;
constexpr int kExitVerifyFail = 4;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open output file: " + path);
    file << content;
}

// CLI flags override config-file values override defaults: config values are
// applied only to options the user did not pass explicitly.
void apply_config_file(CLI::App& sub, const std::string& path, RunConfig& cfg,
                       std::optional<double>& e_min, std::optional<double>& e_max) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("config: cannot open file: " + path);
    nlohmann::json j;
    try {
        file >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (j.contains("schema_version") && j["schema_version"].get<int>() != 1) {
        throw std::invalid_argument("config: unsupported schema_version");
    }
    auto untouched = [&](const char* flag) {
        CLI::Option* opt = sub.get_option_no_throw(flag);
        return opt != nullptr && opt->count() == 0;
    };
    auto take = [&](const char* key, const char* flag, auto&& setter) {
        if (j.contains(key) && untouched(flag)) setter(j.at(key));
    };
    using nlohmann::json;
    take("delta1", "--delta1", [&](const json& v) { cfg.delta1 = v.get<double>(); });
    take("delta2", "--delta2", [&](const json& v) { cfg.delta2 = v.get<double>(); });
    take("g1", "--g1", [&](const json& v) { cfg.g1 = v.get<double>(); });
    take("g2", "--g2", [&](const json& v) { cfg.g2 = v.get<double>(); });
    take("emin", "--emin", [&](const json& v) { e_min = v.get<double>(); });
    take("emax", "--emax", [&](const json& v) { e_max = v.get<double>(); });
    take("grid_step", "--grid-step", [&](const json& v) { cfg.grid_step = v.get<double>(); });
    take("nmax", "--nmax", [&](const json& v) { cfg.n_max = v.get<int>(); });
    take("oracle_n", "--oracle-n", [&](const json& v) { cfg.oracle_n = v.get<int>(); });
    take("parity", "--parity", [&](const json& v) { cfg.parity = v.get<std::string>(); });
    take("out", "--out", [&](const json& v) { cfg.out = v.get<std::string>(); });
    take("output", "--output", [&](const json& v) { cfg.output_path = v.get<std::string>(); });
    take("match_tol", "--match-tol", [&](const json& v) { cfg.match_tol = v.get<double>(); });
    take("g_from", "--g-from", [&](const json& v) { cfg.g_from = v.get<double>(); });
    take("g_to", "--g-to", [&](const json& v) { cfg.g_to = v.get<double>(); });
    take("g_steps", "--g-steps", [&](const json& v) { cfg.g_steps = v.get<int>(); });
    take("samples", "--samples", [&](const json& v) { cfg.samples = v.get<int>(); });
}

std::vector<io::GScanRow> run_gscan(const ModelParams& p, const SolveOptions& opts, int samples,
                                    double e_min, double e_max, const TruncationConfig& trunc) {
    if (samples < 2) throw std::invalid_argument("samples must be >= 2");
    GOptions gopts;
    gopts.eps_pole = opts.eps_pole;
    gopts.tail_tol = opts.tail_tol;
    const Regime regime = classify_regime(p);
    const auto poles = pole_map(p, trunc).all();
    std::vector<io::GScanRow> rows;
    rows.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double e = e_min + (e_max - e_min) * i / (samples - 1);
        io::GScanRow row;
        row.energy = e;
        bool near_pole = false;
        for (double pole : poles) {
            if (std::abs(e - pole) < gopts.eps_pole) {
                near_pole = true;
                break;
            }
        }
        if (near_pole) {
            row.pole_flag = true;
        } else {
            const auto even = regime == Regime::general
                                  ? g_det(p, Parity::even, e, trunc, gopts)
                                  : g_equal(p, Parity::even, e, trunc, gopts);
            const auto odd = regime == Regime::general
                                 ? g_det(p, Parity::odd, e, trunc, gopts)
                                 : g_equal(p, Parity::odd, e, trunc, gopts);
            if (even.pole_adjacent || odd.pole_adjacent) {
                row.pole_flag = true;
            } else {
                row.g_even = even.value;
                row.g_odd = odd.value;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

int exit_code_for(const SpectrumResult& result) {
    return result.has_warnings ? kExitWarning : kExitOk;
}

}  // namespace

SolveOptions RunConfig::solve_options() const {
    SolveOptions opts;
    opts.e_min = e_min;
    opts.e_max = e_max;
    opts.grid_step = grid_step;
    opts.trunc.n_max = n_max;
    opts.oracle_n = oracle_n;
    opts.match_tol = match_tol;
    if (parity == "even") {
        opts.parity = ParityChoice::even;
    } else if (parity == "odd") {
        opts.parity = ParityChoice::odd;
    } else if (parity == "both") {
        opts.parity = ParityChoice::both;
    } else {
        throw std::invalid_argument("parity: expected even|odd|both");
    }
    return opts;
}

ModelParams RunConfig::params() const { return validate_params(delta1, delta2, g1, g2); }

int run(int argc, const char* const* argv) {
    CLI::App app{"Spectral solver for a cavity mode coupled to two arbitrary qubits"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    double emin_flag = 0.0, emax_flag = 0.0;

    auto add_common = [&](CLI::App* sub, bool with_window) {
        sub->add_option("--delta1", cfg.delta1, "first qubit splitting (units of the cavity)");
        sub->add_option("--delta2", cfg.delta2, "second qubit splitting");
        sub->add_option("--g1", cfg.g1, "first qubit coupling");
        sub->add_option("--g2", cfg.g2, "second qubit coupling");
        sub->add_option("--nmax", cfg.n_max, "series truncation (0 = regime default)");
        sub->add_option("--oracle-n", cfg.oracle_n, "photon cutoff of the diagonalization check");
        sub->add_option("--parity", cfg.parity, "even|odd|both")->default_str("both");
        sub->add_option("--out", cfg.out, "csv|json")->default_str("csv");
        sub->add_option("--output", cfg.output_path, "output file (default stdout)");
        sub->add_option("--config", config_path, "JSON config file (flags take precedence)");
        sub->add_option("--match-tol", cfg.match_tol, "oracle match tolerance");
        if (with_window) {
            sub->add_option("--emin", emin_flag, "window lower edge (default from couplings)");
            sub->add_option("--emax", emax_flag, "window upper edge (default 3)");
            sub->add_option("--grid-step", cfg.grid_step, "scan grid step");
        }
    };

    CLI::App* spectrum = app.add_subcommand("spectrum", "energy levels in a window");
    add_common(spectrum, true);
    CLI::App* gscan = app.add_subcommand("gscan", "table of G values over a window");
    add_common(gscan, true);
    gscan->add_option("--samples", cfg.samples, "number of energy samples");
    CLI::App* sweep = app.add_subcommand("sweep", "levels along a coupling sweep");
    add_common(sweep, true);
    sweep->add_option("--g-from", cfg.g_from, "total coupling start");
    sweep->add_option("--g-to", cfg.g_to, "total coupling end");
    sweep->add_option("--g-steps", cfg.g_steps, "sweep steps");
    CLI::App* verify = app.add_subcommand("verify", "compare solver levels against the oracle");
    add_common(verify, true);
    CLI::App* darkstate = app.add_subcommand("darkstate", "coupling-independent E=1 conditions");
    add_common(darkstate, false);

    try {
        app.parse(argc, argv);
        CLI::App* sub = app.get_subcommands().front();
        if (sub->count("--emin") > 0) cfg.e_min = emin_flag;
        if (sub->count("--emax") > 0) cfg.e_max = emax_flag;
        if (!config_path.empty()) {
            apply_config_file(*sub, config_path, cfg, cfg.e_min, cfg.e_max);
        }

        const ModelParams params = cfg.params();
        const io::OutputFormat format = io::parse_format(cfg.out);
        const SolveOptions opts = cfg.solve_options();

        if (sub == spectrum) {
            const auto result = compute_spectrum(params, opts);
            write_output(cfg.output_path, format == io::OutputFormat::csv
                                              ? io::spectrum_csv(result)
                                              : io::spectrum_json(result));
            return exit_code_for(result);
        }
        if (sub == gscan) {
            const Regime regime = classify_regime(params);
            if (regime != Regime::general && regime != Regime::equal_coupling) {
                std::cerr << "gscan: no G-function in regime " << to_string(regime) << "\n";
                return kExitUsage;
            }
            const TruncationConfig trunc = effective_trunc(opts.trunc, regime);
            const double e_min = opts.e_min.value_or(default_e_min(params));
            const double e_max = opts.e_max.value_or(3.0);
            const auto rows = run_gscan(params, opts, cfg.samples, e_min, e_max, trunc);
            SpectrumResult context;  // carries params/window/regime for the JSON header
            context.params = params;
            context.regime = regime;
            context.e_min = e_min;
            context.e_max = e_max;
            context.trunc = trunc;
            write_output(cfg.output_path, format == io::OutputFormat::csv
                                              ? io::gscan_csv(rows)
                                              : io::gscan_json(context, rows));
            return kExitOk;
        }
        if (sub == sweep) {
            const auto result = sweep_coupling(params, cfg.g_from, cfg.g_to, cfg.g_steps, opts);
            const double e_min = opts.e_min.value_or(default_e_min(params));
            const double e_max = opts.e_max.value_or(3.0);
            write_output(cfg.output_path, format == io::OutputFormat::csv
                                              ? io::sweep_csv(result, e_min, e_max)
                                              : io::sweep_json(result, e_min, e_max));
            bool warned = false;
            for (const auto& step : result.steps) warned = warned || step.result.has_warnings;
            return warned ? kExitWarning : kExitOk;
        }
        if (sub == verify) {
            SolveOptions vopts = opts;
            vopts.with_oracle = true;
            const auto result = compute_spectrum(params, vopts);
            write_output(cfg.output_path, format == io::OutputFormat::csv
                                              ? io::verify_csv(result)
                                              : io::verify_json(result));
            double worst = 0.0;
            double worst_energy = 0.0;
            bool failed = false;
            for (const auto* rep : {&result.comparison_even, &result.comparison_odd}) {
                if (!rep->has_value()) continue;
                const auto& r = **rep;
                if (r.max_abs_residual > worst) {
                    worst = r.max_abs_residual;
                    for (const auto& m : r.matched) {
                        if (std::abs(m.solver_energy - m.oracle_energy) == r.max_abs_residual) {
                            worst_energy = m.oracle_energy;
                        }
                    }
                }
                if (!r.unmatched_solver.empty() || !r.unmatched_oracle.empty()) failed = true;
            }
            if (worst >= cfg.match_tol) failed = true;
            if (failed) {
                std::cerr << "verify: FAIL, worst residual " << io::format_double(worst)
                          << " at E=" << io::format_double(worst_energy) << "\n";
                return kExitVerifyFail;
            }
            std::cerr << "verify: OK, max residual " << io::format_double(worst) << "\n";
            return kExitOk;
        }
        // darkstate
        if (classify_regime(params) != Regime::equal_coupling) {
            std::cerr << "darkstate: requires equal couplings (g1 == g2 > 0)\n";
            return kExitUsage;
        }
        if (std::abs(params.delta1 - params.delta2) <= 1e-12) {
            std::cerr << "darkstate: requires delta1 != delta2 (equal splittings give the "
                         "integer singlet ladder instead)\n";
            return kExitUsage;
        }
        const auto reports = detect_dark_states(params);
        write_output(cfg.output_path, format == io::OutputFormat::csv
                                          ? io::darkstate_csv(reports)
                                          : io::darkstate_json(params, reports));
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help();
            return kExitOk;
        }
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace qrm2::cli
