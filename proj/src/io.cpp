#include "qrm2/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qrm2::io {

using nlohmann::json;

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw std::invalid_argument("out: expected 'csv' or 'json', got '" + name + "'");
}

namespace {

json params_json(const ModelParams& p) {
    return {{"delta1", p.delta1},
            {"delta2", p.delta2},
            {"g1", p.g1},
            {"g2", p.g2},
            {"omega", ModelParams::omega},
            {"sign_flipped", p.sign_flipped}};
}

json level_json(const EnergyLevel& level) {
    json j{{"energy", level.energy},
           {"parity", to_string(level.parity)},
           {"kind", to_string(level.kind)},
           {"n_max_used", level.n_max_used},
           {"degenerate", level.degenerate},
           {"warning", level.warning}};
    if (std::isfinite(level.r_nc)) j["r_nc"] = level.r_nc;
    j["coeff_decay"] = level.coeff_decay;
    return j;
}

json result_json(const SpectrumResult& result) {
    json j;
    j["regime"] = to_string(result.regime);
    j["window"] = {{"e_min", result.e_min}, {"e_max", result.e_max}};
    j["n_max"] = result.trunc.n_max;
    j["oracle_only"] = result.oracle_only;
    if (!result.notice.empty()) j["notice"] = result.notice;
    j["levels"] = json::array();
    for (const auto& level : result.levels) j["levels"].push_back(level_json(level));
    j["rejected_zeros"] = json::array();
    for (const auto& rz : result.rejected_zeros) {
        json r{{"energy", rz.energy},
               {"parity", to_string(rz.parity)},
               {"drift", std::isfinite(rz.drift) ? json(rz.drift) : json("inf")},
               {"coeff_decay", rz.coeff_decay},
               {"pole_drift", rz.pole_drift}};
        if (std::isfinite(rz.r_nc)) r["r_nc"] = rz.r_nc;
        j["rejected_zeros"].push_back(r);
    }
    j["exceptional_candidates"] = json::array();
    for (const auto& c : result.exceptional) {
        j["exceptional_candidates"].push_back({{"energy", c.energy},
                                               {"family", std::string(1, c.family)},
                                               {"index", c.index},
                                               {"is_eigenvalue", c.is_eigenvalue},
                                               {"oracle_gap", c.oracle_gap}});
    }
    auto comparison_json = [](const oracle::ComparisonReport& rep) {
        json c;
        c["max_abs_residual"] = rep.max_abs_residual;
        c["mean_abs_residual"] = rep.mean_abs_residual;
        c["matched"] = json::array();
        for (const auto& m : rep.matched) {
            c["matched"].push_back({{"solver", m.solver_energy}, {"oracle", m.oracle_energy}});
        }
        c["unmatched_solver"] = rep.unmatched_solver;
        c["unmatched_oracle"] = rep.unmatched_oracle;
        return c;
    };
    if (result.comparison_even) j["comparison_even"] = comparison_json(*result.comparison_even);
    if (result.comparison_odd) j["comparison_odd"] = comparison_json(*result.comparison_odd);
    j["has_warnings"] = result.has_warnings;
    return j;
}

json top_level(const std::string& command, const ModelParams& p, json results) {
    return {{"schema_version", 1},
            {"command", command},
            {"params", params_json(p)},
            {"results", std::move(results)}};
}

}  // namespace

std::string spectrum_csv(const SpectrumResult& result) {
    std::ostringstream out;
    out << "energy,parity,kind,r_nc,coeff_decay,n_max_used,degenerate,warning\n";
    for (const auto& level : result.levels) {
        out << format_double(level.energy) << ',' << to_string(level.parity) << ','
            << to_string(level.kind) << ',' << format_double(level.r_nc) << ','
            << format_double(level.coeff_decay) << ',' << level.n_max_used << ','
            << (level.degenerate ? 1 : 0) << ',' << (level.warning ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string gscan_csv(const std::vector<GScanRow>& rows) {
    std::ostringstream out;
    out << "energy,g_even,g_odd,pole_flag\n";
    for (const auto& row : rows) {
        out << format_double(row.energy) << ',';
        if (row.pole_flag) {
            out << ",,1\n";
        } else {
            out << format_double(row.g_even) << ',' << format_double(row.g_odd) << ",0\n";
        }
    }
    return out.str();
}

std::string sweep_csv(const SweepResult& sweep, double e_min, double e_max) {
    std::ostringstream out;
    out << "g,parity,level_index,energy,kind,continuity_ok\n";
    for (const auto& step : sweep.steps) {
        int index_even = 0, index_odd = 0;
        for (const auto& level : step.result.levels) {
            int& index = level.parity == Parity::even ? index_even : index_odd;
            out << format_double(step.g_total) << ',' << to_string(level.parity) << ',' << index++
                << ',' << format_double(level.energy) << ',' << to_string(level.kind) << ','
                << (step.continuity_ok ? 1 : 0) << '\n';
        }
    }
    // reference rows marking the integer energies (the dashed lines of level
    // diagrams); level_index -1, g -1
    const int m_lo = std::max(0, static_cast<int>(std::ceil(e_min)));
    for (int m = m_lo; m <= static_cast<int>(std::floor(e_max)); ++m) {
        out << "-1,both,-1," << format_double(static_cast<double>(m)) << ",reference,1\n";
    }
    return out.str();
}

std::string verify_csv(const SpectrumResult& result) {
    std::ostringstream out;
    out << "parity,status,solver_energy,oracle_energy,residual\n";
    auto emit = [&](Parity parity, const oracle::ComparisonReport& rep) {
        for (const auto& m : rep.matched) {
            out << to_string(parity) << ",matched," << format_double(m.solver_energy) << ','
                << format_double(m.oracle_energy) << ','
                << format_double(std::abs(m.solver_energy - m.oracle_energy)) << '\n';
        }
        for (double e : rep.unmatched_solver) {
            out << to_string(parity) << ",unmatched_solver," << format_double(e) << ",,\n";
        }
        for (double e : rep.unmatched_oracle) {
            out << to_string(parity) << ",unmatched_oracle,," << format_double(e) << ",\n";
        }
    };
    if (result.comparison_even) emit(Parity::even, *result.comparison_even);
    if (result.comparison_odd) emit(Parity::odd, *result.comparison_odd);
    return out.str();
}

std::string darkstate_csv(const std::vector<DarkStateReport>& reports) {
    std::ostringstream out;
    out << "parity,condition_residual,active\n";
    for (const auto& r : reports) {
        out << to_string(r.parity) << ',' << format_double(r.condition_residual) << ','
            << (r.active ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string spectrum_json(const SpectrumResult& result) {
    return top_level("spectrum", result.params, result_json(result)).dump(2) + "\n";
}

std::string gscan_json(const SpectrumResult& context, const std::vector<GScanRow>& rows) {
    json samples = json::array();
    for (const auto& row : rows) {
        json r{{"energy", row.energy}, {"pole_flag", row.pole_flag}};
        if (!row.pole_flag) {
            r["g_even"] = row.g_even;
            r["g_odd"] = row.g_odd;
        }
        samples.push_back(r);
    }
    json results{{"regime", to_string(context.regime)},
                 {"window", {{"e_min", context.e_min}, {"e_max", context.e_max}}},
                 {"n_max", context.trunc.n_max},
                 {"samples", std::move(samples)}};
    return top_level("gscan", context.params, std::move(results)).dump(2) + "\n";
}

std::string sweep_json(const SweepResult& sweep, double e_min, double e_max) {
    if (sweep.steps.empty()) throw std::invalid_argument("sweep_json: empty sweep");
    json steps = json::array();
    for (const auto& step : sweep.steps) {
        json levels = json::array();
        for (const auto& level : step.result.levels) levels.push_back(level_json(level));
        steps.push_back({{"g", step.g_total},
                         {"continuity_ok", step.continuity_ok},
                         {"levels", std::move(levels)}});
    }
    json reference = json::array();
    const int m_lo = std::max(0, static_cast<int>(std::ceil(e_min)));
    for (int m = m_lo; m <= static_cast<int>(std::floor(e_max)); ++m) reference.push_back(m);
    json results{{"window", {{"e_min", e_min}, {"e_max", e_max}}},
                 {"steps", std::move(steps)},
                 {"reference_energies", std::move(reference)}};
    return top_level("sweep", sweep.steps.front().result.params, std::move(results)).dump(2) +
           "\n";
}

std::string verify_json(const SpectrumResult& result) {
    return top_level("verify", result.params, result_json(result)).dump(2) + "\n";
}

std::string darkstate_json(const ModelParams& p, const std::vector<DarkStateReport>& reports) {
    json rows = json::array();
    for (const auto& r : reports) {
        rows.push_back({{"parity", to_string(r.parity)},
                        {"condition_residual", r.condition_residual},
                        {"active", r.active}});
    }
    return top_level("darkstate", p, json{{"conditions", std::move(rows)}}).dump(2) + "\n";
}

}  // namespace qrm2::io
