// io.hpp — deterministic CSV/JSON emission for the CLI and regression fixtures

#pragma once

#include <string>
#include <vector>

#include "qrm2/spectrum.hpp"

namespace qrm2::io {

// Shortest exact decimal form that round-trips to the same double ("%.17g"
// tightened while the value survives re-parsing).
std::string format_double(double value);

enum class OutputFormat { csv, json };
OutputFormat parse_format(const std::string& name);

struct GScanRow {
    double energy{0.0};
    double g_even{0.0};
    double g_odd{0.0};
    bool pole_flag{false};  // value columns are empty when set
};

// CSV: UTF-8, comma separators, LF endings, fixed header rows.
std::string spectrum_csv(const SpectrumResult& result);
std::string gscan_csv(const std::vector<GScanRow>& rows);
std::string sweep_csv(const SweepResult& sweep, double e_min, double e_max);
std::string verify_csv(const SpectrumResult& result);
std::string darkstate_csv(const std::vector<DarkStateReport>& reports);

// JSON: single top-level object with schema_version, params, results.
std::string spectrum_json(const SpectrumResult& result);
std::string gscan_json(const SpectrumResult& context, const std::vector<GScanRow>& rows);
std::string sweep_json(const SweepResult& sweep, double e_min, double e_max);
std::string verify_json(const SpectrumResult& result);
std::string darkstate_json(const ModelParams& p, const std::vector<DarkStateReport>& reports);

}  // namespace qrm2::io
