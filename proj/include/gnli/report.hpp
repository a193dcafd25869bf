#pragma once

// Output formats: report CSV, per-series plot data, JSON documents. Every
// text file starts with '#' metadata lines so it stays machine-readable.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gnli/config.hpp"
#include "gnli/estimate.hpp"
#include "gnli/validation.hpp"

namespace gnli {

inline constexpr const char* kToolVersion = "0.1.0";

inline constexpr const char* kReportHeader =
    "loss_db_per_km,span_km,n_spans,gnli_cff_w_per_hz,gnli_oracle_w_per_hz,error_db,branch,"
    "cond1_lhs,cond2_lhs,exp_neg_2aL,oracle_converged,oracle_rel_tol_achieved";

/// '#'-prefixed lines: tool version, config hash, oracle settings, and every
/// command-line override verbatim.
std::string metadata_preamble(const RunConfig& config);

/// Full report: preamble, header, one line per row.
std::string format_report_csv(const std::vector<ValidationRow>& rows, const std::string& preamble);

/// One "loss_db_per_km error_db" series per (span length, span count), keyed
/// by file name, in first-appearance order.
std::vector<std::pair<std::string, std::string>> format_plot_files(
    const std::vector<ValidationRow>& rows, const std::string& preamble);

/// Writes report.csv and the plot files into `dir`; returns the paths written.
std::vector<std::filesystem::path> write_sweep_outputs(const std::filesystem::path& dir,
                                                       const std::vector<ValidationRow>& rows,
                                                       const std::string& preamble);

nlohmann::ordered_json to_json(const ValidityReport<double>& validity);
nlohmann::ordered_json to_json(const NliEstimate<double>& estimate);
nlohmann::ordered_json to_json(const GridPoint& point);
nlohmann::ordered_json summary_json(const AcceptanceSummary& summary,
                                    const std::vector<ValidationRow>& rows,
                                    const RunConfig& config);

/// "%.17g"
std::string format_full(double value);
/// "%.6f"
std::string format_db(double value);

}  // namespace gnli
