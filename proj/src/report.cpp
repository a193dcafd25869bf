#include "gnli/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace gnli {

std::string format_full(double value)
{
	char buffer[64];
	std::snprintf(buffer, sizeof buffer, "%.17g", value);
	return buffer;
}

std::string format_db(double value)
{
	char buffer[64];
	std::snprintf(buffer, sizeof buffer, "%.6f", value);
	return buffer;
}

namespace {

std::string format_short(double value)
{
	char buffer[64];
	std::snprintf(buffer, sizeof buffer, "%g", value);
	return buffer;
}

std::string format_tolerance(double value)
{
	char buffer[64];
	std::snprintf(buffer, sizeof buffer, "%.6e", value);
	return buffer;
}

std::string plot_file_name(const GridPoint& point)
{
	return "error_span_" + format_short(point.span_km) + "km_n" + std::to_string(point.n_spans) +
	       ".dat";
}

}  // namespace

std::string metadata_preamble(const RunConfig& config)
{
	char hash[32];
	std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a64(canonical_string(config)));
	std::ostringstream out;
	out << "# tool: gnli " << kToolVersion << "\n";
	out << "# config_hash: fnv1a64:" << hash << "\n";
	out << "# oracle: domain=" << to_string(config.oracle.domain)
	    << " rel_tol=" << format_short(config.oracle.rel_tol)
	    << " max_evals=" << config.oracle.max_evals << "\n";
	if (!config.config_path.empty()) {
		out << "# config_file: " << config.config_path << "\n";
	}
	for (const auto& o : config.overrides) {
		out << "# override: " << o.flag << "=" << o.value << "\n";
	}
	return out.str();
}

std::string format_report_csv(const std::vector<ValidationRow>& rows, const std::string& preamble)
{
	std::string out = preamble;
	out += kReportHeader;
	out += "\n";
	for (const auto& row : rows) {
		out += format_full(row.point.loss_db_per_km) + ",";
		out += format_full(row.point.span_km) + ",";
		out += std::to_string(row.point.n_spans) + ",";
		out += format_full(row.cff_psd) + ",";
		out += format_full(row.oracle_psd) + ",";
		out += format_db(row.error_db) + ",";
		out += std::string(to_string(row.branch)) + ",";
		out += format_full(row.validity.cond1_lhs) + ",";
		out += format_full(row.validity.cond2_lhs) + ",";
		out += format_full(row.validity.exp_neg_2aL) + ",";
		out += row.oracle.converged ? "true," : "false,";
		out += format_tolerance(row.oracle.rel_error) + "\n";
	}
	return out;
}

std::vector<std::pair<std::string, std::string>> format_plot_files(
    const std::vector<ValidationRow>& rows, const std::string& preamble)
{
	std::vector<std::pair<std::string, std::string>> files;
	std::map<std::string, std::size_t> index;
	for (const auto& row : rows) {
		const std::string name = plot_file_name(row.point);
		auto it = index.find(name);
		if (it == index.end()) {
			it = index.emplace(name, files.size()).first;
			std::string head = preamble;
			head += "# series: span_km=" + format_short(row.point.span_km) +
			        " n_spans=" + std::to_string(row.point.n_spans) + "\n";
			head += "# loss_db_per_km error_db\n";
			files.emplace_back(name, head);
		}
		files[it->second].second +=
		    format_full(row.point.loss_db_per_km) + " " + format_db(row.error_db) + "\n";
	}
	return files;
}

std::vector<std::filesystem::path> write_sweep_outputs(const std::filesystem::path& dir,
                                                       const std::vector<ValidationRow>& rows,
                                                       const std::string& preamble)
{
	std::filesystem::create_directories(dir);
	std::vector<std::filesystem::path> written;
	auto write = [&](const std::filesystem::path& path, const std::string& text) {
		std::ofstream file(path, std::ios::binary | std::ios::trunc);
		file << text;
		if (!file) throw std::runtime_error("cannot write " + path.string());
		written.push_back(path);
	};
	write(dir / "report.csv", format_report_csv(rows, preamble));
	for (const auto& [name, text] : format_plot_files(rows, preamble)) {
		write(dir / name, text);
	}
	return written;
}

nlohmann::ordered_json to_json(const ValidityReport<double>& validity)
{
	return {
	    {"cond1_lhs", validity.cond1_lhs},   {"cond1_holds", validity.cond1_holds},
	    {"cond2_lhs", validity.cond2_lhs},   {"cond2_holds", validity.cond2_holds},
	    {"exp_neg_2aL", validity.exp_neg_2aL},
	};
}

nlohmann::ordered_json to_json(const NliEstimate<double>& estimate)
{
	nlohmann::ordered_json out;
	out["method"] = to_string(estimate.method);
	out["psd_w_per_hz"] = estimate.psd;
	if (estimate.branch) out["branch"] = to_string(*estimate.branch);
	if (estimate.convergence) {
		out["converged"] = estimate.convergence->converged;
		out["rel_tol_achieved"] = estimate.convergence->rel_error;
		out["evaluations"] = estimate.convergence->evaluations;
	}
	return out;
}

nlohmann::ordered_json to_json(const GridPoint& point)
{
	return {{"loss_db_per_km", point.loss_db_per_km},
	        {"span_km", point.span_km},
	        {"n_spans", point.n_spans}};
}

nlohmann::ordered_json summary_json(const AcceptanceSummary& summary,
                                    const std::vector<ValidationRow>& rows,
                                    const RunConfig& config)
{
	char hash[32];
	std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a64(canonical_string(config)));

	nlohmann::ordered_json out;
	out["pass"] = summary.pass;
	out["threshold_db"] = summary.threshold_db;
	out["rows"] = summary.rows;
	out["converged_rows"] = summary.converged_rows;
	out["oracle"] = {{"domain", to_string(config.oracle.domain)},
	                 {"rel_tol", config.oracle.rel_tol},
	                 {"max_evals", config.oracle.max_evals}};
	out["oracle_guard_db"] = summary.oracle_guard_db;
	if (summary.worst) {
		const auto& row = rows.at(*summary.worst);
		out["worst"] = {{"point", to_json(row.point)},
		                {"error_db", row.error_db},
		                {"branch", to_string(row.branch)},
		                {"cff_w_per_hz", row.cff_psd},
		                {"oracle_w_per_hz", row.oracle_psd}};
	} else {
		out["worst"] = nullptr;
	}
	out["abs_error_db_quantiles"] = {{"p50", summary.quantiles[0]},
	                                 {"p90", summary.quantiles[1]},
	                                 {"p99", summary.quantiles[2]},
	                                 {"max", summary.quantiles[3]}};
	static const char* kBins[] = {"[0,0.1)",   "[0.1,0.2)", "[0.2,0.3)",
	                              "[0.3,0.4)", "[0.4,0.5)", ">=0.5"};
	nlohmann::ordered_json histogram;
	for (std::size_t i = 0; i < summary.histogram.size(); ++i) {
		histogram[kBins[i]] = summary.histogram[i];
	}
	out["abs_error_db_histogram"] = histogram;
	auto unconverged = nlohmann::ordered_json::array();
	for (auto i : summary.unconverged) {
		auto entry = to_json(rows.at(i).point);
		entry["evaluations"] = rows.at(i).oracle.evaluations;
		unconverged.push_back(entry);
	}
	out["unconverged"] = unconverged;
	out["config_hash"] = std::string("fnv1a64:") + hash;
	return out;
}

}  // namespace gnli
