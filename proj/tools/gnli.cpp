// gnli: center-of-comb NLI PSD from the closed forms, sweeps against the
// numerical GN integral, and acceptance checks.
//
//   gnli evaluate --loss-db-km 0.2 --beta2 -21 --gamma 1.2 --span-km 100
//                 --n-spans 10 --bandwidth-thz 5 --psd-w-per-thz 1 [--json] [--oracle]
//   gnli sweep    [--config FILE] [--out DIR] [overrides...]
//   gnli validate [--config FILE] [--out DIR] [--threshold-db X] [overrides...]
//
// Exit codes: 0 ok/pass, 1 acceptance failed, 2 oracle did not converge,
// 64 configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gnli/closed_form.hpp"
#include "gnli/config.hpp"
#include "gnli/oracle.hpp"
#include "gnli/report.hpp"
#include "gnli/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAcceptanceFailed = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitConfigError = 64;

struct FlagBinding {
	std::string flag;
	std::string point_key;  // evaluate
	std::string grid_key;   // sweep / validate
	std::string help;
	std::optional<std::string> value;
};

std::vector<FlagBinding> make_bindings()
{
	return {
	    {"--loss-db-km", "fiber.loss_db_per_km", "grid.loss_db_per_km",
	     "Fiber loss, dB/km (comma list for sweeps)", {}},
	    {"--span-km", "link.span_km", "grid.span_km", "Span length, km (comma list for sweeps)", {}},
	    {"--n-spans", "link.n_spans", "grid.n_spans", "Number of spans (comma list for sweeps)", {}},
	    {"--gamma", "fiber.gamma_per_w_km", "fiber.gamma_per_w_km", "Nonlinearity, 1/(W km)", {}},
	    {"--beta2", "fiber.beta2_ps2_per_km", "fiber.beta2_ps2_per_km", "Dispersion, ps^2/km", {}},
	    {"--bandwidth-thz", "spectrum.bandwidth_thz", "spectrum.bandwidth_thz",
	     "Comb bandwidth, THz", {}},
	    {"--psd-w-per-thz", "spectrum.psd_w_per_thz", "spectrum.psd_w_per_thz",
	     "Comb PSD, W/THz", {}},
	    {"--domain", "oracle.domain", "oracle.domain", "Oracle domain: square or lozenge", {}},
	    {"--rel-tol", "oracle.rel_tol", "oracle.rel_tol", "Oracle relative tolerance", {}},
	    {"--max-evals", "oracle.max_evals", "oracle.max_evals", "Oracle evaluation budget", {}},
	    {"--threshold-db", "validate.threshold_db", "validate.threshold_db",
	     "Acceptance threshold, dB", {}},
	};
}

void print_text_estimate(const char* label, const gnli::NliEstimate<double>& estimate)
{
	std::printf("  %-16s %.10e W/Hz\n", label, estimate.psd);
}

int run_evaluate(const gnli::RunConfig& config)
{
	const auto& point = *config.point;
	const auto fiber = point.fiber();
	const auto link = point.link();
	const auto spectrum = point.spectrum();

	std::optional<gnli::NliEstimate<double>> high_loss;
	std::vector<std::string> notes;
	if (fiber.alpha > 0) {
		high_loss = gnli::cff_high_loss(fiber, link, spectrum);
	} else {
		notes.emplace_back("HighLoss8 omitted: diverges at zero fiber loss");
	}
	const auto single = gnli::cff_single_span(fiber, link, spectrum);
	const auto generalized = gnli::cff_generalized(fiber, link, spectrum);
	const auto incoherent = gnli::cff_incoherent(fiber, link, spectrum);
	const auto combined = gnli::cff_combined(fiber, link, spectrum);
	const auto eff = gnli::eff_params_multi(fiber, link.span_length, link.num_spans);

	std::optional<gnli::NliEstimate<double>> oracle;
	if (config.with_oracle) {
		oracle = gnli::gn_numeric(fiber, link, spectrum, config.oracle);
	}

	if (config.json) {
		nlohmann::ordered_json out;
		out["inputs"] = {{"loss_db_per_km", point.loss_db_per_km},
		                 {"beta2_ps2_per_km", point.beta2_ps2_per_km},
		                 {"gamma_per_w_km", point.gamma_per_w_km},
		                 {"span_km", point.span_km},
		                 {"n_spans", point.n_spans},
		                 {"bandwidth_thz", point.bandwidth_thz},
		                 {"psd_w_per_thz", point.psd_w_per_thz},
		                 {"span_loss_db", gnli::span_loss_db(fiber, link)}};
		nlohmann::ordered_json estimates;
		if (high_loss) estimates["HighLoss8"] = high_loss->psd;
		estimates["SingleSpan20"] = single.psd;
		estimates["Generalized28"] = generalized.psd;
		estimates["Incoherent29"] = incoherent.psd;
		estimates["Combined30"] = combined.psd;
		out["estimates_w_per_hz"] = estimates;
		out["combined"] = gnli::to_json(combined);
		out["effective"] = {{"alpha_eq_per_m", eff.alpha_eq}, {"a_eq", eff.a_eq}};
		out["validity"] = gnli::to_json(combined.validity);
		if (oracle) {
			auto o = gnli::to_json(*oracle);
			o["domain"] = gnli::to_string(config.oracle.domain);
			o["error_db"] = oracle->psd > 0 ? gnli::error_db(combined.psd, oracle->psd) : 0.0;
			out["oracle"] = o;
		}
		out["notes"] = notes;
		std::cout << out.dump(2) << "\n";
	} else {
		std::printf("NLI PSD at comb center (span loss %.6g dB, %d span%s)\n",
		            gnli::span_loss_db(fiber, link), link.num_spans, link.num_spans == 1 ? "" : "s");
		if (high_loss) print_text_estimate("HighLoss8", *high_loss);
		print_text_estimate("SingleSpan20", single);
		print_text_estimate("Generalized28", generalized);
		print_text_estimate("Incoherent29", incoherent);
		print_text_estimate("Combined30", combined);
		std::printf("  branch           %s\n", std::string(gnli::to_string(*combined.branch)).c_str());
		std::printf("  alpha_eq         %.10e 1/m\n  A_eq             %.10f\n", eff.alpha_eq, eff.a_eq);
		const auto& v = combined.validity;
		std::printf("  cond1 |pi L b2 B^2| = %.6g (%s < 2)\n", v.cond1_lhs, v.cond1_holds ? "holds" : "fails");
		std::printf("  cond2 alpha L       = %.6g (%s < %.2g)\n", v.cond2_lhs,
		            v.cond2_holds ? "holds" : "fails", gnli::kCond2Threshold);
		std::printf("  exp(-2 alpha L)     = %.6g\n", v.exp_neg_2aL);
		if (oracle) {
			std::printf("  oracle (%s)   %.10e W/Hz, %s, rel err %.2e, error %.6f dB\n",
			            gnli::to_string(config.oracle.domain).c_str(), oracle->psd,
			            oracle->convergence->converged ? "converged" : "NOT converged",
			            oracle->convergence->rel_error,
			            oracle->psd > 0 ? gnli::error_db(combined.psd, oracle->psd) : 0.0);
		}
		for (const auto& note : notes) std::printf("  note: %s\n", note.c_str());
	}
	if (oracle && !oracle->convergence->converged) return kExitNotConverged;
	return kExitOk;
}

bool any_unconverged(const std::vector<gnli::ValidationRow>& rows)
{
	for (const auto& row : rows) {
		if (!row.oracle.converged) return true;
	}
	return false;
}

int run_sweep(const gnli::RunConfig& config)
{
	const auto rows = gnli::run_sweep(config.grid, config.oracle, config.threads);
	const auto written =
	    gnli::write_sweep_outputs(config.out_dir, rows, gnli::metadata_preamble(config));
	std::printf("%zu rows, %zu files written to %s\n", rows.size(), written.size(),
	            config.out_dir.c_str());
	return any_unconverged(rows) ? kExitNotConverged : kExitOk;
}

int run_validate(const gnli::RunConfig& config)
{
	const auto rows = gnli::run_sweep(config.grid, config.oracle, config.threads);
	const auto summary = gnli::check_acceptance(rows, config.threshold_db);
	const auto json = gnli::summary_json(summary, rows, config);
	const std::string text = json.dump(2) + "\n";
	std::filesystem::create_directories(config.out_dir);
	const auto path = std::filesystem::path(config.out_dir) / "summary.json";
	std::ofstream(path, std::ios::binary | std::ios::trunc) << text;
	gnli::write_sweep_outputs(config.out_dir, rows, gnli::metadata_preamble(config));
	std::cout << text;
	if (!summary.pass) return kExitAcceptanceFailed;
	if (!summary.unconverged.empty()) return kExitNotConverged;
	return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Center-of-comb GN-model NLI PSD: closed forms, numerical reference, validation"};
	app.require_subcommand(1);

	std::string config_path;
	std::string out_dir = ".";
	bool json = false;
	bool with_oracle = false;
	unsigned threads = 0;
	auto bindings = make_bindings();

	auto add_common = [&](CLI::App* sub) {
		sub->add_option("--config", config_path, "INI config file")->check(CLI::ExistingFile);
		sub->add_option("--out", out_dir, "Output directory");
		sub->add_option("--threads", threads, "Worker threads (0 = all cores)");
		for (auto& b : bindings) sub->add_option(b.flag, b.value, b.help);
	};
	auto* evaluate = app.add_subcommand("evaluate", "Evaluate every closed form at one link");
	add_common(evaluate);
	evaluate->add_flag("--json", json, "Machine-readable output");
	evaluate->add_flag("--oracle", with_oracle, "Also run the numerical oracle");
	auto* sweep = app.add_subcommand("sweep", "Sweep loss/span grid, write report.csv and plot data");
	add_common(sweep);
	auto* validate = app.add_subcommand("validate", "Sweep and check the error bound");
	add_common(validate);

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		const int code = app.exit(e);
		return code == 0 ? kExitOk : kExitConfigError;
	}

	const gnli::Subcommand subcommand = evaluate->parsed() ? gnli::Subcommand::Evaluate
	                                    : sweep->parsed()  ? gnli::Subcommand::Sweep
	                                                       : gnli::Subcommand::Validate;
	gnli::RunConfig config;
	try {
		std::map<std::string, std::string> file_values;
		if (!config_path.empty()) file_values = gnli::load_config_file(config_path);
		std::vector<gnli::Override> overrides;
		for (const auto& b : bindings) {
			if (!b.value) continue;
			const auto& key = subcommand == gnli::Subcommand::Evaluate ? b.point_key : b.grid_key;
			overrides.push_back({b.flag, key, *b.value});
		}
		config = gnli::build_run_config(subcommand, file_values, overrides);
	} catch (const gnli::InputError& e) {
		std::cerr << "config error: " << e.what() << "\n";
		return kExitConfigError;
	}
	config.config_path = config_path;
	config.out_dir = out_dir;
	config.json = json;
	config.with_oracle = with_oracle;
	config.threads = threads;

	if (subcommand != gnli::Subcommand::Evaluate) {
		std::error_code ec;
		std::filesystem::create_directories(out_dir, ec);
		const auto probe = std::filesystem::path(out_dir) / ".gnli-write-probe";
		std::ofstream probe_file(probe);
		if (ec || !probe_file) {
			std::cerr << "config error: out: directory '" << out_dir << "' is not writable\n";
			return kExitConfigError;
		}
		probe_file.close();
		std::filesystem::remove(probe, ec);
	}

	try {
		switch (subcommand) {
			case gnli::Subcommand::Evaluate: return run_evaluate(config);
			case gnli::Subcommand::Sweep: return run_sweep(config);
			case gnli::Subcommand::Validate: return run_validate(config);
		}
	} catch (const gnli::InputError& e) {
		std::cerr << "config error: " << e.what() << "\n";
		return kExitConfigError;
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << "\n";
		return 3;
	}
	return kExitOk;
}
