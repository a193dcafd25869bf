#pragma once

// Run configuration for the command-line tool. Values come from an optional
// INI-style file (sections fiber, link, spectrum, grid, oracle, validate) and
// from command-line overrides, which win. Keys are "section.name".

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gnli/core.hpp"
#include "gnli/oracle.hpp"
#include "gnli/validation.hpp"

namespace gnli {

enum class Subcommand { Evaluate, Sweep, Validate };

/// A single link to evaluate, in engineering units.
struct PointSpec {
	double loss_db_per_km = 0;
	double beta2_ps2_per_km = 0;
	double gamma_per_w_km = 0;
	double span_km = 0;
	int n_spans = 1;
	double bandwidth_thz = 0;
	double psd_w_per_thz = 0;

	Fiber<double> fiber() const;
	Link<double> link() const;
	Spectrum<double> spectrum() const;
};

/// A command-line override as typed, e.g. {"--span-km", "100"}.
struct Override {
	std::string flag;
	std::string key;
	std::string value;
};

struct RunConfig {
	Subcommand subcommand = Subcommand::Evaluate;
	std::string config_path;
	std::string out_dir = ".";
	bool json = false;
	bool with_oracle = false;
	unsigned threads = 0;

	std::optional<PointSpec> point;  // Evaluate only
	SweepGrid grid;
	OracleConfig oracle;
	double threshold_db = 0.5;
	std::vector<Override> overrides;
};

/// Every key a config file or override may set.
const std::vector<std::string>& known_config_keys();

/// Reads an INI file into "section.key" -> raw value. Throws InputError on
/// unreadable or malformed input.
std::map<std::string, std::string> load_config_file(const std::string& path);

/// Merges file values and overrides, type-checks them and validates every
/// derived domain object. Throws InputError naming the first bad key; nothing
/// is computed before this succeeds.
RunConfig build_run_config(Subcommand subcommand,
                           const std::map<std::string, std::string>& file_values,
                           const std::vector<Override>& overrides);

/// Stable text form of everything that affects results (not threads, not
/// output location). Hashed into report metadata.
std::string canonical_string(const RunConfig& config);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& text);

std::string to_string(Domain domain);

}  // namespace gnli
