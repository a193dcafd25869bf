#include "gnli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>

namespace gnli {

namespace {

const std::map<std::string, std::string>& field_to_key()
{
	static const std::map<std::string, std::string> map = {
	    {"loss_db_per_km", "fiber.loss_db_per_km"},
	    {"beta2_ps2_per_km", "fiber.beta2_ps2_per_km"},
	    {"gamma_per_w_km", "fiber.gamma_per_w_km"},
	    {"span_length", "link.span_km"},
	    {"num_spans", "link.n_spans"},
	    {"bandwidth", "spectrum.bandwidth_thz"},
	    {"psd", "spectrum.psd_w_per_thz"},
	    {"span_km", "grid.span_km"},
	    {"n_spans", "grid.n_spans"},
	    {"rel_tol", "oracle.rel_tol"},
	    {"max_evals", "oracle.max_evals"},
	};
	return map;
}

std::string trim(const std::string& text)
{
	const auto first = text.find_first_not_of(" \t\r\n");
	if (first == std::string::npos) return {};
	const auto last = text.find_last_not_of(" \t\r\n");
	return text.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& raw)
{
	const std::string text = trim(raw);
	double value = 0;
	const auto* end = text.data() + text.size();
	const auto [ptr, ec] = std::from_chars(text.data(), end, value);
	if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
		throw InputError(key, "expected a number, got '" + raw + "'");
	}
	return value;
}

std::int64_t parse_int(const std::string& key, const std::string& raw)
{
	const std::string text = trim(raw);
	std::int64_t value = 0;
	const auto* end = text.data() + text.size();
	const auto [ptr, ec] = std::from_chars(text.data(), end, value);
	if (ec != std::errc() || ptr != end) {
		// Accept integral values written in floating form, e.g. 1e9.
		const double as_double = parse_double(key, raw);
		if (as_double != std::floor(as_double) || std::abs(as_double) > 9.0e18) {
			throw InputError(key, "expected an integer, got '" + raw + "'");
		}
		return static_cast<std::int64_t>(as_double);
	}
	return value;
}

std::vector<std::string> split_list(const std::string& key, const std::string& raw)
{
	std::vector<std::string> items;
	std::stringstream stream(raw);
	std::string item;
	while (std::getline(stream, item, ',')) {
		item = trim(item);
		if (item.empty()) throw InputError(key, "empty entry in list '" + raw + "'");
		items.push_back(item);
	}
	if (items.empty()) throw InputError(key, "list is empty");
	return items;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& raw)
{
	std::vector<double> values;
	for (const auto& item : split_list(key, raw)) values.push_back(parse_double(key, item));
	return values;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& raw)
{
	std::vector<int> values;
	for (const auto& item : split_list(key, raw)) {
		const auto value = parse_int(key, item);
		if (value < 1 || value > 1'000'000) {
			throw InputError(key, "span count must be in [1, 1000000]");
		}
		values.push_back(static_cast<int>(value));
	}
	return values;
}

Domain parse_domain(const std::string& key, const std::string& raw)
{
	const std::string text = trim(raw);
	if (text == "square") return Domain::Square;
	if (text == "lozenge") return Domain::Lozenge;
	throw InputError(key, "expected 'square' or 'lozenge', got '" + raw + "'");
}

// Re-raises a domain-type error under the config key that fed it.
template <typename F>
auto with_config_keys(F&& build)
{
	try {
		return build();
	} catch (const InputError& error) {
		const auto it = field_to_key().find(error.field());
		if (it == field_to_key().end() || it->second == error.field()) throw;
		const std::string what = error.what();
		const auto colon = what.find(": ");
		throw InputError(it->second, colon == std::string::npos ? what : what.substr(colon + 2));
	}
}

std::string format_number(double value)
{
	char buffer[64];
	std::snprintf(buffer, sizeof buffer, "%.17g", value);
	return buffer;
}

}  // namespace

Fiber<double> PointSpec::fiber() const
{
	return with_config_keys(
	    [&] { return fiber_from_engineering(loss_db_per_km, beta2_ps2_per_km, gamma_per_w_km); });
}

Link<double> PointSpec::link() const
{
	return with_config_keys([&] { return link_from_km(span_km, n_spans); });
}

Spectrum<double> PointSpec::spectrum() const
{
	return with_config_keys([&] { return spectrum_from_thz(bandwidth_thz, psd_w_per_thz); });
}

const std::vector<std::string>& known_config_keys()
{
	static const std::vector<std::string> keys = {
	    "fiber.loss_db_per_km", "fiber.beta2_ps2_per_km", "fiber.gamma_per_w_km",
	    "link.span_km",         "link.n_spans",           "spectrum.bandwidth_thz",
	    "spectrum.psd_w_per_thz", "grid.loss_db_per_km",  "grid.loss_min",
	    "grid.loss_max",        "grid.loss_points",       "grid.span_km",
	    "grid.n_spans",         "oracle.domain",          "oracle.rel_tol",
	    "oracle.max_evals",     "validate.threshold_db",
	};
	return keys;
}

std::map<std::string, std::string> load_config_file(const std::string& path)
{
	boost::property_tree::ptree tree;
	try {
		boost::property_tree::ini_parser::read_ini(path, tree);
	} catch (const boost::property_tree::ini_parser_error& error) {
		throw InputError("config", error.what());
	}
	std::map<std::string, std::string> values;
	for (const auto& [section, body] : tree) {
		if (body.empty()) {
			throw InputError(section, "key outside of any section");
		}
		for (const auto& [name, leaf] : body) {
			values[section + "." + name] = leaf.get_value<std::string>();
		}
	}
	return values;
}

RunConfig build_run_config(Subcommand subcommand,
                           const std::map<std::string, std::string>& file_values,
                           const std::vector<Override>& overrides)
{
	const std::set<std::string> known(known_config_keys().begin(), known_config_keys().end());
	std::map<std::string, std::string> values;
	for (const auto& [key, value] : file_values) {
		if (!known.count(key)) throw InputError(key, "unknown configuration key");
		values[key] = value;
	}
	for (const auto& o : overrides) {
		if (!known.count(o.key)) throw InputError(o.key, "unknown configuration key");
		values[o.key] = o.value;
	}
	auto get = [&](const std::string& key) -> std::optional<std::string> {
		const auto it = values.find(key);
		if (it == values.end()) return std::nullopt;
		return it->second;
	};

	RunConfig config;
	config.subcommand = subcommand;
	config.overrides = overrides;

	if (auto v = get("oracle.domain")) config.oracle.domain = parse_domain("oracle.domain", *v);
	if (auto v = get("oracle.rel_tol")) config.oracle.rel_tol = parse_double("oracle.rel_tol", *v);
	if (auto v = get("oracle.max_evals")) {
		config.oracle.max_evals = parse_int("oracle.max_evals", *v);
	}
	with_config_keys([&] {
		validate(config.oracle);
		return 0;
	});
	if (auto v = get("validate.threshold_db")) {
		config.threshold_db = parse_double("validate.threshold_db", *v);
		if (config.threshold_db < 0) {
			throw InputError("validate.threshold_db", "threshold must be >= 0");
		}
	}

	if (subcommand == Subcommand::Evaluate) {
		auto require = [&](const std::string& key) {
			auto v = get(key);
			if (!v) throw InputError(key, "required for evaluate but not set");
			return *v;
		};
		PointSpec point;
		point.loss_db_per_km = parse_double("fiber.loss_db_per_km", require("fiber.loss_db_per_km"));
		point.beta2_ps2_per_km =
		    parse_double("fiber.beta2_ps2_per_km", require("fiber.beta2_ps2_per_km"));
		point.gamma_per_w_km = parse_double("fiber.gamma_per_w_km", require("fiber.gamma_per_w_km"));
		point.span_km = parse_double("link.span_km", require("link.span_km"));
		const auto n = parse_int("link.n_spans", require("link.n_spans"));
		if (n < 1 || n > 1'000'000) throw InputError("link.n_spans", "span count must be in [1, 1000000]");
		point.n_spans = static_cast<int>(n);
		point.bandwidth_thz = parse_double("spectrum.bandwidth_thz", require("spectrum.bandwidth_thz"));
		point.psd_w_per_thz = parse_double("spectrum.psd_w_per_thz", require("spectrum.psd_w_per_thz"));
		point.fiber();
		point.link();
		point.spectrum();
		config.point = point;
		return config;
	}

	SweepGrid& grid = config.grid;
	if (auto v = get("fiber.beta2_ps2_per_km")) {
		grid.beta2_ps2_per_km = parse_double("fiber.beta2_ps2_per_km", *v);
	}
	if (auto v = get("fiber.gamma_per_w_km")) {
		grid.gamma_per_w_km = parse_double("fiber.gamma_per_w_km", *v);
	}
	if (auto v = get("spectrum.bandwidth_thz")) {
		grid.bandwidth_thz = parse_double("spectrum.bandwidth_thz", *v);
	}
	if (auto v = get("spectrum.psd_w_per_thz")) {
		grid.psd_w_per_thz = parse_double("spectrum.psd_w_per_thz", *v);
	}
	const bool has_range = get("grid.loss_min") || get("grid.loss_max") || get("grid.loss_points");
	if (auto v = get("grid.loss_db_per_km")) {
		if (has_range) {
			throw InputError("grid.loss_db_per_km", "give either a loss list or loss_min/max/points");
		}
		grid.loss_db_per_km = parse_double_list("grid.loss_db_per_km", *v);
	} else if (has_range) {
		const double lo = parse_double("grid.loss_min", get("grid.loss_min").value_or("5e-4"));
		const double hi = parse_double("grid.loss_max", get("grid.loss_max").value_or("0.3"));
		const auto count = parse_int("grid.loss_points", get("grid.loss_points").value_or("24"));
		if (!(lo > 0) || !(hi >= lo)) throw InputError("grid.loss_min", "need 0 < loss_min <= loss_max");
		if (count < 1 || count > 100000) throw InputError("grid.loss_points", "need 1..100000 points");
		grid.loss_db_per_km = log_space(lo, hi, static_cast<std::size_t>(count));
	}
	if (auto v = get("grid.span_km")) grid.span_lengths_km = parse_double_list("grid.span_km", *v);
	if (auto v = get("grid.n_spans")) grid.n_spans = parse_int_list("grid.n_spans", *v);

	try {
		validate(grid);
	} catch (const InputError& error) {
		static const std::map<std::string, std::string> grid_keys = {
		    {"loss_db_per_km", "grid.loss_db_per_km"}, {"span_km", "grid.span_km"},
		    {"n_spans", "grid.n_spans"},                {"beta2_ps2_per_km", "fiber.beta2_ps2_per_km"},
		    {"gamma_per_w_km", "fiber.gamma_per_w_km"}, {"bandwidth", "spectrum.bandwidth_thz"},
		    {"psd", "spectrum.psd_w_per_thz"},
		};
		const auto it = grid_keys.find(error.field());
		if (it == grid_keys.end()) throw;
		const std::string what = error.what();
		throw InputError(it->second, what.substr(what.find(": ") + 2));
	}
	return config;
}

std::string canonical_string(const RunConfig& config)
{
	std::ostringstream out;
	auto list = [&](const auto& values) {
		std::string text;
		for (std::size_t i = 0; i < values.size(); ++i) {
			if (i) text += ",";
			text += format_number(static_cast<double>(values[i]));
		}
		return text;
	};
	out << "oracle.domain=" << to_string(config.oracle.domain) << "\n";
	out << "oracle.rel_tol=" << format_number(config.oracle.rel_tol) << "\n";
	out << "oracle.max_evals=" << config.oracle.max_evals << "\n";
	out << "validate.threshold_db=" << format_number(config.threshold_db) << "\n";
	if (config.point) {
		const auto& p = *config.point;
		out << "fiber.loss_db_per_km=" << format_number(p.loss_db_per_km) << "\n";
		out << "fiber.beta2_ps2_per_km=" << format_number(p.beta2_ps2_per_km) << "\n";
		out << "fiber.gamma_per_w_km=" << format_number(p.gamma_per_w_km) << "\n";
		out << "link.span_km=" << format_number(p.span_km) << "\n";
		out << "link.n_spans=" << p.n_spans << "\n";
		out << "spectrum.bandwidth_thz=" << format_number(p.bandwidth_thz) << "\n";
		out << "spectrum.psd_w_per_thz=" << format_number(p.psd_w_per_thz) << "\n";
	} else {
		const auto& g = config.grid;
		out << "fiber.beta2_ps2_per_km=" << format_number(g.beta2_ps2_per_km) << "\n";
		out << "fiber.gamma_per_w_km=" << format_number(g.gamma_per_w_km) << "\n";
		out << "spectrum.bandwidth_thz=" << format_number(g.bandwidth_thz) << "\n";
		out << "spectrum.psd_w_per_thz=" << format_number(g.psd_w_per_thz) << "\n";
		out << "grid.loss_db_per_km=" << list(g.loss_db_per_km) << "\n";
		out << "grid.span_km=" << list(g.span_lengths_km) << "\n";
		out << "grid.n_spans=" << list(g.n_spans) << "\n";
	}
	return out.str();
}

std::uint64_t fnv1a64(const std::string& text)
{
	std::uint64_t hash = 14695981039346656037ull;
	for (unsigned char c : text) {
		hash ^= c;
		hash *= 1099511628211ull;
	}
	return hash;
}

std::string to_string(Domain domain)
{
	return domain == Domain::Square ? "square" : "lozenge";
}

}  // namespace gnli
