#include "gnli/validation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "gnli/closed_form.hpp"

namespace gnli {

std::vector<double> log_space(double lo, double hi, std::size_t count)
{
	if (!(lo > 0) || !(hi >= lo) || count == 0) {
		throw std::invalid_argument("log_space needs 0 < lo <= hi and count > 0");
	}
	std::vector<double> values(count);
	if (count == 1) {
		values[0] = lo;
		return values;
	}
	const double ratio = std::log(hi / lo);
	for (std::size_t i = 0; i < count; ++i) {
		values[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1));
	}
	values.front() = lo;
	values.back() = hi;
	return values;
}

void validate(const SweepGrid& grid)
{
	if (grid.loss_db_per_km.empty()) throw InputError("loss_db_per_km", "list is empty");
	if (grid.span_lengths_km.empty()) throw InputError("span_km", "list is empty");
	if (grid.n_spans.empty()) throw InputError("n_spans", "list is empty");
	for (double loss : grid.loss_db_per_km) {
		if (!(loss >= 0) || !std::isfinite(loss)) {
			throw InputError("loss_db_per_km", "loss must be finite and >= 0");
		}
	}
	for (double span : grid.span_lengths_km) {
		if (!(span > 0) || !std::isfinite(span)) {
			throw InputError("span_km", "span length must be finite and > 0");
		}
	}
	for (int n : grid.n_spans) {
		if (n < 1) throw InputError("n_spans", "number of spans must be >= 1");
	}
	fiber_from_engineering(0.0, grid.beta2_ps2_per_km, grid.gamma_per_w_km);
	spectrum_from_thz(grid.bandwidth_thz, grid.psd_w_per_thz);
}

std::vector<GridPoint> grid_points(const SweepGrid& grid)
{
	std::vector<GridPoint> points;
	points.reserve(grid.size());
	for (double span : grid.span_lengths_km) {
		for (int n : grid.n_spans) {
			for (double loss : grid.loss_db_per_km) {
				points.push_back({loss, span, n});
			}
		}
	}
	return points;
}

double error_db(double cff, double oracle)
{
	if (!(cff > 0) || !(oracle > 0)) {
		throw std::invalid_argument("error_db needs two positive PSDs");
	}
	return 10 * std::log10(cff / oracle);
}

ValidationRow evaluate_point(const SweepGrid& grid, const GridPoint& point,
                             const OracleConfig& config)
{
	const auto fiber =
	    fiber_from_engineering(point.loss_db_per_km, grid.beta2_ps2_per_km, grid.gamma_per_w_km);
	const auto link = link_from_km(point.span_km, point.n_spans);
	const auto spectrum = spectrum_from_thz(grid.bandwidth_thz, grid.psd_w_per_thz);

	const auto combined = cff_combined(fiber, link, spectrum);
	const auto oracle = gn_numeric(fiber, link, spectrum, config);

	ValidationRow row;
	row.point = point;
	row.cff_psd = combined.psd;
	row.oracle_psd = oracle.psd;
	row.error_db = oracle.psd > 0 ? error_db(combined.psd, oracle.psd)
	                              : std::numeric_limits<double>::quiet_NaN();
	row.branch = *combined.branch;
	row.incoherent_psd = cff_incoherent(fiber, link, spectrum).psd;
	row.generalized_psd = cff_generalized(fiber, link, spectrum).psd;
	row.validity = combined.validity;
	row.oracle = *oracle.convergence;
	return row;
}

std::vector<ValidationRow> run_sweep(const SweepGrid& grid, const OracleConfig& config,
                                     unsigned threads)
{
	validate(grid);
	validate(config);
	const auto points = grid_points(grid);
	std::vector<ValidationRow> rows(points.size());

	if (threads == 0) {
		threads = std::max(1u, std::thread::hardware_concurrency());
	}
	threads = static_cast<unsigned>(std::min<std::size_t>(threads, points.size()));

	std::atomic<std::size_t> next{0};
	std::exception_ptr failure;
	std::mutex failure_mutex;
	auto worker = [&] {
		for (std::size_t i = next++; i < points.size(); i = next++) {
			try {
				rows[i] = evaluate_point(grid, points[i], config);
			} catch (...) {
				std::lock_guard lock(failure_mutex);
				if (!failure) failure = std::current_exception();
			}
		}
	};
	if (threads <= 1) {
		worker();
	} else {
		std::vector<std::jthread> pool;
		for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
	}
	if (failure) std::rethrow_exception(failure);
	return rows;
}

AcceptanceSummary check_acceptance(const std::vector<ValidationRow>& rows, double threshold_db)
{
	if (rows.empty()) {
		throw std::invalid_argument("check_acceptance needs at least one row");
	}
	AcceptanceSummary summary;
	summary.threshold_db = threshold_db;
	summary.rows = rows.size();

	std::vector<double> magnitudes;
	for (std::size_t i = 0; i < rows.size(); ++i) {
		const auto& row = rows[i];
		if (!row.oracle.converged || !std::isfinite(row.error_db)) {
			summary.unconverged.push_back(i);
			continue;
		}
		const double magnitude = std::abs(row.error_db);
		magnitudes.push_back(magnitude);
		if (!summary.worst || magnitude > summary.worst_abs_error_db) {
			summary.worst = i;
			summary.worst_abs_error_db = magnitude;
		}
		summary.oracle_guard_db =
		    std::max(summary.oracle_guard_db, 10 * std::log10(1 + row.oracle.rel_error));
		const auto bin = static_cast<std::size_t>(std::min(magnitude / 0.1, 5.0));
		++summary.histogram[std::min<std::size_t>(bin, 5)];
	}
	summary.converged_rows = magnitudes.size();
	summary.pass = summary.worst_abs_error_db <= threshold_db;

	if (!magnitudes.empty()) {
		std::sort(magnitudes.begin(), magnitudes.end());
		auto rank = [&](double q) {
			const auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(magnitudes.size())));
			return magnitudes[std::clamp<std::size_t>(k, 1, magnitudes.size()) - 1];
		};
		summary.quantiles = {rank(0.5), rank(0.9), rank(0.99), magnitudes.back()};
	}
	return summary;
}

}  // namespace gnli
