#pragma once

// Sweep of the combined closed form against the numerical oracle.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gnli/core.hpp"
#include "gnli/estimate.hpp"
#include "gnli/oracle.hpp"

namespace gnli {

/// `count` points log-spaced over [lo, hi], both ends included.
std::vector<double> log_space(double lo, double hi, std::size_t count);

struct SweepGrid {
	std::vector<double> loss_db_per_km = log_space(5e-4, 0.3, 24);
	std::vector<double> span_lengths_km = {0.1, 1, 10, 100, 1000};
	std::vector<int> n_spans = {1, 10};
	double gamma_per_w_km = 1.2;
	double beta2_ps2_per_km = -21;
	double bandwidth_thz = 5;
	double psd_w_per_thz = 1;

	std::size_t size() const
	{
		return loss_db_per_km.size() * span_lengths_km.size() * n_spans.size();
	}
};

/// Throws InputError naming the first bad field.
void validate(const SweepGrid& grid);

struct GridPoint {
	double loss_db_per_km = 0;
	double span_km = 0;
	int n_spans = 1;
};

/// Grid points in report order: span length, then span count, then loss.
std::vector<GridPoint> grid_points(const SweepGrid& grid);

struct ValidationRow {
	GridPoint point;
	double cff_psd = 0;  // combined formula, W/Hz
	double oracle_psd = 0;
	double error_db = 0;
	Method branch = Method::Generalized28;
	double incoherent_psd = 0;
	double generalized_psd = 0;
	ValidityReport<double> validity;
	Convergence oracle;
};

/// 10 log10(cff / oracle). Both must be positive.
double error_db(double cff, double oracle);

/// Evaluates one grid point.
ValidationRow evaluate_point(const SweepGrid& grid, const GridPoint& point,
                             const OracleConfig& config);

/// One row per grid point in grid_points() order. Points run on `threads`
/// workers (0 = hardware concurrency); the output does not depend on it.
std::vector<ValidationRow> run_sweep(const SweepGrid& grid, const OracleConfig& config,
                                     unsigned threads = 0);

struct AcceptanceSummary {
	bool pass = false;
	double threshold_db = 0.5;
	std::size_t rows = 0;
	std::size_t converged_rows = 0;
	std::vector<std::size_t> unconverged;  // row indices
	std::optional<std::size_t> worst;      // row index of the largest |error_db|
	double worst_abs_error_db = 0;
	/// Largest achieved oracle tolerance over converged rows, in dB.
	double oracle_guard_db = 0;
	/// |error_db| quantiles over converged rows: p50, p90, p99, max.
	std::array<double, 4> quantiles{};
	/// Counts of |error_db| in [0, 0.1), [0.1, 0.2), ... [0.4, 0.5), >= 0.5.
	std::array<std::size_t, 6> histogram{};
};

/// Pass iff every converged row has |error_db| <= threshold_db.
AcceptanceSummary check_acceptance(const std::vector<ValidationRow>& rows,
                                   double threshold_db = 0.5);

}  // namespace gnli
