#include "gnli/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gnli/closed_form.hpp"

namespace gnli {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this L xi the loss factor uses its Taylor form.
constexpr double kSmallPhase = 1e-6;

// [sin(N u) / sin(u)]^2 with u already reduced to [-pi/2, pi/2] and s = sin(u).
double dirichlet_squared(double u, double s, int n)
{
	if (n == 1) {
		return 1.0;
	}
	const double dn = static_cast<double>(n);
	double ratio;
	if (std::abs(s) < kSingularityGuard) {
		ratio = dn * std::cos(dn * u) / std::cos(u);
	} else {
		ratio = std::sin(dn * u) / s;
	}
	return ratio * ratio;
}

}  // namespace

void validate(const OracleConfig& config)
{
	if (!(config.rel_tol > 0) || !(config.rel_tol < 1e-2)) {
		throw InputError("rel_tol", "oracle tolerance must lie in (0, 1e-2)");
	}
	if (config.max_evals <= 0) {
		throw InputError("max_evals", "evaluation budget must be positive");
	}
}

double phased_array_factor(double xi, double span_length, int n_spans)
{
	// Period pi in u; reduce so that N u stays small near every peak.
	const double u = std::remainder(0.5 * span_length * xi, kPi);
	return dirichlet_squared(u, std::sin(u), n_spans);
}

Kernel::Kernel(const Fiber<double>& fiber, const Link<double>& link)
    : alpha_(fiber.alpha),
      span_length_(link.span_length),
      num_spans_(link.num_spans),
      beta2_(fiber.beta2)
{
	validate(fiber);
	validate(link);
	theta_per_nu_ = 4 * kPi * kPi * beta2_ * span_length_;
	loss_exponent_ = 2 * alpha_ * span_length_;
	rho_ = std::exp(-loss_exponent_);
	const double one_minus_rho = -std::expm1(-loss_exponent_);
	one_minus_rho_sq_ = one_minus_rho * one_minus_rho;
	const double ratio = loss_exponent_ > 0 ? one_minus_rho / loss_exponent_ : 1.0;
	limit_ratio_sq_ = ratio * ratio;
}

double Kernel::period() const
{
	return 1.0 / (2 * kPi * beta2_ * static_cast<double>(num_spans_) * span_length_);
}

double Kernel::operator()(double nu) const
{
	const double theta = theta_per_nu_ * std::abs(nu);  // L xi
	const double u = std::remainder(0.5 * theta, kPi);
	const double s = std::sin(u);
	const double a = loss_exponent_;

	// |1 - rho e^(j theta)|^2 / (a^2 + theta^2), i.e. the single-span factor / L^2.
	double loss_factor;
	if (theta < kSmallPhase) {
		const double scale = std::max(a, theta);
		if (scale == 0) {
			loss_factor = limit_ratio_sq_;
		} else {
			const double as = a / scale;
			const double ts = theta / scale;
			const double sinc_sq = 1 - theta * theta / 12;
			loss_factor = (limit_ratio_sq_ * as * as + rho_ * sinc_sq * ts * ts) / (as * as + ts * ts);
		}
	} else {
		loss_factor = (one_minus_rho_sq_ + 4 * rho_ * s * s) / (a * a + theta * theta);
	}
	return span_length_ * span_length_ * loss_factor * dirichlet_squared(u, s, num_spans_);
}

double kernel_eval(const Kernel& kernel, double nu)
{
	return kernel(nu);
}

namespace {

NliEstimate<double> run_oracle(const Fiber<double>& fiber, const Link<double>& link,
                               const Spectrum<double>& spectrum, const OracleConfig& config)
{
	validate(config);
	validate(spectrum);
	const Kernel kernel(fiber, link);
	ProductMeasureOptions options;
	options.rel_tol = config.rel_tol;
	options.max_evals = config.max_evals;
	options.period_hint = kernel.period();
	options.even = true;

	const double half_bw = spectrum.bandwidth / 2;
	const QuadratureResult q = config.domain == Domain::Square
	                               ? integrate_square_product(kernel, half_bw, options)
	                               : integrate_lozenge_product(kernel, half_bw, options);

	const double g = spectrum.psd;
	NliEstimate<double> estimate;
	estimate.psd = 16.0 / 27.0 * fiber.gamma * fiber.gamma * g * g * g * q.value;
	estimate.method =
	    config.domain == Domain::Square ? Method::NumericSquare : Method::NumericLozenge;
	estimate.validity = validity_report(fiber, link, spectrum);
	estimate.convergence = Convergence{q.converged, q.rel_error(), q.evaluations};
	return estimate;
}

}  // namespace

NliEstimate<double> gn_numeric_square(const Fiber<double>& fiber, const Link<double>& link,
                                      const Spectrum<double>& spectrum,
                                      const OracleConfig& config)
{
	if (config.domain != Domain::Square) {
		throw std::invalid_argument("gn_numeric_square requires a Square oracle config");
	}
	return run_oracle(fiber, link, spectrum, config);
}

NliEstimate<double> gn_numeric_lozenge(const Fiber<double>& fiber, const Link<double>& link,
                                       const Spectrum<double>& spectrum,
                                       const OracleConfig& config)
{
	if (config.domain != Domain::Lozenge) {
		throw std::invalid_argument("gn_numeric_lozenge requires a Lozenge oracle config");
	}
	return run_oracle(fiber, link, spectrum, config);
}

NliEstimate<double> gn_numeric(const Fiber<double>& fiber, const Link<double>& link,
                               const Spectrum<double>& spectrum, const OracleConfig& config)
{
	return run_oracle(fiber, link, spectrum, config);
}

}  // namespace gnli
