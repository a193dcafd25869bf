#pragma once

// Closed-form NLI PSD at the center of a rectangular Nyquist-WDM comb.
//
// Every formula here is an instance of one kernel: the square-domain integral
// of |A/(2 a - j xi)|^2, which evaluates to A^2 asinh(pi^2 beta2 B^2 / 4a) /
// (4 pi beta2 a). The formulas differ only in the effective (a, A) plugged in:
// (alpha, 1) for high span loss, and the pair that matches value and slope at
// xi = 0 of the true single- or multi-span integrand otherwise.
//
// All templates accept any floating type with ADL-visible math functions.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gnli/core.hpp"
#include "gnli/estimate.hpp"

namespace gnli {

/// Below this u = 2 alpha L the cancellation-prone expressions switch to series.
inline constexpr double kSeriesSwitch = 1e-3;

/// alpha L below this counts as "alpha L << pi" in ValidityReport.
inline constexpr double kCond2Threshold = 0.3;

namespace detail {

// (1 - e^-u) / u
template <typename Scalar>
Scalar one_minus_exp_over_u(Scalar u)
{
	using std::expm1;
	if (u < Scalar(kSeriesSwitch)) {
		// sum_{k>=1} (-u)^(k-1) / k!
		Scalar term = 1, sum = 0;
		for (int k = 1; k <= 12; ++k) {
			term = (k == 1) ? Scalar(1) : term * (-u) / Scalar(k);
			sum += term;
		}
		return sum;
	}
	return -expm1(-u) / u;
}

// D(u) / u^2 for small u: sum_{k>=2} (-1)^k (k-1) u^(k-2) / k!
template <typename Scalar>
Scalar taylor_denominator_over_u2_series(Scalar u)
{
	Scalar power = 1, factorial = 2, sum = 0;
	for (int k = 2; k <= 13; ++k) {
		if (k > 2) {
			power *= -u;
			factorial *= Scalar(k);
		}
		sum += Scalar(k - 1) * power / factorial;
	}
	return sum;
}

}  // namespace detail

/// D(u) = 1 - e^-u - u e^-u, the slope coefficient of the single-span
/// integrand's Taylor expansion (scaled by (2 alpha)^2). Series below
/// kSeriesSwitch, where the direct form cancels.
template <typename Scalar>
Scalar taylor_denominator(Scalar u)
{
	using std::exp;
	using std::expm1;
	if (u < Scalar(kSeriesSwitch)) {
		return u * u * detail::taylor_denominator_over_u2_series(u);
	}
	return -expm1(-u) - u * exp(-u);
}

template <typename Scalar = double>
struct EffectiveParams {
	Scalar alpha_eq{};  // 1/m
	Scalar a_eq{};
};

/// Effective (alpha_eq, A_eq) for n_spans coherently accumulating spans: the
/// pair for which A/(2 alpha_eq - x) has the same value and first derivative
/// at x = 0 as the exact multi-span integrand. n_spans = 1 is the single-span
/// case. alpha = 0 is a regular point (alpha_eq = 1/(N L), A_eq = 2).
template <typename Scalar>
EffectiveParams<Scalar> eff_params_multi(const Fiber<Scalar>& fiber, Scalar span_length,
                                         int n_spans)
{
	using std::exp;
	using std::expm1;
	if (n_spans < 1) {
		throw InputError("num_spans", "number of spans must be >= 1");
	}
	if (!(span_length > 0)) {
		throw InputError("span_length", "span length must be > 0");
	}
	const Scalar n = Scalar(n_spans);
	const Scalar u = Scalar(2) * fiber.alpha * span_length;
	EffectiveParams<Scalar> params;
	if (u < Scalar(kSeriesSwitch)) {
		// Divide numerator and denominator by u^2 so alpha = 0 needs no limit.
		const Scalar r1 = detail::one_minus_exp_over_u(u);
		const Scalar r2 = detail::taylor_denominator_over_u2_series(u);
		params.alpha_eq = r1 / (span_length * (Scalar(2) * r2 + (n - Scalar(1)) * r1));
		params.a_eq = n * r1 * r1 / (r2 + (n - Scalar(1)) * r1 / Scalar(2));
		return params;
	}
	const Scalar e = -expm1(-u);
	const Scalar denominator =
	    taylor_denominator(u) + fiber.alpha * span_length * (n - Scalar(1)) * e;
	params.alpha_eq = fiber.alpha * e / denominator;
	params.a_eq = n * e * e / denominator;
	return params;
}

template <typename Scalar>
EffectiveParams<Scalar> eff_params_single(const Fiber<Scalar>& fiber, Scalar span_length)
{
	return eff_params_multi(fiber, span_length, 1);
}

/// A_eq^2 / (4 pi beta2 alpha_eq) * asinh(pi^2 beta2 B^2 / (4 alpha_eq)): the
/// square-domain integral of |A_eq / (2 alpha_eq - j xi)|^2 over the comb.
template <typename Scalar>
Scalar asinh_kernel(Scalar a_eq, Scalar alpha_eq, const Fiber<Scalar>& fiber,
                    const Spectrum<Scalar>& spectrum)
{
	using std::asinh;
	const Scalar pi = std::numbers::pi_v<Scalar>;
	const Scalar b = spectrum.bandwidth;
	return a_eq * a_eq / (Scalar(4) * pi * fiber.beta2 * alpha_eq) *
	       asinh(pi * pi * fiber.beta2 * b * b / (Scalar(4) * alpha_eq));
}

template <typename Scalar>
ValidityReport<Scalar> validity_report(const Fiber<Scalar>& fiber, const Link<Scalar>& link,
                                       const Spectrum<Scalar>& spectrum)
{
	using std::abs;
	using std::exp;
	const Scalar pi = std::numbers::pi_v<Scalar>;
	const Scalar b = spectrum.bandwidth;
	ValidityReport<Scalar> report;
	report.cond1_lhs = abs(pi * link.span_length * fiber.beta2 * b * b);
	report.cond1_holds = report.cond1_lhs < Scalar(2);
	report.cond2_lhs = fiber.alpha * link.span_length;
	report.cond2_holds = report.cond2_lhs < Scalar(kCond2Threshold);
	report.exp_neg_2aL = exp(Scalar(-2) * fiber.alpha * link.span_length);
	return report;
}

namespace detail {

template <typename Scalar>
Scalar nli_prefactor(const Fiber<Scalar>& fiber, const Spectrum<Scalar>& spectrum)
{
	const Scalar g = spectrum.psd;
	return Scalar(16) / Scalar(27) * fiber.gamma * fiber.gamma * g * g * g;
}

template <typename Scalar>
void validate_all(const Fiber<Scalar>& fiber, const Link<Scalar>& link,
                  const Spectrum<Scalar>& spectrum)
{
	validate(fiber);
	validate(link);
	validate(spectrum);
}

}  // namespace detail

/// High span-loss formula, exact in the limit e^(-2 alpha L) -> 0. Only the
/// span length of `link` is used. Rejects alpha = 0, where it diverges.
template <typename Scalar>
NliEstimate<Scalar> cff_high_loss(const Fiber<Scalar>& fiber, const Link<Scalar>& link,
                                  const Spectrum<Scalar>& spectrum)
{
	detail::validate_all(fiber, link, spectrum);
	if (fiber.alpha == 0) {
		throw InputError("alpha", "high-loss formula diverges at zero loss");
	}
	NliEstimate<Scalar> estimate;
	estimate.psd = detail::nli_prefactor(fiber, spectrum) *
	               asinh_kernel(Scalar(1), fiber.alpha, fiber, spectrum);
	estimate.method = Method::HighLoss8;
	estimate.validity = validity_report(fiber, link, spectrum);
	return estimate;
}

/// One span at any loss, including zero. Uses link.span_length only.
template <typename Scalar>
NliEstimate<Scalar> cff_single_span(const Fiber<Scalar>& fiber, const Link<Scalar>& link,
                                    const Spectrum<Scalar>& spectrum)
{
	detail::validate_all(fiber, link, spectrum);
	const auto eff = eff_params_single(fiber, link.span_length);
	NliEstimate<Scalar> estimate;
	estimate.psd = detail::nli_prefactor(fiber, spectrum) *
	               asinh_kernel(eff.a_eq, eff.alpha_eq, fiber, spectrum);
	estimate.method = Method::SingleSpan20;
	estimate.validity = validity_report(fiber, link, spectrum);
	return estimate;
}

/// Coherent accumulation over link.num_spans spans.
template <typename Scalar>
NliEstimate<Scalar> cff_generalized(const Fiber<Scalar>& fiber, const Link<Scalar>& link,
                                    const Spectrum<Scalar>& spectrum)
{
	detail::validate_all(fiber, link, spectrum);
	const auto eff = eff_params_multi(fiber, link.span_length, link.num_spans);
	NliEstimate<Scalar> estimate;
	estimate.psd = detail::nli_prefactor(fiber, spectrum) *
	               asinh_kernel(eff.a_eq, eff.alpha_eq, fiber, spectrum);
	estimate.method = Method::Generalized28;
	estimate.validity = validity_report(fiber, link, spectrum);
	return estimate;
}

/// Incoherent accumulation: num_spans times the single-span PSD.
template <typename Scalar>
NliEstimate<Scalar> cff_incoherent(const Fiber<Scalar>& fiber, const Link<Scalar>& link,
                                   const Spectrum<Scalar>& spectrum)
{
	auto estimate = cff_single_span(fiber, link, spectrum);
	estimate.psd *= Scalar(link.num_spans);
	estimate.method = Method::Incoherent29;
	return estimate;
}

/// max(incoherent, generalized). Ties go to Generalized28.
template <typename Scalar>
NliEstimate<Scalar> cff_combined(const Fiber<Scalar>& fiber, const Link<Scalar>& link,
                                 const Spectrum<Scalar>& spectrum)
{
	const auto incoherent = cff_incoherent(fiber, link, spectrum);
	const auto generalized = cff_generalized(fiber, link, spectrum);
	NliEstimate<Scalar> estimate = generalized;
	if (incoherent.psd > generalized.psd) {
		estimate.psd = incoherent.psd;
		estimate.branch = Method::Incoherent29;
	} else {
		estimate.branch = Method::Generalized28;
	}
	estimate.method = Method::Combined30;
	return estimate;
}

}  // namespace gnli
