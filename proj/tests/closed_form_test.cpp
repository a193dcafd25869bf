#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gnli/closed_form.hpp"
#include "support/reference.hpp"

using namespace gnli;
using reference::Real;

namespace {

// Standard fiber and comb: gamma 1.2 /(W km), beta2 -21 ps^2/km, 5 THz, 1 W/THz.
Fiber<double> standard_fiber(double loss_db_per_km)
{
	return fiber_from_engineering(loss_db_per_km, -21.0, 1.2);
}

const Spectrum<double> kComb = spectrum_from_thz(5.0, 1.0);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Fiber<double> fiber_with_alpha(double alpha)
{
	Fiber<double> fiber = standard_fiber(0.2);
	fiber.alpha = alpha;
	return fiber;
}

}  // namespace

TEST(TaylorDenominator, FrozenValues)
{
	EXPECT_EQ(taylor_denominator(0.0), 0.0);
	// 50-digit evaluation of 1 - e^-u - u e^-u.
	EXPECT_NEAR(taylor_denominator(1e-6), 4.999996666667916666e-13, 1e-12 * 5e-13);
	EXPECT_NEAR(taylor_denominator(4.6052), 0.94394967111008413, 1e-15);
}

TEST(TaylorDenominator, MatchesExtendedPrecisionEverywhere)
{
	std::mt19937_64 rng(11);
	std::uniform_real_distribution<double> exponent(-12, 2);
	for (int i = 0; i < 2000; ++i) {
		const double u = std::pow(10.0, exponent(rng));
		const double expected = static_cast<double>(reference::taylor_denominator(Real(u)));
		const double tolerance = u <= kSeriesSwitch ? 1e-10 : 1e-12;
		EXPECT_LE(rel(taylor_denominator(u), expected), tolerance) << "u = " << u;
	}
}

TEST(TaylorDenominator, ContinuousAcrossSeriesSwitch)
{
	const double below = std::nextafter(kSeriesSwitch, 0.0);
	EXPECT_LE(rel(taylor_denominator(below), taylor_denominator(kSeriesSwitch)), 1e-12);
}

TEST(EffParamsSingle, LosslessLimit)
{
	for (double span : {100.0, 1e3, 1e4, 1e5, 1e6}) {
		const auto eff = eff_params_single(fiber_with_alpha(0.0), span);
		EXPECT_DOUBLE_EQ(eff.alpha_eq, 1 / span);
		EXPECT_DOUBLE_EQ(eff.a_eq, 2.0);
	}
}

TEST(EffParamsSingle, TwentyDbSpan)
{
	const auto fiber = standard_fiber(0.2);
	const auto eff = eff_params_single(fiber, 1e5);
	// 50-digit values
	EXPECT_LE(rel(eff.alpha_eq, 2.4149195952316118e-5), 1e-13);
	EXPECT_LE(rel(eff.a_eq, 1.0382983919046322), 1e-13);
	EXPECT_NEAR(eff.alpha_eq / fiber.alpha, 1.04878625444912347, 1e-12);
}

TEST(EffParamsSingle, HighLossApproachesPlainAttenuation)
{
	const double span = 1e5;
	const auto fiber = fiber_with_alpha(18.0 / (2 * span));
	const auto eff = eff_params_single(fiber, span);
	EXPECT_LT(std::abs(eff.alpha_eq / fiber.alpha - 1), 3e-7);
	EXPECT_LT(std::abs(eff.a_eq - 1), 3e-7);
}

TEST(EffParamsMulti, OneSpanIsSingleSpan)
{
	std::mt19937_64 rng(3);
	std::uniform_real_distribution<double> log_alpha(-12, -3.5);
	std::uniform_real_distribution<double> log_span(2, 6);
	for (int i = 0; i < 200; ++i) {
		const auto fiber = fiber_with_alpha(std::pow(10.0, log_alpha(rng)));
		const double span = std::pow(10.0, log_span(rng));
		const auto single = eff_params_single(fiber, span);
		const auto multi = eff_params_multi(fiber, span, 1);
		EXPECT_EQ(single.alpha_eq, multi.alpha_eq);
		EXPECT_EQ(single.a_eq, multi.a_eq);
	}
}

TEST(EffParamsMulti, LosslessLimitTenSpans)
{
	const double span = 1e4;
	const auto exact = eff_params_multi(fiber_with_alpha(0.0), span, 10);
	EXPECT_DOUBLE_EQ(exact.alpha_eq, 1 / (10 * span));
	EXPECT_DOUBLE_EQ(exact.a_eq, 2.0);
	const auto nearly = eff_params_multi(fiber_with_alpha(1e-12), span, 10);
	EXPECT_LE(rel(nearly.alpha_eq, 1 / (10 * span)), 1e-7);
	EXPECT_LE(rel(nearly.a_eq, 2.0), 1e-7);
}

TEST(EffParamsMulti, TwentyDbTenSpans)
{
	const auto eff = eff_params_multi(standard_fiber(0.2), 1e5, 10);
	EXPECT_LE(rel(eff.alpha_eq, 1.0622372831669521e-6), 1e-13);
	EXPECT_LE(rel(eff.a_eq, 0.45671055264579616), 1e-13);
}

TEST(EffParamsMulti, MatchesExtendedPrecisionAndStaysPositive)
{
	std::mt19937_64 rng(5);
	std::uniform_real_distribution<double> log_alpha(-10, -3.5);
	std::uniform_real_distribution<double> log_span(2, 6);
	std::uniform_int_distribution<int> spans(1, 50);
	for (int i = 0; i < 500; ++i) {
		const double alpha = std::pow(10.0, log_alpha(rng));
		const double span = std::pow(10.0, log_span(rng));
		const int n = spans(rng);
		const auto eff = eff_params_multi(fiber_with_alpha(alpha), span, n);
		const auto ref = reference::effective(Real(alpha), Real(span), n);
		EXPECT_GT(eff.alpha_eq, 0);
		EXPECT_GT(eff.a_eq, 0);
		// The reference is exact to ~1e-50 but shares the input rounding.
		EXPECT_LE(rel(eff.alpha_eq, static_cast<double>(ref.alpha_eq)), 1e-10);
		EXPECT_LE(rel(eff.a_eq, static_cast<double>(ref.a_eq)), 1e-10);
	}
}

TEST(EffParamsMulti, RejectsZeroSpans)
{
	EXPECT_THROW(eff_params_multi(standard_fiber(0.2), 1e5, 0), InputError);
}

TEST(AsinhKernel, ArgumentAndValue)
{
	const auto fiber = standard_fiber(0.2);
	const double argument =
	    M_PI * M_PI * fiber.beta2 * kComb.bandwidth * kComb.bandwidth / (4 * fiber.alpha);
	EXPECT_NEAR(argument, 56257.880830740186, 1e-8);
	EXPECT_NEAR(std::asinh(argument), 11.630848594549605, 1e-12);
	const double kernel = asinh_kernel(1.0, fiber.alpha, fiber, kComb);
	EXPECT_LE(rel(kernel, std::asinh(argument) / (4 * M_PI * fiber.beta2 * fiber.alpha)), 1e-15);
}

TEST(AsinhKernel, DoublingAlphaAtLargeArgument)
{
	const auto fiber = standard_fiber(0.2);
	const double k1 = asinh_kernel(1.0, fiber.alpha, fiber, kComb);
	const double k2 = asinh_kernel(1.0, 2 * fiber.alpha, fiber, kComb);
	const double argument =
	    M_PI * M_PI * fiber.beta2 * kComb.bandwidth * kComb.bandwidth / (4 * fiber.alpha);
	const double predicted = 0.5 * (1 - std::log(2.0) / std::asinh(argument));
	EXPECT_NEAR(k2 / k1, predicted, 1e-9);
}

TEST(CffHighLoss, TwentyDbSpan)
{
	const auto fiber = standard_fiber(0.2);
	const auto estimate = cff_high_loss(fiber, link_from_km(100.0, 1), kComb);
	EXPECT_EQ(estimate.method, Method::HighLoss8);
	// 50-digit evaluation of the high-loss form.
	EXPECT_LE(rel(estimate.psd, 1.6333725979763034e-12), 1e-13);
	const auto ref = reference::high_loss(Real(fiber.alpha), Real(fiber.beta2), Real(fiber.gamma),
	                                      Real(kComb.bandwidth), Real(kComb.psd));
	EXPECT_LE(rel(estimate.psd, static_cast<double>(ref)), 1e-13);
}

TEST(CffHighLoss, HalvingAlpha)
{
	auto fiber = standard_fiber(0.2);
	const auto link = link_from_km(100.0, 1);
	const double full = cff_high_loss(fiber, link, kComb).psd;
	const double argument =
	    M_PI * M_PI * fiber.beta2 * kComb.bandwidth * kComb.bandwidth / (4 * fiber.alpha);
	fiber.alpha /= 2;
	const double half = cff_high_loss(fiber, link, kComb).psd;
	EXPECT_LE(rel(half / full, 2 * std::asinh(2 * argument) / std::asinh(argument)), 1e-14);
}

TEST(CffHighLoss, RejectsZeroLoss)
{
	try {
		cff_high_loss(standard_fiber(0.0), link_from_km(100.0, 1), kComb);
		FAIL();
	} catch (const InputError& e) {
		EXPECT_EQ(e.field(), "alpha");
	}
}

TEST(CffSingleSpan, ZeroLossLimitForm)
{
	const auto fiber = standard_fiber(0.0);
	for (double span_km : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
		const auto estimate = cff_single_span(fiber, link_from_km(span_km, 1), kComb);
		const auto ref = reference::zero_loss(Real(span_km * 1e3), Real(fiber.beta2), Real(fiber.gamma),
		                                      Real(kComb.bandwidth), Real(kComb.psd));
		EXPECT_LE(rel(estimate.psd, static_cast<double>(ref)), 1e-9) << span_km;
		EXPECT_EQ(estimate.method, Method::SingleSpan20);
	}
}

TEST(CffSingleSpan, MatchesExtendedPrecision)
{
	std::mt19937_64 rng(17);
	std::uniform_real_distribution<double> log_loss(-4, -0.5);
	std::uniform_real_distribution<double> log_km(-1, 3);
	for (int i = 0; i < 200; ++i) {
		const auto fiber = standard_fiber(std::pow(10.0, log_loss(rng)));
		const double span = std::pow(10.0, log_km(rng)) * 1e3;
		const auto eff = reference::effective(Real(fiber.alpha), Real(span), 1);
		const auto ref = reference::cff(eff.a_eq, eff.alpha_eq, Real(fiber.beta2), Real(fiber.gamma),
		                                Real(kComb.bandwidth), Real(kComb.psd));
		const double psd = cff_single_span(fiber, Link<double>{span, 1}, kComb).psd;
		EXPECT_LE(rel(psd, static_cast<double>(ref)), 1e-10);
	}
}

// The high-loss form is the e^(-2 alpha L) -> 0 limit. The remaining gap at
// 60 dB is ~(u - 2) e^-u, reproduced here against the 50-digit reference.
TEST(CffSingleSpan, HighLossGapMatchesReference)
{
	for (double span_km : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
		for (double loss_db : {60.0, 80.0}) {
			const double span = span_km * 1e3;
			auto fiber = standard_fiber(0.2);
			fiber.alpha = loss_db * std::log(10.0) / (20 * span);
			const Link<double> link{span, 1};
			const double single = cff_single_span(fiber, link, kComb).psd;
			const double high = cff_high_loss(fiber, link, kComb).psd;

			const auto eff = reference::effective(Real(fiber.alpha), Real(span), 1);
			const Real ref_single = reference::cff(eff.a_eq, eff.alpha_eq, Real(fiber.beta2),
			                                       Real(fiber.gamma), Real(kComb.bandwidth), Real(kComb.psd));
			const Real ref_high = reference::high_loss(Real(fiber.alpha), Real(fiber.beta2),
			                                           Real(fiber.gamma), Real(kComb.bandwidth), Real(kComb.psd));
			const double ref_gap = static_cast<double>(ref_single / ref_high - 1);
			EXPECT_NEAR(single / high - 1, ref_gap, 1e-12);
			EXPECT_LT(std::abs(ref_gap), loss_db == 60.0 ? 1.1e-5 : 2e-7);
		}
	}
}

TEST(CffGeneralized, OneSpanIsSingleSpanBitForBit)
{
	for (double loss : {0.0, 5e-4, 0.01, 0.2, 0.3}) {
		for (double span_km : {0.1, 10.0, 1000.0}) {
			const auto fiber = standard_fiber(loss);
			const auto link = link_from_km(span_km, 1);
			EXPECT_EQ(cff_generalized(fiber, link, kComb).psd, cff_single_span(fiber, link, kComb).psd);
			EXPECT_EQ(cff_incoherent(fiber, link, kComb).psd, cff_single_span(fiber, link, kComb).psd);
		}
	}
}

TEST(CffGeneralized, LosslessSpansActLikeOneLongSpan)
{
	const auto fiber = standard_fiber(0.0);
	for (int n : {2, 5, 10, 40}) {
		for (double span_km : {0.1, 10.0, 100.0}) {
			const double chained = cff_generalized(fiber, link_from_km(span_km, n), kComb).psd;
			const double long_span = cff_single_span(fiber, link_from_km(span_km * n, 1), kComb).psd;
			EXPECT_LE(rel(chained, long_span), 1e-12);
		}
	}
	// and continuously so
	auto nearly = standard_fiber(0.0);
	nearly.alpha = 1e-13;
	EXPECT_LE(rel(cff_generalized(nearly, link_from_km(10.0, 10), kComb).psd,
	              cff_single_span(fiber, link_from_km(100.0, 1), kComb).psd),
	          1e-6);
}

TEST(CffGeneralized, MatchesExtendedPrecision)
{
	std::mt19937_64 rng(23);
	std::uniform_real_distribution<double> log_loss(-4, -0.5);
	std::uniform_real_distribution<double> log_km(-1, 3);
	std::uniform_int_distribution<int> spans(1, 30);
	for (int i = 0; i < 200; ++i) {
		const auto fiber = standard_fiber(std::pow(10.0, log_loss(rng)));
		const double span = std::pow(10.0, log_km(rng)) * 1e3;
		const int n = spans(rng);
		const auto eff = reference::effective(Real(fiber.alpha), Real(span), n);
		const auto ref = reference::cff(eff.a_eq, eff.alpha_eq, Real(fiber.beta2), Real(fiber.gamma),
		                                Real(kComb.bandwidth), Real(kComb.psd));
		const auto estimate = cff_generalized(fiber, Link<double>{span, n}, kComb);
		EXPECT_EQ(estimate.method, Method::Generalized28);
		EXPECT_LE(rel(estimate.psd, static_cast<double>(ref)), 1e-10);
	}
}

TEST(CffIncoherent, ScalesWithSpanCount)
{
	const auto fiber = standard_fiber(0.2);
	const double one = cff_single_span(fiber, link_from_km(100.0, 1), kComb).psd;
	const auto ten = cff_incoherent(fiber, link_from_km(100.0, 10), kComb);
	EXPECT_EQ(ten.method, Method::Incoherent29);
	EXPECT_EQ(ten.psd, 10 * one);
	EXPECT_NEAR(10 * std::log10(ten.psd / one), 10.0, 1e-12);
}

TEST(CffCombined, TieGoesToGeneralized)
{
	const auto estimate = cff_combined(standard_fiber(0.2), link_from_km(100.0, 1), kComb);
	EXPECT_EQ(estimate.method, Method::Combined30);
	ASSERT_TRUE(estimate.branch);
	EXPECT_EQ(*estimate.branch, Method::Generalized28);
}

TEST(CffCombined, LongDispersiveSpansPickIncoherent)
{
	const auto fiber = standard_fiber(0.2);
	const auto link = link_from_km(100.0, 10);
	const auto estimate = cff_combined(fiber, link, kComb);
	EXPECT_GT(estimate.validity.cond1_lhs, 2);
	EXPECT_EQ(*estimate.branch, Method::Incoherent29);
	EXPECT_EQ(estimate.psd, cff_incoherent(fiber, link, kComb).psd);
}

TEST(CffCombined, ShortLowLossSpansPickGeneralized)
{
	const auto fiber = standard_fiber(0.2);
	const auto link = link_from_km(0.1, 10);
	const auto estimate = cff_combined(fiber, link, kComb);
	EXPECT_TRUE(estimate.validity.cond2_holds);
	EXPECT_EQ(*estimate.branch, Method::Generalized28);
	EXPECT_EQ(estimate.psd, cff_generalized(fiber, link, kComb).psd);
}

TEST(CffCombined, NeverBelowEitherOperand)
{
	std::mt19937_64 rng(29);
	std::uniform_real_distribution<double> log_loss(-4, -0.5);
	std::uniform_real_distribution<double> log_km(-1, 3);
	std::uniform_int_distribution<int> spans(1, 30);
	for (int i = 0; i < 500; ++i) {
		const auto fiber = standard_fiber(std::pow(10.0, log_loss(rng)));
		const auto link = link_from_km(std::pow(10.0, log_km(rng)), spans(rng));
		const double combined = cff_combined(fiber, link, kComb).psd;
		EXPECT_GE(combined, cff_incoherent(fiber, link, kComb).psd);
		EXPECT_GE(combined, cff_generalized(fiber, link, kComb).psd);
	}
}

TEST(CffAll, ScaleAsPsdCubed)
{
	const auto fiber = standard_fiber(0.05);
	const auto link = link_from_km(20.0, 10);
	const auto doubled = spectrum_from_thz(5.0, 2.0);
	auto check = [&](auto method) {
		EXPECT_LE(rel(method(fiber, link, doubled).psd / method(fiber, link, kComb).psd, 8.0), 1e-14);
	};
	check([](auto&&... a) { return cff_high_loss(a...); });
	check([](auto&&... a) { return cff_single_span(a...); });
	check([](auto&&... a) { return cff_generalized(a...); });
	check([](auto&&... a) { return cff_incoherent(a...); });
	check([](auto&&... a) { return cff_combined(a...); });
}

TEST(ValidityReport, Examples)
{
	const auto fiber = standard_fiber(0.2);
	const auto long_span = validity_report(fiber, link_from_km(100.0, 1), kComb);
	EXPECT_NEAR(long_span.cond1_lhs, 1.6493361431346414e5, 1e-6);
	EXPECT_FALSE(long_span.cond1_holds);
	EXPECT_NEAR(long_span.exp_neg_2aL, 0.01, 1e-15);

	const auto short_span = validity_report(fiber, link_from_km(0.1, 1), kComb);
	EXPECT_NEAR(short_span.cond1_lhs, 164.93361431346414, 1e-9);
	EXPECT_FALSE(short_span.cond1_holds);
	EXPECT_NEAR(short_span.cond2_lhs, 2.302585092994046e-3, 1e-15);
	EXPECT_TRUE(short_span.cond2_holds);

	const auto lossless = validity_report(standard_fiber(0.0), link_from_km(100.0, 1), kComb);
	EXPECT_EQ(lossless.cond2_lhs, 0.0);
	EXPECT_TRUE(lossless.cond2_holds);
	EXPECT_EQ(lossless.exp_neg_2aL, 1.0);

	// cond1 holds only for a tiny dispersion-length-bandwidth product
	const auto narrow = validity_report(fiber, link_from_km(0.1, 1), spectrum_from_thz(0.5, 1.0));
	EXPECT_NEAR(narrow.cond1_lhs, 1.6493361431346414, 1e-12);
	EXPECT_TRUE(narrow.cond1_holds);
}

// Value and slope at x = 0 of A/(2 alpha_eq - x) against the multi-span
// integrand, slope by complex step in 50 digits.
struct TaylorMismatch {
	double value = 0;
	double slope = 0;
};

TaylorMismatch taylor_mismatch(double alpha, double span, int n, bool causal)
{
	const auto eff = eff_params_multi(fiber_with_alpha(alpha), span, n);
	const Real h = Real("1e-30") / Real(span);
	const auto f = reference::multi_span_integrand_imag_axis(Real(alpha), Real(span), n, h, causal);
	const double two_a = 2 * eff.alpha_eq;
	return {rel(eff.a_eq / two_a, static_cast<double>(f.re)),
	        rel(eff.a_eq / (two_a * two_a), static_cast<double>(f.im / h))};
}

TEST(TaylorMatching, CausalSpanSumAnySpanCount)
{
	std::mt19937_64 rng(31);
	std::uniform_real_distribution<double> log_alpha(-9, -3.5);
	std::uniform_real_distribution<double> log_span(2, 6);
	std::uniform_int_distribution<int> spans(1, 20);
	for (int i = 0; i < 100; ++i) {
		const auto m = taylor_mismatch(std::pow(10.0, log_alpha(rng)), std::pow(10.0, log_span(rng)),
		                               spans(rng), true);
		EXPECT_LE(m.value, 1e-8);
		EXPECT_LE(m.slope, 1e-8);
	}
}

// The symmetric sinh ratio is even in x, so it agrees in slope only for N = 1.
TEST(TaylorMatching, SymmetricSpanFactor)
{
	std::mt19937_64 rng(37);
	std::uniform_real_distribution<double> log_alpha(-9, -3.5);
	std::uniform_real_distribution<double> log_span(2, 6);
	for (int i = 0; i < 50; ++i) {
		const double alpha = std::pow(10.0, log_alpha(rng));
		const double span = std::pow(10.0, log_span(rng));
		const auto one = taylor_mismatch(alpha, span, 1, false);
		EXPECT_LE(one.value, 1e-8);
		EXPECT_LE(one.slope, 1e-8);
		const auto ten = taylor_mismatch(alpha, span, 10, false);
		EXPECT_LE(ten.value, 1e-8);
		EXPECT_GT(ten.slope, 1.0);
	}
}

TEST(Genericity, LongDoubleAgreesWithDouble)
{
	const auto fd = standard_fiber(0.05);
	const auto fl = fiber_from_engineering<long double>(0.05L, -21.0L, 1.2L);
	const auto ld = cff_combined(fl, link_from_km<long double>(20.0L, 10),
	                             spectrum_from_thz<long double>(5.0L, 1.0L));
	const auto d = cff_combined(fd, link_from_km(20.0, 10), kComb);
	EXPECT_LE(rel(static_cast<double>(ld.psd), d.psd), 1e-13);
}
