#pragma once

// Adaptive Gauss-Kronrod (7/15) panel quadrature for long oscillatory
// integrands, and the 1-D reductions of square/lozenge integrals of functions
// of the product f1*f2.
//
// Each interval is integrated in two passes. Base panels are laid down no
// wider than a quarter of the caller's oscillation period and accepted when
// their local error is within rel_tol of their own value. Panels that fail
// are then bisected against a share of the error budget implied by the
// running total. Summation is compensated and strictly in input order, so
// results are bit-reproducible.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace gnli {

struct QuadratureResult {
	double value = 0;
	double abs_error = 0;
	std::int64_t evaluations = 0;
	bool converged = false;

	/// Achieved relative error; infinite when the budget ran out before the
	/// whole domain was covered.
	double rel_error() const
	{
		if (!converged && abs_error == std::numeric_limits<double>::infinity()) {
			return abs_error;
		}
		return value != 0 ? abs_error / std::abs(value) : abs_error;
	}
};

namespace detail {

// QUADPACK qk15 abscissae and weights.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5, 7 of the Kronrod set.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct RuleEstimate {
	double value;
	double error;
};

template <typename F>
RuleEstimate gauss_kronrod_15(F& f, double a, double b)
{
	const double center = 0.5 * (a + b);
	const double half = 0.5 * (b - a);
	const double fc = f(center);
	double kronrod = fc * kKronrodWeights[7];
	double gauss = fc * kGaussWeights[3];
	for (int i = 0; i < 7; ++i) {
		const double dx = half * kKronrodNodes[i];
		const double pair = f(center - dx) + f(center + dx);
		kronrod += kKronrodWeights[i] * pair;
		if (i % 2 == 1) {
			gauss += kGaussWeights[i / 2] * pair;
		}
	}
	return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

// Neumaier compensated sum.
class CompensatedSum
{
public:
	void add(double x)
	{
		const double t = sum_ + x;
		if (std::abs(sum_) >= std::abs(x)) {
			compensation_ += (sum_ - t) + x;
		} else {
			compensation_ += (x - t) + sum_;
		}
		sum_ = t;
	}
	double value() const { return sum_ + compensation_; }

private:
	double sum_ = 0;
	double compensation_ = 0;
};

}  // namespace detail

/// Accumulates the integral of one or more functions over one or more
/// intervals under a shared relative tolerance and evaluation budget.
class PanelIntegrator
{
public:
	static constexpr int kMaxDepth = 50;
	static constexpr std::int64_t kRuleCost = 15;
	/// Upper end of the log substitution, e^-64 * 65 ~ 1e-26.
	static constexpr double kLogSubstitutionSpan = 64;

	PanelIntegrator(double rel_tol, std::int64_t max_evals)
	    : rel_tol_(rel_tol), max_evals_(max_evals)
	{
		if (!(rel_tol > 0) || !(rel_tol < 1)) {
			throw std::invalid_argument("rel_tol must lie in (0, 1)");
		}
		if (max_evals <= 0) {
			throw std::invalid_argument("max_evals must be positive");
		}
	}

	/// Integral of f over [a, b]; no panel is wider than period_hint / 4.
	template <typename F>
	void add(F&& f, double a, double b,
	         double period_hint = std::numeric_limits<double>::infinity())
	{
		if (!(a < b)) {
			if (a == b) return;
			throw std::invalid_argument("integration bounds must satisfy a < b");
		}
		const double cap = period_hint / 4;
		const double span = b - a;
		std::int64_t panels = 1;
		if (std::isfinite(cap) && cap > 0 && span > cap) {
			panels = static_cast<std::int64_t>(std::ceil(span / cap));
		}
		const double width = span / static_cast<double>(panels);
		for (std::int64_t i = 0; i < panels && !exhausted_; ++i) {
			const double lo = a + static_cast<double>(i) * width;
			const double hi = (i + 1 == panels) ? b : a + static_cast<double>(i + 1) * width;
			first_pass(f, lo, hi);
		}
		finish_pending(f);
	}

	/// Integral of f over [0, x1] for f with at most a logarithmic
	/// singularity at 0, via x = x1 e^-s.
	template <typename F>
	void add_log_endpoint(F&& f, double x1)
	{
		if (!(x1 > 0)) {
			throw std::invalid_argument("log-endpoint interval must have x1 > 0");
		}
		auto substituted = [&f, x1](double s) {
			const double x = x1 * std::exp(-s);
			return f(x) * x;
		};
		add(substituted, 0.0, kLogSubstitutionSpan);
	}

	QuadratureResult result() const
	{
		QuadratureResult r;
		r.value = value_.value();
		r.evaluations = evaluations_;
		if (exhausted_) {
			r.abs_error = std::numeric_limits<double>::infinity();
			r.converged = false;
			return r;
		}
		r.abs_error = error_.value();
		r.converged = r.abs_error <= rel_tol_ * std::abs(r.value);
		return r;
	}

private:
	struct Panel {
		double a, b, value, error;
	};

	bool charge()
	{
		if (evaluations_ + kRuleCost > max_evals_) {
			exhausted_ = true;
			return false;
		}
		evaluations_ += kRuleCost;
		return true;
	}

	bool locally_accurate(const detail::RuleEstimate& est) const
	{
		return est.error <= rel_tol_ * std::abs(est.value);
	}

	void accept(double value, double error)
	{
		value_.add(value);
		error_.add(error);
	}

	template <typename F>
	void first_pass(F& f, double a, double b)
	{
		if (!charge()) return;
		const auto est = detail::gauss_kronrod_15(f, a, b);
		if (locally_accurate(est)) {
			accept(est.value, est.error);
		} else {
			pending_.push_back({a, b, est.value, est.error});
		}
	}

	// Refines the panels the first pass could not settle. Each gets an equal
	// share of half the global error budget, split again on every bisection.
	template <typename F>
	void finish_pending(F& f)
	{
		if (pending_.empty()) return;
		std::vector<Panel> pending;
		pending.swap(pending_);
		if (exhausted_) return;
		detail::CompensatedSum estimate = value_;
		for (const auto& p : pending) estimate.add(p.value);
		const double share = 0.5 * rel_tol_ * std::abs(estimate.value()) /
		                     static_cast<double>(pending.size());

		struct Item {
			double a, b, value, error, allowance;
			int depth;
		};
		std::vector<Item> stack;
		for (const auto& p : pending) {
			stack.push_back({p.a, p.b, p.value, p.error, share, 0});
			while (!stack.empty()) {
				const Item item = stack.back();
				stack.pop_back();
				const bool good = item.error <= rel_tol_ * std::abs(item.value) ||
				                  item.error <= item.allowance;
				if (good || item.depth >= kMaxDepth || exhausted_) {
					accept(item.value, item.error);
					continue;
				}
				const double mid = 0.5 * (item.a + item.b);
				if (!charge()) {
					accept(item.value, item.error);
					continue;
				}
				const auto left = detail::gauss_kronrod_15(f, item.a, mid);
				if (!charge()) {
					accept(item.value, item.error);
					continue;
				}
				const auto right = detail::gauss_kronrod_15(f, mid, item.b);
				const double half = 0.5 * item.allowance;
				// Right first so the left half is summed first.
				stack.push_back({mid, item.b, right.value, right.error, half, item.depth + 1});
				stack.push_back({item.a, mid, left.value, left.error, half, item.depth + 1});
			}
		}
	}

	double rel_tol_;
	std::int64_t max_evals_;
	std::int64_t evaluations_ = 0;
	bool exhausted_ = false;
	detail::CompensatedSum value_;
	detail::CompensatedSum error_;
	std::vector<Panel> pending_;
};

/// Integral of f over [a, b] to rel_tol, with panels capped at period_hint / 4.
template <typename F>
QuadratureResult adaptive_panel_integrate(F&& f, double a, double b, double rel_tol,
                                          std::int64_t max_evals,
                                          double period_hint = std::numeric_limits<double>::infinity())
{
	PanelIntegrator integrator(rel_tol, max_evals);
	integrator.add(f, a, b, period_hint);
	return integrator.result();
}

/// Integral of f over [0, x1], f at most log-singular at 0.
template <typename F>
QuadratureResult log_endpoint_integrate(F&& f, double x1, double rel_tol, std::int64_t max_evals)
{
	PanelIntegrator integrator(rel_tol, max_evals);
	integrator.add_log_endpoint(f, x1);
	return integrator.result();
}

struct ProductMeasureOptions {
	double rel_tol = 1e-5;
	std::int64_t max_evals = 4'000'000'000;
	/// Oscillation period of h in the product variable; infinite if smooth.
	double period_hint = std::numeric_limits<double>::infinity();
	/// h(nu) == h(-nu); halves the work.
	bool even = false;
};

namespace detail {

// ln((b + r)/(b - r)), r = sqrt(b^2 - 4 nu), for 0 < nu <= b^2/4: the length
// (in d f1 / f1) of {f1 f2 = nu, f1, f2 > 0, f1 + f2 <= b}.
inline double lozenge_weight(double b, double nu)
{
	const double root_nu = std::sqrt(nu);
	const double r = std::sqrt(std::max(0.0, (b - 2 * root_nu) * (b + 2 * root_nu)));
	const double t = r / b;
	if (t < 0.5) {
		return 2 * std::atanh(t);
	}
	return 2 * std::log(b + r) - std::log(4 * nu);
}

template <typename Integrand>
void add_log_singular_range(PanelIntegrator& integrator, Integrand&& integrand, double top,
                            double period_hint)
{
	const double x1 = std::min(top, period_hint / 4);
	integrator.add_log_endpoint(integrand, x1);
	if (x1 < top) {
		integrator.add(integrand, x1, top, period_hint);
	}
}

}  // namespace detail

/// Integral of h(f1 f2) over the square [-b, b]^2, b = half_bw, as
/// 2 int_0^{b^2} [h(nu) + h(-nu)] ln(b^2/nu) dnu.
template <typename H>
QuadratureResult integrate_square_product(H&& h, double half_bw, const ProductMeasureOptions& options)
{
	const double b = half_bw;
	const double top = b * b;
	PanelIntegrator integrator(options.rel_tol, options.max_evals);
	auto integrand = [&](double nu) {
		const double symmetric = options.even ? 2 * h(nu) : h(nu) + h(-nu);
		return 2 * symmetric * std::log(top / nu);
	};
	detail::add_log_singular_range(integrator, integrand, top, options.period_hint);
	return integrator.result();
}

/// Integral of h(f1 f2) over the square [-b, b]^2 cut to |f1 + f2| <= b.
/// Opposite-sign quadrants are unaffected by the cut; the same-sign ones keep
/// only nu <= b^2/4 with a reduced level-set length.
template <typename H>
QuadratureResult integrate_lozenge_product(H&& h, double half_bw, const ProductMeasureOptions& options)
{
	const double b = half_bw;
	const double top = b * b;
	const double knee = top / 4;
	PanelIntegrator integrator(options.rel_tol, options.max_evals);
	auto inner = [&](double nu) {
		const double log_weight = std::log(top / nu);
		const double same_sign = h(nu);
		const double opposite = options.even ? same_sign : h(-nu);
		return 2 * same_sign * detail::lozenge_weight(b, nu) + 2 * opposite * log_weight;
	};
	auto outer = [&](double nu) {
		const double opposite = options.even ? h(nu) : h(-nu);
		return 2 * opposite * std::log(top / nu);
	};
	detail::add_log_singular_range(integrator, inner, knee, options.period_hint);
	integrator.add(outer, knee, top, options.period_hint);
	return integrator.result();
}

}  // namespace gnli
