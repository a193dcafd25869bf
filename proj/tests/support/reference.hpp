#pragma once

// Test-only extended-precision references. These evaluate the textbook
// formulas directly in 50 decimal digits, with none of the series switches or
// rescalings the library uses, so they are independent of its code paths.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>

namespace gnli::reference {

using Real = boost::multiprecision::cpp_bin_float_50;

inline Real pi() { return boost::math::constants::pi<Real>(); }

/// 1 - e^-u - u e^-u
inline Real taylor_denominator(const Real& u)
{
	return 1 - exp(-u) - u * exp(-u);
}

struct Effective {
	Real alpha_eq;
	Real a_eq;
};

/// Multi-span Taylor-matched parameters, evaluated directly.
inline Effective effective(const Real& alpha, const Real& span, int n_spans)
{
	const Real u = 2 * alpha * span;
	const Real e = 1 - exp(-u);
	const Real d = taylor_denominator(u) + alpha * span * (n_spans - 1) * e;
	return {alpha * e / d, Real(n_spans) * e * e / d};
}

/// (16/27) gamma^2 G^3 A^2/(4 pi beta2 a) asinh(pi^2 beta2 B^2 / (4 a))
inline Real cff(const Real& a_eq, const Real& alpha_eq, const Real& beta2, const Real& gamma,
                const Real& bandwidth, const Real& psd)
{
	return Real(16) / 27 * gamma * gamma * psd * psd * psd * a_eq * a_eq /
	       (4 * pi() * beta2 * alpha_eq) * asinh(pi() * pi() * beta2 * bandwidth * bandwidth / (4 * alpha_eq));
}

/// High-loss closed form, written out directly:
/// (4 / 27 pi) gamma^2 G^3 / (alpha beta2) asinh(pi^2 beta2 B^2 / (4 alpha)).
inline Real high_loss(const Real& alpha, const Real& beta2, const Real& gamma,
                      const Real& bandwidth, const Real& psd)
{
	return Real(4) / (27 * pi()) * gamma * gamma * psd * psd * psd / (alpha * beta2) *
	       asinh(pi() * pi() * beta2 * bandwidth * bandwidth / (4 * alpha));
}

/// Zero-loss single span: (16/27) gamma^2 G^3 L/(pi beta2) asinh(pi^2 beta2 B^2 L / 4).
inline Real zero_loss(const Real& span, const Real& beta2, const Real& gamma,
                      const Real& bandwidth, const Real& psd)
{
	return Real(16) / 27 * gamma * gamma * psd * psd * psd * span / (pi() * beta2) *
	       asinh(pi() * pi() * beta2 * bandwidth * bandwidth * span / 4);
}

/// The multi-span integrand F(x) = (1 - e^((-2a + x)L))/(2a - x) *
/// sinh(N L x / 2)/sinh(L x / 2) at x = j h, split into real and imaginary parts.
/// Used for complex-step differentiation: F'(0) = Im F(j h) / h + O(h^2).
/// With `causal`, the span factor is the plain sum of e^(k L x), k < N, which
/// carries an extra e^((N - 1) L x / 2); same modulus on the imaginary axis.
struct Complex {
	Real re;
	Real im;
};

inline Complex multi_span_integrand_imag_axis(const Real& alpha, const Real& span, int n_spans,
                                              const Real& h, bool causal = false)
{
	// 1 - e^(-2 alpha L) e^(j h L)
	const Real rho = exp(-2 * alpha * span);
	const Real num_re = 1 - rho * cos(h * span);
	const Real num_im = -rho * sin(h * span);
	// divide by (2 alpha - j h)
	const Real den_re = 2 * alpha;
	const Real den_im = -h;
	const Real den_sq = den_re * den_re + den_im * den_im;
	const Real q_re = (num_re * den_re + num_im * den_im) / den_sq;
	const Real q_im = (num_im * den_re - num_re * den_im) / den_sq;
	// sinh(j y) = j sin(y): the array factor is real on the imaginary axis.
	const Real array = sin(Real(n_spans) * span * h / 2) / sin(span * h / 2);
	if (!causal) return {q_re * array, q_im * array};
	const Real phase = Real(n_spans - 1) * span * h / 2;
	const Real c = cos(phase) * array;
	const Real s = sin(phase) * array;
	return {q_re * c - q_im * s, q_re * s + q_im * c};
}

}  // namespace gnli::reference
