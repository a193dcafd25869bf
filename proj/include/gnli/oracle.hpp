#pragma once

// Numerical reference for the center-of-comb NLI PSD.
//
// The multi-span GN integrand at f = 0 depends on (f1, f2) only through the
// product nu = f1 f2, so the 2-D integral collapses to a 1-D integral of the
// kernel against the length of each level set {f1 f2 = nu} inside the
// integration domain (see quadrature.hpp).

#include <cstdint>

#include "gnli/core.hpp"
#include "gnli/estimate.hpp"
#include "gnli/quadrature.hpp"

namespace gnli {

enum class Domain {
	Square,   // [-B/2, B/2]^2, the domain the closed forms integrate over
	Lozenge,  // square cut to |f1 + f2| <= B/2, the exact domain at f = 0
};

struct OracleConfig {
	Domain domain = Domain::Lozenge;
	double rel_tol = 1e-5;
	std::int64_t max_evals = 4'000'000'000;
};

void validate(const OracleConfig& config);

/// Below this |sin(L xi / 2)| the phased-array factor uses its local
/// expansion around the removable singularity.
inline constexpr double kSingularityGuard = 1e-7;

/// [sin(N L xi / 2) / sin(L xi / 2)]^2, the coherent-accumulation factor of N
/// identical spans. Peaks of N^2 at xi = 2 k pi / L.
double phased_array_factor(double xi, double span_length, int n_spans);

/// |F(j xi)|^2 as a function of nu = f1 f2, with xi = 4 pi^2 beta2 nu and
/// F(x) = (1 - e^((-2 alpha + x) L)) / (2 alpha - x) * sinh(N L x/2) / sinh(L x/2).
/// Units m^2.
class Kernel
{
public:
	Kernel(const Fiber<double>& fiber, const Link<double>& link);

	double operator()(double nu) const;

	/// Period of the finest oscillation in nu, 1 / (2 pi beta2 N L).
	double period() const;

	double alpha() const { return alpha_; }
	double span_length() const { return span_length_; }
	int num_spans() const { return num_spans_; }
	double beta2() const { return beta2_; }

private:
	double alpha_;
	double span_length_;
	int num_spans_;
	double beta2_;
	double theta_per_nu_;  // L xi / nu
	double loss_exponent_; // 2 alpha L
	double rho_;           // e^(-2 alpha L)
	double one_minus_rho_sq_;
	double limit_ratio_sq_; // ((1 - rho) / (2 alpha L))^2, 1 at alpha = 0
};

double kernel_eval(const Kernel& kernel, double nu);

/// Square-domain integral: (16/27) gamma^2 G^3 times the integral of the
/// kernel over [-B/2, B/2]^2. Requires config.domain == Square.
NliEstimate<double> gn_numeric_square(const Fiber<double>& fiber, const Link<double>& link,
                                      const Spectrum<double>& spectrum,
                                      const OracleConfig& config);

/// Exact-domain integral. Requires config.domain == Lozenge.
NliEstimate<double> gn_numeric_lozenge(const Fiber<double>& fiber, const Link<double>& link,
                                       const Spectrum<double>& spectrum,
                                       const OracleConfig& config);

/// Dispatches on config.domain.
NliEstimate<double> gn_numeric(const Fiber<double>& fiber, const Link<double>& link,
                               const Spectrum<double>& spectrum, const OracleConfig& config);

}  // namespace gnli
