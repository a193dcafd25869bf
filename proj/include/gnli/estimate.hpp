#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace gnli {

/// Which formula or numerical route produced an estimate.
enum class Method {
	HighLoss8,
	SingleSpan20,
	Generalized28,
	Incoherent29,
	Combined30,
	NumericSquare,
	NumericLozenge,
};

constexpr std::string_view to_string(Method method) noexcept
{
	switch (method) {
		case Method::HighLoss8: return "HighLoss8";
		case Method::SingleSpan20: return "SingleSpan20";
		case Method::Generalized28: return "Generalized28";
		case Method::Incoherent29: return "Incoherent29";
		case Method::Combined30: return "Combined30";
		case Method::NumericSquare: return "NumericSquare";
		case Method::NumericLozenge: return "NumericLozenge";
	}
	return "unknown";
}

/// Diagnostics for whether the coherent closed form can be trusted.
template <typename Scalar = double>
struct ValidityReport {
	Scalar cond1_lhs{};  // |pi L beta2 B^2|: only the xi = 0 peak inside the domain when < 2
	bool cond1_holds = false;
	Scalar cond2_lhs{};  // alpha L: side peaks negligible when << pi
	bool cond2_holds = false;
	Scalar exp_neg_2aL{};
};

/// Outcome of a numerical integration.
struct Convergence {
	bool converged = false;
	double rel_error = 0;  // achieved error estimate relative to the value
	std::int64_t evaluations = 0;
};

template <typename Scalar = double>
struct NliEstimate {
	Scalar psd{};  // W/Hz at the comb center
	Method method = Method::Combined30;
	std::optional<Method> branch;  // winner of the max, Combined30 only
	ValidityReport<Scalar> validity;
	std::optional<Convergence> convergence;  // numeric routes only
};

}  // namespace gnli
