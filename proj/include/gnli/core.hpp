#pragma once

// Domain value types for a single-band Nyquist-WDM link and the engineering
// unit bridge. Everything inside the library is SI: m, s, Hz, W.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gnli {

/// Rejected input. `field` names the offending parameter so front ends can
/// report it without parsing the message.
class InputError : public std::invalid_argument
{
public:
	InputError(std::string field, const std::string& what)
	    : std::invalid_argument(field + ": " + what), field_(std::move(field))
	{
	}

	const std::string& field() const noexcept { return field_; }

private:
	std::string field_;
};

/// Fiber parameters. `alpha` is the field attenuation (power decays as
/// exp(-2 alpha z)); `beta2` is the dispersion magnitude, with the sign of the
/// value it was built from kept in `beta2_negative`.
template <typename Scalar = double>
struct Fiber {
	Scalar alpha{};  // 1/m
	Scalar beta2{};  // s^2/m, > 0
	Scalar gamma{};  // 1/(W m)
	bool beta2_negative = false;
};

/// Identical spans, each followed by an amplifier that exactly restores the
/// span loss.
template <typename Scalar = double>
struct Link {
	Scalar span_length{};  // m
	int num_spans = 1;
};

/// Rectangular comb of total width `bandwidth` and flat PSD `psd`.
template <typename Scalar = double>
struct Spectrum {
	Scalar bandwidth{};  // Hz
	Scalar psd{};        // W/Hz
};

template <typename Scalar>
void validate(const Fiber<Scalar>& fiber)
{
	if (!(fiber.alpha >= 0) || !std::isfinite(fiber.alpha)) {
		throw InputError("alpha", "attenuation must be finite and >= 0");
	}
	if (!(fiber.beta2 > 0) || !std::isfinite(fiber.beta2)) {
		throw InputError("beta2", "dispersion magnitude must be finite and > 0");
	}
	if (!(fiber.gamma > 0) || !std::isfinite(fiber.gamma)) {
		throw InputError("gamma", "nonlinearity must be finite and > 0");
	}
}

template <typename Scalar>
void validate(const Link<Scalar>& link)
{
	if (!(link.span_length > 0) || !std::isfinite(link.span_length)) {
		throw InputError("span_length", "span length must be finite and > 0");
	}
	if (link.num_spans < 1) {
		throw InputError("num_spans", "number of spans must be >= 1");
	}
}

template <typename Scalar>
void validate(const Spectrum<Scalar>& spectrum)
{
	if (!(spectrum.bandwidth > 0) || !std::isfinite(spectrum.bandwidth)) {
		throw InputError("bandwidth", "comb bandwidth must be finite and > 0");
	}
	if (!(spectrum.psd > 0) || !std::isfinite(spectrum.psd)) {
		throw InputError("psd", "comb PSD must be finite and > 0");
	}
}

/// Builds a Fiber from the units fiber data sheets use: dB/km, ps^2/km (any
/// sign) and 1/(W km).
template <typename Scalar = double>
Fiber<Scalar> fiber_from_engineering(Scalar loss_db_per_km, Scalar beta2_ps2_per_km,
                                     Scalar gamma_per_w_km)
{
	if (!(loss_db_per_km >= 0) || !std::isfinite(loss_db_per_km)) {
		throw InputError("loss_db_per_km", "loss must be finite and >= 0");
	}
	if (beta2_ps2_per_km == 0 || !std::isfinite(beta2_ps2_per_km)) {
		throw InputError("beta2_ps2_per_km", "dispersion must be finite and nonzero");
	}
	if (!(gamma_per_w_km > 0) || !std::isfinite(gamma_per_w_km)) {
		throw InputError("gamma_per_w_km", "nonlinearity must be finite and > 0");
	}
	const Scalar ln10 = std::numbers::ln10_v<Scalar>;
	Fiber<Scalar> fiber;
	fiber.alpha = loss_db_per_km * ln10 / Scalar(20) / Scalar(1000);
	fiber.beta2 = std::abs(beta2_ps2_per_km) * Scalar(1e-24) / Scalar(1000);
	fiber.gamma = gamma_per_w_km / Scalar(1000);
	fiber.beta2_negative = beta2_ps2_per_km < 0;
	return fiber;
}

template <typename Scalar>
Scalar loss_db_per_km(const Fiber<Scalar>& fiber)
{
	return fiber.alpha * Scalar(1000) * Scalar(20) / std::numbers::ln10_v<Scalar>;
}

/// Signed, as originally supplied.
template <typename Scalar>
Scalar beta2_ps2_per_km(const Fiber<Scalar>& fiber)
{
	const Scalar magnitude = fiber.beta2 * Scalar(1000) / Scalar(1e-24);
	return fiber.beta2_negative ? -magnitude : magnitude;
}

template <typename Scalar>
Scalar gamma_per_w_km(const Fiber<Scalar>& fiber)
{
	return fiber.gamma * Scalar(1000);
}

template <typename Scalar = double>
Link<Scalar> link_from_km(Scalar span_km, int num_spans)
{
	Link<Scalar> link{span_km * Scalar(1000), num_spans};
	validate(link);
	return link;
}

template <typename Scalar = double>
Spectrum<Scalar> spectrum_from_thz(Scalar bandwidth_thz, Scalar psd_w_per_thz)
{
	Spectrum<Scalar> spectrum{bandwidth_thz * Scalar(1e12), psd_w_per_thz / Scalar(1e12)};
	validate(spectrum);
	return spectrum;
}

/// Power loss of one span, 20 alpha L / ln 10.
template <typename Scalar>
Scalar span_loss_db(const Fiber<Scalar>& fiber, const Link<Scalar>& link)
{
	return Scalar(20) * fiber.alpha * link.span_length / std::numbers::ln10_v<Scalar>;
}

}  // namespace gnli
