#pragma once

// Units, domain types, and the closed-form linear Stark physics.
//
// Unit conventions, fixed across the whole library:
//   frequency          MHz (linear frequency; angular only inside formulas)
//   electric field     V/cm (signed, sign encodes polarity)
//   Stark coefficient  kHz/(V/cm) — the effective per-h product of the
//                      dipole-moment difference and the Lorentz factor
//   hole width gamma   MHz, half width at half maximum (HWHM)

#include <cmath>
#include <numbers>
#include <variant>

#include "starkhole/errors.hpp"

namespace starkhole {

inline constexpr double kPi = std::numbers::pi;

namespace detail {
inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}
}  // namespace detail

// Linear frequency in MHz.
struct Frequency {
    double mhz = 0.0;

    Frequency() = default;
    explicit Frequency(double value_mhz) : mhz(value_mhz) {
        detail::require_finite(mhz, "frequency");
    }

    double khz() const { return mhz * 1e3; }
    // Angular frequency, 2*pi*nu (Mrad/s when nu is MHz).
    double angular() const { return 2.0 * kPi * mhz; }
    static Frequency from_angular(double omega) { return Frequency(omega / (2.0 * kPi)); }
};

// Applied DC field in V/cm; may be negative (polarity).
struct ElectricField {
    double v_per_cm = 0.0;

    ElectricField() = default;
    explicit ElectricField(double value_v_per_cm) : v_per_cm(value_v_per_cm) {
        detail::require_finite(v_per_cm, "electric field");
    }
};

// Local-field correction chi = (epsilon + 2)/3.
struct LorentzFactor {
    double epsilon = 1.0;
    double chi = 1.0;
};

// Effective Stark coefficient kappa = (dipole-moment difference x chi)/h,
// in kHz per V/cm, with its 1-sigma uncertainty.
struct StarkCoefficient {
    double khz_per_v_cm = 0.0;
    double sigma = 0.0;

    StarkCoefficient() = default;
    explicit StarkCoefficient(double kappa, double sigma_kappa = 0.0)
        : khz_per_v_cm(kappa), sigma(sigma_kappa) {
        detail::require_finite(khz_per_v_cm, "stark coefficient");
        if (!(sigma >= 0.0)) throw DomainError("stark coefficient sigma must be >= 0");
    }
};

// Projection of the dipole-difference direction on the field axis.
struct DipoleAngle {
    double cos_theta = 1.0;

    DipoleAngle() = default;
    explicit DipoleAngle(double c) : cos_theta(c) {
        if (!(std::fabs(cos_theta) <= 1.0)) throw DomainError("|cos theta| must be <= 1");
    }
};

// Zero-field spectral-hole half width at half maximum, MHz.
// The x-variable of the broadened shape is scaled by this HWHM; reported
// hole widths are FWHM = 2*gamma.
struct HoleWidth {
    double gamma_mhz = 1.0;

    HoleWidth() = default;
    explicit HoleWidth(double hwhm_mhz) : gamma_mhz(hwhm_mhz) {
        if (!(gamma_mhz > 0.0) || !std::isfinite(gamma_mhz))
            throw DomainError("hole width gamma must be > 0");
    }

    double fwhm_mhz() const { return 2.0 * gamma_mhz; }
};

// Dimensionless broadening parameter f_bar and detuning x.
struct BroadeningParam {
    double f_bar = 0.0;
    double x = 0.0;

    BroadeningParam() = default;
    BroadeningParam(double f, double detuning) : f_bar(f), x(detuning) {
        if (!(f_bar >= 0.0)) throw DomainError("f_bar must be >= 0");
    }
};

// chi = (epsilon + 2)/3; requires epsilon >= 1.
inline LorentzFactor lorentz_factor(double epsilon) {
    if (!(epsilon >= 1.0)) throw DomainError("dielectric constant must be >= 1");
    return {epsilon, (epsilon + 2.0) / 3.0};
}

// Frequency scale kappa*|E| as a linear frequency in MHz.
inline Frequency stark_scale(const StarkCoefficient& kappa, const ElectricField& field) {
    return Frequency(kappa.khz_per_v_cm * std::fabs(field.v_per_cm) * 1e-3);
}

// Linear-frequency Stark shift, kappa*E*cos(theta), in MHz.
// Sign follows sign(E)*sign(cos theta).
inline Frequency stark_shift(const StarkCoefficient& kappa, const ElectricField& field,
                             const DipoleAngle& angle) {
    return Frequency(kappa.khz_per_v_cm * field.v_per_cm * angle.cos_theta * 1e-3);
}

// Maxwell distribution of dipole-difference magnitudes, in units of the
// most likely value (mode at u = 1): g(u) = 4/sqrt(pi) u^2 exp(-u^2).
inline double maxwell_pdf(double u) {
    if (!(u >= 0.0)) throw DomainError("maxwell_pdf argument must be >= 0");
    return 4.0 / std::sqrt(kPi) * u * u * std::exp(-u * u);
}

// Broadening parameter f_bar = (kappa*|E| as linear frequency)/gamma.
// Both numerator and denominator are linear frequencies in MHz, so the
// angular-frequency factors of the defining formula cancel.
inline BroadeningParam f_bar_from(const StarkCoefficient& kappa, const ElectricField& field,
                                  const HoleWidth& gamma) {
    return BroadeningParam(stark_scale(kappa, field).mhz / gamma.gamma_mhz, 0.0);
}

// --- medium model -----------------------------------------------------------

// Single dipole direction; inversion_symmetric selects the pseudo-Stark
// doublet of centrosymmetric hosts (dipoles in opposing directions).
struct CrystalMedium {
    StarkCoefficient kappa;
    bool inversion_symmetric = false;
};

// Randomly oriented dipoles with Maxwell-distributed magnitudes.
struct AmorphousMedium {
    StarkCoefficient kappa;
};

using MediumModel = std::variant<CrystalMedium, AmorphousMedium>;

inline const StarkCoefficient& medium_kappa(const MediumModel& medium) {
    return std::visit([](const auto& m) -> const StarkCoefficient& { return m.kappa; }, medium);
}

inline bool is_amorphous(const MediumModel& medium) {
    return std::holds_alternative<AmorphousMedium>(medium);
}

}  // namespace starkhole
