#include "starkhole/expsim.hpp"

#include <cmath>

#include "starkhole/errors.hpp"
#include "starkhole/lineshape.hpp"
#include "starkhole/rng.hpp"

namespace starkhole {

void ScanConfig::validate() const {
    if (!(span_mhz > 0.0)) throw DomainError("scan config: span must be > 0");
    if (n_points < 16) throw DomainError("scan config: need at least 16 points");
    if (!(gamma.gamma_mhz > 0.0)) throw DomainError("scan config: gamma must be > 0");
    if (!(hole_depth > 0.0) || hole_depth > 1.0)
        throw DomainError("scan config: hole depth must be in (0, 1]");
    if (!(noise_sigma >= 0.0)) throw DomainError("scan config: noise sigma must be >= 0");
}

namespace {

double lorentz_peak(double nu_mhz, double center_mhz, double gamma_mhz) {
    const double t = (nu_mhz - center_mhz) / gamma_mhz;
    return 1.0 / (1.0 + t * t);
}

constexpr double kShapeTol = 1e-9;

}  // namespace

HoleProfile simulate_scan(const MediumModel& medium, ElectricField field,
                          const ScanConfig& cfg, ScanTag tag) {
    cfg.validate();
    const ElectricField applied = tag == ScanTag::during ? field : ElectricField(0.0);
    const double kappa = medium_kappa(medium).khz_per_v_cm;
    const double gamma = cfg.gamma.gamma_mhz;

    HoleProfile profile;
    profile.field = applied;
    profile.scan_tag = tag;
    profile.freq_offsets_mhz.resize(static_cast<std::size_t>(cfg.n_points));
    profile.signal.resize(static_cast<std::size_t>(cfg.n_points));
    const double step = cfg.span_mhz / (cfg.n_points - 1);
    for (int i = 0; i < cfg.n_points; ++i)
        profile.freq_offsets_mhz[static_cast<std::size_t>(i)] =
            -0.5 * cfg.span_mhz + step * i;

    const bool amorphous = is_amorphous(medium);
    const bool centro =
        !amorphous && std::get<CrystalMedium>(medium).inversion_symmetric;
    const double shift_mhz = kappa * applied.v_per_cm * 1e-3;

    if (amorphous) {
        const double f_bar = f_bar_from(medium_kappa(medium), applied, cfg.gamma).f_bar;
        // pi * h keeps the zero-field peak at hole_depth and conserves area
        // as the hole broadens under field.
        HoleShapeQuery q;
        q.f_bar = f_bar;
        q.rel_tol = kShapeTol;
        q.x_values.reserve(profile.freq_offsets_mhz.size());
        for (double nu : profile.freq_offsets_mhz) q.x_values.push_back(nu / gamma);
        const std::vector<double> h = hole_shape_curve(q);
        for (std::size_t i = 0; i < h.size(); ++i)
            profile.signal[i] = cfg.hole_depth * kPi * h[i];
    } else if (centro) {
        // ions split into two equal subclasses with opposing dipole
        // orientations: half-depth lines at +/- the Stark shift
        for (std::size_t i = 0; i < profile.signal.size(); ++i) {
            const double nu = profile.freq_offsets_mhz[i];
            profile.signal[i] =
                0.5 * cfg.hole_depth *
                (lorentz_peak(nu, shift_mhz, gamma) + lorentz_peak(nu, -shift_mhz, gamma));
        }
    } else {
        for (std::size_t i = 0; i < profile.signal.size(); ++i)
            profile.signal[i] =
                cfg.hole_depth * lorentz_peak(profile.freq_offsets_mhz[i], shift_mhz, gamma);
    }

    if (cfg.noise_sigma > 0.0) {
        for (std::size_t i = 0; i < profile.signal.size(); ++i)
            profile.signal[i] += cfg.noise_sigma * CounterRng(cfg.seed, i).normal();
        profile.noise_sigma.assign(profile.signal.size(), cfg.noise_sigma);
    }
    return profile;
}

FieldSweep simulate_sweep(const MediumModel& medium,
                          const std::vector<ElectricField>& fields,
                          const ScanConfig& cfg) {
    if (fields.empty()) throw DomainError("simulate_sweep: field list is empty");
    cfg.validate();

    FieldSweep sweep;
    sweep.medium = medium;
    sweep.gamma_zero_field = cfg.gamma;
    sweep.se_gamma_zero_field = 0.0;

    constexpr ScanTag kTags[] = {ScanTag::before, ScanTag::during, ScanTag::after};
    for (std::size_t k = 0; k < fields.size(); ++k) {
        for (std::size_t t = 0; t < 3; ++t) {
            ScanConfig scan = cfg;
            scan.seed = derive_seed(cfg.seed, k, t);
            SweepRecord rec;
            rec.field = fields[k];
            rec.profile = simulate_scan(medium, fields[k], scan, kTags[t]);
            sweep.records.push_back(std::move(rec));
        }
    }
    return sweep;
}

ElectricField field_from_voltage(double voltage_v, double gap_mm) {
    if (!(gap_mm > 0.0)) throw DomainError("electrode gap must be > 0");
    return ElectricField(voltage_v / (gap_mm * 0.1));
}

std::vector<ElectricField> CampaignPreset::fields() const {
    std::vector<ElectricField> out;
    out.reserve(voltages_v.size());
    for (double v : voltages_v) out.push_back(field_from_voltage(v, gap_mm));
    return out;
}

CampaignPreset preset_crystal_linbo3() {
    CampaignPreset p;
    p.name = "crystal-linbo3";
    p.medium = CrystalMedium{StarkCoefficient(25.0), false};
    for (int v = -200; v <= 200; v += 50) p.voltages_v.push_back(v);
    p.gap_mm = 1.0;
    p.scan.span_mhz = 1200.0;
    p.scan.n_points = 1024;
    p.scan.gamma = HoleWidth(10.0);
    p.scan.hole_depth = 0.5;
    p.scan.noise_sigma = 0.02;
    p.scan.seed = 1;
    p.wavelength_nm = "1531.00";
    p.temperature = "3.8 K";
    return p;
}

CampaignPreset preset_fiber_silicate() {
    CampaignPreset p;
    p.name = "fiber-silicate";
    p.medium = AmorphousMedium{StarkCoefficient(15.0)};
    for (int v = 0; v <= 120; v += 20) p.voltages_v.push_back(v);
    p.gap_mm = 0.3;
    p.scan.span_mhz = 400.0;
    p.scan.n_points = 800;
    p.scan.gamma = HoleWidth(5.0);
    p.scan.hole_depth = 0.5;
    p.scan.noise_sigma = 0.02;
    p.scan.seed = 1;
    p.wavelength_nm = "1531";
    p.temperature = "50 mK";
    return p;
}

const CampaignPreset* find_preset(const std::string& name) {
    static const CampaignPreset crystal = preset_crystal_linbo3();
    static const CampaignPreset fiber = preset_fiber_silicate();
    if (name == crystal.name) return &crystal;
    if (name == fiber.name) return &fiber;
    return nullptr;
}

}  // namespace starkhole
