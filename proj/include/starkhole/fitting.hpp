#pragma once

// Parameter estimation: Lorentzian hole fits, broadened-hole fits for the
// f_bar parameter, weighted regression through the origin, and Stark
// coefficient extraction with uncertainties.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "starkhole/stark.hpp"

namespace starkhole {

enum class ScanTag { before, during, after };

const char* to_string(ScanTag tag);
ScanTag scan_tag_from_string(const std::string& s);

// One background-subtracted transmission-dip trace. The dip is stored as
// positive depth regardless of the raw polarity.
struct HoleProfile {
    std::vector<double> freq_offsets_mhz;  // strictly increasing
    std::vector<double> signal;
    std::vector<double> noise_sigma;  // empty, or one per point
    ElectricField field;              // field applied during this scan
    ScanTag scan_tag = ScanTag::during;

    void validate() const;
};

// Flip the trace so the dominant feature is positive-going; returns true
// if a flip was applied.
bool normalize_polarity(HoleProfile& profile);

struct LorentzFit {
    double center_mhz = 0.0;
    double gamma_hwhm_mhz = 0.0;
    double amplitude = 0.0;  // peak height above baseline
    double baseline = 0.0;
    double se_center = 0.0;
    double se_gamma = 0.0;
    double se_amplitude = 0.0;
    double se_baseline = 0.0;
    double residual_norm = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> cost_trace;

    double fwhm_mhz() const { return 2.0 * gamma_hwhm_mhz; }
};

struct BroadenedFit {
    double f_bar = 0.0;
    double amplitude = 0.0;
    double baseline = 0.0;
    double center_mhz = 0.0;
    double se_f_bar = 0.0;
    double se_amplitude = 0.0;
    double se_baseline = 0.0;
    double se_center = 0.0;
    double residual_norm = 0.0;
    bool converged = false;
    int iterations = 0;
    bool at_zero_boundary = false;  // f_bar estimate pinned at 0
    std::vector<double> cost_trace;
};

// One extraction campaign: per applied field, the (before, during, after)
// scans, flattened with the campaign field alongside each profile.
struct SweepRecord {
    ElectricField field;  // campaign field (applied during the 'during' scan)
    HoleProfile profile;
};

struct FieldSweep {
    std::vector<SweepRecord> records;
    MediumModel medium;
    // Zero-field HWHM; filled by extraction from the zero-field records.
    std::optional<HoleWidth> gamma_zero_field;
    double se_gamma_zero_field = 0.0;

    // True if any record can define the zero-field width.
    bool has_zero_field_record() const;
};

LorentzFit fit_lorentzian(const HoleProfile& profile);

// Fit amplitude*h((nu-center)/gamma; f_bar) + baseline with gamma fixed
// from the zero-field fit.
BroadenedFit fit_broadened(const HoleProfile& profile, const HoleWidth& gamma);

struct LinFit {
    double slope = 0.0;
    double se_slope = 0.0;
    double residual_norm = 0.0;
    int n_points = 0;
};

// Weighted least squares for y = m*x with zero intercept:
// m = sum(w x y)/sum(w x^2). y_sigma empty = unweighted.
LinFit linfit_origin(std::span<const double> x, std::span<const double> y,
                     std::span<const double> y_sigma = {});

struct ExtractionPoint {
    double field_v_per_cm = 0.0;
    double y_mhz = 0.0;     // center shift (crystal) or f_bar*gamma (amorphous)
    double y_sigma = 0.0;   // propagated fit standard error
    double f_bar = 0.0;     // amorphous only
    double se_f_bar = 0.0;  // amorphous only
};

struct ExtractionResult {
    StarkCoefficient kappa;
    HoleWidth gamma_zero_field{1.0};
    double se_gamma_zero_field = 0.0;
    std::vector<ExtractionPoint> points;
    LinFit line;
};

// Shift pipeline: per-field Lorentzian centers, shifts against the
// zero-field reference, regression through the origin.
ExtractionResult extract_stark_crystal(const FieldSweep& sweep);

// Broadening pipeline: zero-field gamma, per-field broadened fits for
// f_bar, regression of f_bar*gamma through the origin.
ExtractionResult extract_stark_amorphous(const FieldSweep& sweep);

struct ReversibilityRow {
    double field_v_per_cm = 0.0;
    double deviation_mhz = 0.0;  // after-scan center (crystal) or FWHM (amorphous) minus reference
    double sigma_mhz = 0.0;      // combined fit standard error
    bool pass = false;
};

struct ReversibilityReport {
    std::vector<ReversibilityRow> rows;
    double sigma_threshold = 3.0;
    bool all_pass = true;
};

// Crystal: after-scan centers must return to the zero-field center.
// Amorphous: after-scan FWHMs must return to the zero-field FWHM.
// Each row passes when |deviation| <= sigma_threshold * sigma.
ReversibilityReport reversibility_check(const FieldSweep& sweep, double sigma_threshold = 3.0);

}  // namespace starkhole
