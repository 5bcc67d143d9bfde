#pragma once

// Synthetic hole-burning experiments: the three-scan protocol (reference
// scan, scan under field, scan after removal) for crystalline and
// amorphous media, with seeded Gaussian noise.

#include <cstdint>
#include <string>
#include <vector>

#include "starkhole/fitting.hpp"
#include "starkhole/stark.hpp"

namespace starkhole {

struct ScanConfig {
    double span_mhz = 400.0;       // full scan width, centered on the hole
    int n_points = 800;
    HoleWidth gamma{5.0};          // zero-field hole HWHM
    double hole_depth = 0.5;       // peak depth at zero field, in (0, 1]
    double noise_sigma = 0.0;      // additive white Gaussian, signal units
    std::uint64_t seed = 1;

    void validate() const;
};

// One scan of the protocol. The profile's own field is the field actually
// applied while scanning (zero for before/after), its scan_tag records the
// protocol step. Signal is stored as positive hole depth.
HoleProfile simulate_scan(const MediumModel& medium, ElectricField field,
                          const ScanConfig& cfg, ScanTag tag);

// Full campaign: (before, during, after) at every field, with per-scan
// seeds derived from (cfg.seed, field index, scan tag).
FieldSweep simulate_sweep(const MediumModel& medium,
                          const std::vector<ElectricField>& fields,
                          const ScanConfig& cfg);

// Parallel-plate field: volts across a gap in millimeters, result in V/cm.
ElectricField field_from_voltage(double voltage_v, double gap_mm);

// Canned campaigns matching the two apparatus configurations.
struct CampaignPreset {
    std::string name;
    MediumModel medium;
    std::vector<double> voltages_v;
    double gap_mm;
    ScanConfig scan;
    std::string wavelength_nm;   // metadata only
    std::string temperature;     // metadata only

    std::vector<ElectricField> fields() const;
};

CampaignPreset preset_crystal_linbo3();
CampaignPreset preset_fiber_silicate();

// nullptr if the name matches no preset.
const CampaignPreset* find_preset(const std::string& name);

}  // namespace starkhole
