#pragma once

// Text persistence for scan profiles and sweep directories. Files are
// self-describing: '#'-prefixed "key: value" header lines followed by a
// comma-separated numeric payload written at 17 significant digits, so a
// write -> read -> write cycle reproduces the payload bytes exactly.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "starkhole/fitting.hpp"

namespace starkhole {

struct ProfileFile {
    HoleProfile profile;
    // campaign step this scan belongs to (equals profile.field for
    // during-scans; before/after scans are taken at zero applied field)
    double sweep_field_v_per_cm = 0.0;

    std::optional<std::string> medium;  // "crystal" | "crystal-centrosymmetric" | "amorphous"
    std::optional<double> kappa_khz_per_v_cm;
    std::optional<double> gamma_mhz;
    std::optional<double> gap_mm;
    std::optional<double> noise_sigma;  // generator sigma, metadata only
    std::optional<std::uint64_t> seed;

    void write(const std::filesystem::path& path) const;
    static ProfileFile read(const std::filesystem::path& path);
};

std::string medium_name(const MediumModel& medium);
MediumModel medium_from_name(const std::string& name, double kappa_khz_per_v_cm = 0.0);

// Header fields stamped into every file of a saved sweep.
struct CampaignMeta {
    std::optional<double> gap_mm;
    std::optional<double> noise_sigma;
    std::optional<std::uint64_t> seed;
};

// Read every *.csv in the directory into a sweep, normalizing polarity.
// The medium comes from the file headers unless an override is supplied.
FieldSweep load_sweep(const std::filesystem::path& dir,
                      const std::optional<MediumModel>& medium_override = std::nullopt);

// Write a sweep as one file per scan: scan_<idx>_<tag>.csv.
void save_sweep(const FieldSweep& sweep, const std::filesystem::path& dir,
                const CampaignMeta& meta = {});

}  // namespace starkhole
