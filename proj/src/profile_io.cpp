#include "starkhole/profile_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "starkhole/errors.hpp"

namespace starkhole {

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw DomainError("profile file " + path.string() + ": bad number '" + s + "'");
    return v;
}

}  // namespace

std::string medium_name(const MediumModel& medium) {
    if (is_amorphous(medium)) return "amorphous";
    return std::get<CrystalMedium>(medium).inversion_symmetric ? "crystal-centrosymmetric"
                                                               : "crystal";
}

MediumModel medium_from_name(const std::string& name, double kappa_khz_per_v_cm) {
    const StarkCoefficient kappa(kappa_khz_per_v_cm);
    if (name == "amorphous") return AmorphousMedium{kappa};
    if (name == "crystal") return CrystalMedium{kappa, false};
    if (name == "crystal-centrosymmetric") return CrystalMedium{kappa, true};
    throw DomainError("unknown medium name: " + name);
}

void ProfileFile::write(const std::filesystem::path& path) const {
    profile.validate();
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");

    if (medium) out << "# medium: " << *medium << "\n";
    if (kappa_khz_per_v_cm)
        out << "# kappa_khz_per_v_cm: " << fmt17(*kappa_khz_per_v_cm) << "\n";
    out << "# field_v_per_cm: " << fmt17(profile.field.v_per_cm) << "\n";
    out << "# sweep_field_v_per_cm: " << fmt17(sweep_field_v_per_cm) << "\n";
    out << "# scan: " << to_string(profile.scan_tag) << "\n";
    if (gamma_mhz) out << "# gamma_mhz: " << fmt17(*gamma_mhz) << "\n";
    if (gap_mm) out << "# gap_mm: " << fmt17(*gap_mm) << "\n";
    if (noise_sigma) out << "# noise_sigma: " << fmt17(*noise_sigma) << "\n";
    if (seed) out << "# seed: " << *seed << "\n";

    const bool with_sigma = !profile.noise_sigma.empty();
    out << "# columns: freq_offset_mhz,signal" << (with_sigma ? ",noise_sigma" : "") << "\n";
    for (std::size_t i = 0; i < profile.signal.size(); ++i) {
        out << fmt17(profile.freq_offsets_mhz[i]) << ',' << fmt17(profile.signal[i]);
        if (with_sigma) out << ',' << fmt17(profile.noise_sigma[i]);
        out << '\n';
    }
    if (!out) throw Error("write failed: " + path.string());
}

ProfileFile ProfileFile::read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());

    ProfileFile file;
    std::map<std::string, std::string> header;
    std::string line;
    bool saw_payload = false;

    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '#') {
            const auto colon = line.find(':', 1);
            if (colon == std::string::npos) continue;
            const std::string key = trim(line.substr(1, colon - 1));
            header[key] = trim(line.substr(colon + 1));
            continue;
        }
        std::vector<double> cells;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(parse_double(trim(cell), path));
        if (cells.size() < 2 || cells.size() > 3)
            throw DomainError("profile file " + path.string() + ": expected 2 or 3 columns");
        file.profile.freq_offsets_mhz.push_back(cells[0]);
        file.profile.signal.push_back(cells[1]);
        if (cells.size() == 3) file.profile.noise_sigma.push_back(cells[2]);
        saw_payload = true;
    }
    if (!saw_payload) throw DomainError("profile file " + path.string() + ": no data rows");
    if (!file.profile.noise_sigma.empty() &&
        file.profile.noise_sigma.size() != file.profile.signal.size())
        throw DomainError("profile file " + path.string() + ": ragged noise_sigma column");

    auto get = [&](const char* key) -> std::optional<std::string> {
        const auto it = header.find(key);
        if (it == header.end()) return std::nullopt;
        return it->second;
    };

    if (auto v = get("medium")) file.medium = *v;
    if (auto v = get("kappa_khz_per_v_cm")) file.kappa_khz_per_v_cm = parse_double(*v, path);
    if (auto v = get("field_v_per_cm")) file.profile.field = ElectricField(parse_double(*v, path));
    if (auto v = get("scan")) file.profile.scan_tag = scan_tag_from_string(*v);
    if (auto v = get("sweep_field_v_per_cm"))
        file.sweep_field_v_per_cm = parse_double(*v, path);
    else
        file.sweep_field_v_per_cm = file.profile.field.v_per_cm;
    if (auto v = get("gamma_mhz")) file.gamma_mhz = parse_double(*v, path);
    if (auto v = get("gap_mm")) file.gap_mm = parse_double(*v, path);
    if (auto v = get("noise_sigma")) file.noise_sigma = parse_double(*v, path);
    if (auto v = get("seed")) file.seed = std::strtoull(v->c_str(), nullptr, 10);

    file.profile.validate();
    return file;
}

FieldSweep load_sweep(const std::filesystem::path& dir,
                      const std::optional<MediumModel>& medium_override) {
    if (!std::filesystem::is_directory(dir))
        throw Error("sweep directory not found: " + dir.string());

    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw Error("sweep directory has no .csv files: " + dir.string());

    FieldSweep sweep;
    std::optional<std::string> medium_seen;
    std::optional<double> kappa_seen;
    std::optional<double> gamma_seen;

    for (const auto& path : paths) {
        ProfileFile file = ProfileFile::read(path);
        normalize_polarity(file.profile);
        if (file.medium) {
            if (medium_seen && *medium_seen != *file.medium)
                throw DomainError("sweep mixes media: " + *medium_seen + " vs " + *file.medium);
            medium_seen = file.medium;
        }
        if (file.kappa_khz_per_v_cm) kappa_seen = file.kappa_khz_per_v_cm;
        if (file.gamma_mhz) gamma_seen = file.gamma_mhz;
        SweepRecord rec;
        rec.field = ElectricField(file.sweep_field_v_per_cm);
        rec.profile = std::move(file.profile);
        sweep.records.push_back(std::move(rec));
    }

    if (medium_override) {
        sweep.medium = *medium_override;
    } else if (medium_seen) {
        sweep.medium = medium_from_name(*medium_seen, kappa_seen.value_or(0.0));
    } else {
        throw DomainError(
            "sweep files carry no medium header; pass the medium explicitly");
    }
    if (gamma_seen) {
        sweep.gamma_zero_field = HoleWidth(*gamma_seen);
        sweep.se_gamma_zero_field = 0.0;
    }
    return sweep;
}

void save_sweep(const FieldSweep& sweep, const std::filesystem::path& dir,
                const CampaignMeta& meta) {
    std::filesystem::create_directories(dir);
    const std::string medium = medium_name(sweep.medium);
    const double kappa = medium_kappa(sweep.medium).khz_per_v_cm;

    for (std::size_t i = 0; i < sweep.records.size(); ++i) {
        const SweepRecord& rec = sweep.records[i];
        ProfileFile file;
        file.profile = rec.profile;
        file.sweep_field_v_per_cm = rec.field.v_per_cm;
        file.medium = medium;
        if (kappa != 0.0) file.kappa_khz_per_v_cm = kappa;
        if (sweep.gamma_zero_field) file.gamma_mhz = sweep.gamma_zero_field->gamma_mhz;
        file.gap_mm = meta.gap_mm;
        file.noise_sigma = meta.noise_sigma;
        file.seed = meta.seed;

        char name[64];
        std::snprintf(name, sizeof name, "scan_%03zu_%s.csv", i,
                      to_string(rec.profile.scan_tag));
        file.write(dir / name);
    }
}

}  // namespace starkhole
