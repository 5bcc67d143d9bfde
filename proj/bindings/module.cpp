#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "starkhole/cribplan.hpp"
#include "starkhole/expsim.hpp"
#include "starkhole/fitting.hpp"
#include "starkhole/lineshape.hpp"
#include "starkhole/mc.hpp"
#include "starkhole/profile_io.hpp"
#include "starkhole/version.hpp"

namespace py = pybind11;
using namespace starkhole;

namespace {

HoleProfile profile_from_arrays(const std::vector<double>& freq, const std::vector<double>& signal,
                                const std::vector<double>& sigma) {
    HoleProfile p;
    p.freq_offsets_mhz = freq;
    p.signal = signal;
    p.noise_sigma = sigma;
    return p;
}

py::dict lorentz_dict(const LorentzFit& f) {
    py::dict d;
    d["center_mhz"] = f.center_mhz;
    d["gamma_hwhm_mhz"] = f.gamma_hwhm_mhz;
    d["fwhm_mhz"] = f.fwhm_mhz();
    d["amplitude"] = f.amplitude;
    d["baseline"] = f.baseline;
    d["se_center"] = f.se_center;
    d["se_gamma"] = f.se_gamma;
    d["se_amplitude"] = f.se_amplitude;
    d["se_baseline"] = f.se_baseline;
    d["residual_norm"] = f.residual_norm;
    d["iterations"] = f.iterations;
    return d;
}

py::dict broadened_dict(const BroadenedFit& f) {
    py::dict d;
    d["f_bar"] = f.f_bar;
    d["amplitude"] = f.amplitude;
    d["baseline"] = f.baseline;
    d["center_mhz"] = f.center_mhz;
    d["se_f_bar"] = f.se_f_bar;
    d["se_amplitude"] = f.se_amplitude;
    d["se_baseline"] = f.se_baseline;
    d["se_center"] = f.se_center;
    d["residual_norm"] = f.residual_norm;
    d["iterations"] = f.iterations;
    d["at_zero_boundary"] = f.at_zero_boundary;
    return d;
}

py::dict extraction_dict(const ExtractionResult& r) {
    py::dict d;
    d["kappa_khz_per_v_cm"] = r.kappa.khz_per_v_cm;
    d["kappa_sigma"] = r.kappa.sigma;
    d["gamma_zero_field_mhz"] = r.gamma_zero_field.gamma_mhz;
    d["se_gamma_zero_field_mhz"] = r.se_gamma_zero_field;
    d["slope_mhz_per_v_cm"] = r.line.slope;
    d["se_slope"] = r.line.se_slope;
    py::list pts;
    for (const auto& p : r.points) {
        py::dict row;
        row["field_v_per_cm"] = p.field_v_per_cm;
        row["y_mhz"] = p.y_mhz;
        row["y_sigma"] = p.y_sigma;
        row["f_bar"] = p.f_bar;
        row["se_f_bar"] = p.se_f_bar;
        pts.append(row);
    }
    d["points"] = pts;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "spectral-hole Stark response toolkit";
    m.attr("__version__") = kVersion;

    m.def(
        "hole_shape",
        [](double x, double f_bar, double rel_tol) { return hole_shape(x, f_bar, rel_tol); },
        py::arg("x"), py::arg("f_bar"), py::arg("rel_tol") = kDefaultRelTol,
        "Broadened hole shape h(x; f_bar), unit area, x in units of gamma.");

    m.def(
        "hole_shape_curve",
        [](const std::vector<double>& x, double f_bar, double rel_tol) {
            HoleShapeQuery q;
            q.x_values = x;
            q.f_bar = f_bar;
            q.rel_tol = rel_tol;
            return hole_shape_curve(q);
        },
        py::arg("x"), py::arg("f_bar"), py::arg("rel_tol") = kDefaultRelTol);

    m.def("hole_fwhm", &hole_fwhm, py::arg("f_bar"),
          "FWHM of h(x; f_bar) in units of gamma (2 at f_bar = 0).");

    m.def(
        "mc_hole_shape",
        [](double f_bar, std::uint64_t n_samples, std::uint64_t seed,
           const std::vector<double>& x_grid, int workers) {
            EnsembleSpec spec;
            spec.f_bar = f_bar;
            spec.n_samples = n_samples;
            spec.seed = seed;
            spec.x_grid = x_grid;
            spec.n_workers = workers;
            const McProfile prof = mc_hole_shape(spec);
            py::dict d;
            d["x"] = prof.x;
            d["mean"] = prof.mean;
            d["std_error"] = prof.std_error;
            d["n_samples"] = prof.n_samples;
            return d;
        },
        py::arg("f_bar"), py::arg("n_samples"), py::arg("seed"), py::arg("x_grid"),
        py::arg("workers") = 0,
        "Ensemble-averaged hole shape with per-point standard errors.");

    m.def(
        "fit_lorentzian",
        [](const std::vector<double>& freq, const std::vector<double>& signal,
           const std::vector<double>& sigma) {
            return lorentz_dict(fit_lorentzian(profile_from_arrays(freq, signal, sigma)));
        },
        py::arg("freq_offsets_mhz"), py::arg("signal"),
        py::arg("noise_sigma") = std::vector<double>{});

    m.def(
        "fit_broadened",
        [](const std::vector<double>& freq, const std::vector<double>& signal, double gamma_mhz,
           const std::vector<double>& sigma) {
            return broadened_dict(
                fit_broadened(profile_from_arrays(freq, signal, sigma), HoleWidth(gamma_mhz)));
        },
        py::arg("freq_offsets_mhz"), py::arg("signal"), py::arg("gamma_mhz"),
        py::arg("noise_sigma") = std::vector<double>{});

    m.def(
        "linfit_origin",
        [](const std::vector<double>& x, const std::vector<double>& y,
           const std::vector<double>& sigma) {
            const LinFit f = linfit_origin(x, y, sigma);
            py::dict d;
            d["slope"] = f.slope;
            d["se_slope"] = f.se_slope;
            d["residual_norm"] = f.residual_norm;
            d["n_points"] = f.n_points;
            return d;
        },
        py::arg("x"), py::arg("y"), py::arg("y_sigma") = std::vector<double>{});

    m.def(
        "simulate_campaign",
        [](const std::string& preset_name, const std::string& out_dir,
           std::optional<std::uint64_t> seed, std::optional<double> noise_sigma) {
            const CampaignPreset* p = find_preset(preset_name);
            if (!p) throw DomainError("unknown preset: " + preset_name);
            CampaignPreset cfg = *p;
            if (seed) cfg.scan.seed = *seed;
            if (noise_sigma) cfg.scan.noise_sigma = *noise_sigma;
            const FieldSweep sweep = simulate_sweep(cfg.medium, cfg.fields(), cfg.scan);
            CampaignMeta meta;
            meta.gap_mm = cfg.gap_mm;
            meta.noise_sigma = cfg.scan.noise_sigma;
            meta.seed = cfg.scan.seed;
            save_sweep(sweep, out_dir, meta);
            return static_cast<int>(sweep.records.size());
        },
        py::arg("preset"), py::arg("out_dir"), py::arg("seed") = std::nullopt,
        py::arg("noise_sigma") = std::nullopt,
        "Write a synthetic three-scan campaign to a directory; returns the scan count.");

    m.def(
        "extract",
        [](const std::string& sweep_dir, const std::string& medium) {
            std::optional<MediumModel> override_medium;
            if (!medium.empty()) override_medium = medium_from_name(medium);
            const FieldSweep sweep = load_sweep(sweep_dir, override_medium);
            const ExtractionResult r = is_amorphous(sweep.medium)
                                           ? extract_stark_amorphous(sweep)
                                           : extract_stark_crystal(sweep);
            return extraction_dict(r);
        },
        py::arg("sweep_dir"), py::arg("medium") = std::string{},
        "Run the full extraction pipeline on a sweep directory.");

    m.def("bandwidth_from_duration", &bandwidth_from_duration, py::arg("duration_ns"));

    m.def(
        "crystal_field_plan",
        [](double bandwidth_mhz, double kappa) {
            const CribTarget t = CribTarget::from_bandwidth(
                bandwidth_mhz, CrystalMedium{StarkCoefficient(kappa), false}, HoleWidth(1.0));
            return crystal_field_plan(t).e_max_v_per_cm;
        },
        py::arg("bandwidth_mhz"), py::arg("kappa_khz_per_v_cm"),
        "Gradient extreme +/-E_max (V/cm) whose shift span covers the bandwidth.");

    m.def(
        "amorphous_field_plan",
        [](double bandwidth_mhz, double kappa, double gamma_mhz) {
            const CribTarget t = CribTarget::from_bandwidth(
                bandwidth_mhz, AmorphousMedium{StarkCoefficient(kappa)}, HoleWidth(gamma_mhz));
            const AmorphousFieldPlan plan = amorphous_field_plan(t);
            py::dict d;
            d["e_v_per_cm"] = plan.e_v_per_cm;
            d["f_bar"] = plan.f_bar;
            return d;
        },
        py::arg("bandwidth_mhz"), py::arg("kappa_khz_per_v_cm"), py::arg("gamma_mhz"),
        "Homogeneous field (V/cm) whose broadened FWHM reaches the bandwidth.");
}
