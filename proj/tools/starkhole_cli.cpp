// starkhole: command-line front end for hole-shape evaluation, synthetic
// hole-burning campaigns, fitting, Stark-coefficient extraction, ensemble
// cross-checks, and broadening-field planning.
//
// Exit codes: 0 success, 1 computational failure, 2 usage error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "starkhole/cribplan.hpp"
#include "starkhole/errors.hpp"
#include "starkhole/expsim.hpp"
#include "starkhole/fitting.hpp"
#include "starkhole/lineshape.hpp"
#include "starkhole/mc.hpp"
#include "starkhole/profile_io.hpp"
#include "starkhole/version.hpp"

namespace sh = starkhole;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_manifest(const json& manifest, const std::string& path) {
    if (path.empty()) {
        std::cout << manifest.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw sh::Error("cannot open " + path + " for writing");
    out << manifest.dump(2) << "\n";
    std::cout << "manifest written to " << path << "\n";
}

json manifest_skeleton(const std::string& command) {
    json m;
    m["tool"] = "starkhole";
    m["version"] = sh::kVersion;
    m["command"] = command;
    return m;
}

// ---------------------------------------------------------------- shape

struct ShapeArgs {
    double f_bar = 0.0;
    double xmin = -10.0, xmax = 10.0;
    int points = 401;
    double rel_tol = sh::kDefaultRelTol;
    std::string out;
};

int run_shape(const ShapeArgs& a) {
    sh::HoleShapeQuery q;
    q.f_bar = a.f_bar;
    q.rel_tol = a.rel_tol;
    q.x_values.reserve(static_cast<std::size_t>(a.points));
    const double step = a.points > 1 ? (a.xmax - a.xmin) / (a.points - 1) : 0.0;
    for (int i = 0; i < a.points; ++i) q.x_values.push_back(a.xmin + step * i);

    const std::vector<double> h = sh::hole_shape_curve(q);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file) throw sh::Error("cannot open " + a.out + " for writing");
        os = &file;
    }
    *os << "# f_bar: " << fmt17(a.f_bar) << "\n# rel_tol: " << fmt17(a.rel_tol)
        << "\n# columns: x,h\n";
    for (std::size_t i = 0; i < h.size(); ++i)
        *os << fmt17(q.x_values[i]) << ',' << fmt17(h[i]) << '\n';
    if (!a.out.empty()) std::cout << "curve written to " << a.out << "\n";
    return 0;
}

// ------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string preset;
    std::string medium;
    double kappa = 0.0;
    bool centrosymmetric = false;
    std::vector<double> voltages;
    double gap_mm = 0.0;
    double span_mhz = 0.0;
    int points = 0;
    double gamma_mhz = 0.0;
    double depth = 0.0;
    double noise = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir;
};

int run_simulate(const SimulateArgs& a) {
    sh::CampaignPreset cfg;
    if (!a.preset.empty()) {
        const sh::CampaignPreset* p = sh::find_preset(a.preset);
        if (!p) throw CLI::ValidationError("unknown preset: " + a.preset);
        cfg = *p;
    } else {
        if (a.medium.empty())
            throw CLI::ValidationError("either --preset or --medium is required");
        if (a.voltages.empty())
            throw CLI::ValidationError("no voltages given (use --voltages or a preset)");
        if (!(a.gap_mm > 0.0))
            throw CLI::ValidationError("--gap must be > 0 (mm)");
        cfg.name = a.medium;
        cfg.medium = sh::medium_from_name(a.medium, a.kappa);
    }

    if (!a.medium.empty() && !a.preset.empty())
        cfg.medium = sh::medium_from_name(a.medium, a.kappa > 0.0
                                                        ? a.kappa
                                                        : sh::medium_kappa(cfg.medium).khz_per_v_cm);
    if (a.centrosymmetric) {
        auto* crystal = std::get_if<sh::CrystalMedium>(&cfg.medium);
        if (!crystal)
            throw CLI::ValidationError("--centrosymmetric applies only to crystal media");
        crystal->inversion_symmetric = true;
    }
    if (a.kappa > 0.0) {
        if (auto* c = std::get_if<sh::CrystalMedium>(&cfg.medium)) c->kappa = sh::StarkCoefficient(a.kappa);
        if (auto* m = std::get_if<sh::AmorphousMedium>(&cfg.medium)) m->kappa = sh::StarkCoefficient(a.kappa);
    }
    if (!a.voltages.empty()) cfg.voltages_v = a.voltages;
    if (a.gap_mm > 0.0) cfg.gap_mm = a.gap_mm;
    if (a.span_mhz > 0.0) cfg.scan.span_mhz = a.span_mhz;
    if (a.points > 0) cfg.scan.n_points = a.points;
    if (a.gamma_mhz > 0.0) cfg.scan.gamma = sh::HoleWidth(a.gamma_mhz);
    if (a.depth > 0.0) cfg.scan.hole_depth = a.depth;
    if (a.noise >= 0.0) cfg.scan.noise_sigma = a.noise;
    if (a.seed_set) cfg.scan.seed = a.seed;

    const sh::FieldSweep sweep = sh::simulate_sweep(cfg.medium, cfg.fields(), cfg.scan);
    sh::CampaignMeta meta;
    meta.gap_mm = cfg.gap_mm;
    meta.noise_sigma = cfg.scan.noise_sigma;
    meta.seed = cfg.scan.seed;
    sh::save_sweep(sweep, a.out_dir, meta);

    std::cout << "wrote " << sweep.records.size() << " scans ("
              << cfg.voltages_v.size() << " fields x 3) to " << a.out_dir << "\n";
    return 0;
}

// ------------------------------------------------------------------ fit

struct FitArgs {
    std::vector<std::string> files;
    std::string mode = "lorentzian";
    double gamma_mhz = 0.0;
    std::string zero_field_file;
    std::string manifest_path;
};

json lorentz_fit_json(const sh::LorentzFit& fit) {
    return {{"center_mhz", fit.center_mhz},
            {"gamma_hwhm_mhz", fit.gamma_hwhm_mhz},
            {"fwhm_mhz", fit.fwhm_mhz()},
            {"amplitude", fit.amplitude},
            {"baseline", fit.baseline},
            {"se_center", fit.se_center},
            {"se_gamma", fit.se_gamma},
            {"se_amplitude", fit.se_amplitude},
            {"se_baseline", fit.se_baseline},
            {"residual_norm", fit.residual_norm},
            {"iterations", fit.iterations}};
}

json broadened_fit_json(const sh::BroadenedFit& fit) {
    return {{"f_bar", fit.f_bar},
            {"amplitude", fit.amplitude},
            {"baseline", fit.baseline},
            {"center_mhz", fit.center_mhz},
            {"se_f_bar", fit.se_f_bar},
            {"se_amplitude", fit.se_amplitude},
            {"se_baseline", fit.se_baseline},
            {"se_center", fit.se_center},
            {"residual_norm", fit.residual_norm},
            {"iterations", fit.iterations},
            {"at_zero_boundary", fit.at_zero_boundary}};
}

int run_fit(const FitArgs& a) {
    double gamma = a.gamma_mhz;
    json manifest = manifest_skeleton("fit");
    manifest["mode"] = a.mode;

    if (a.mode == "broadened" && !(gamma > 0.0)) {
        if (a.zero_field_file.empty())
            throw CLI::ValidationError(
                "broadened mode needs --gamma or --zero-field <file>");
        sh::ProfileFile zf = sh::ProfileFile::read(a.zero_field_file);
        sh::normalize_polarity(zf.profile);
        const sh::LorentzFit fit = sh::fit_lorentzian(zf.profile);
        gamma = fit.gamma_hwhm_mhz;
        manifest["gamma_source"] = a.zero_field_file;
    }
    if (a.mode == "broadened") manifest["gamma_mhz"] = gamma;

    json results = json::array();
    int n_ok = 0;
    for (const std::string& path : a.files) {
        json entry;
        entry["file"] = path;
        try {
            sh::ProfileFile file = sh::ProfileFile::read(path);
            sh::normalize_polarity(file.profile);
            if (file.seed) entry["seed"] = *file.seed;
            if (a.mode == "lorentzian") {
                const sh::LorentzFit fit = sh::fit_lorentzian(file.profile);
                entry["fit"] = lorentz_fit_json(fit);
                std::cout << path << ": center " << fit.center_mhz << " MHz, HWHM "
                          << fit.gamma_hwhm_mhz << " MHz\n";
            } else {
                const sh::BroadenedFit fit = sh::fit_broadened(file.profile, sh::HoleWidth(gamma));
                entry["fit"] = broadened_fit_json(fit);
                std::cout << path << ": f_bar " << fit.f_bar << " +/- " << fit.se_f_bar
                          << (fit.at_zero_boundary ? " (pinned at 0)" : "") << "\n";
            }
            ++n_ok;
        } catch (const std::exception& e) {
            entry["error"] = e.what();
            std::cout << path << ": fit failed: " << e.what() << "\n";
        }
        results.push_back(entry);
    }
    manifest["inputs"] = a.files;
    manifest["results"] = results;
    emit_manifest(manifest, a.manifest_path);
    return n_ok > 0 ? 0 : 1;
}

// -------------------------------------------------------------- extract

struct ExtractArgs {
    std::string dir;
    std::string medium;
    std::string manifest_path;
};

int run_extract(const ExtractArgs& a) {
    std::optional<sh::MediumModel> override_medium;
    if (!a.medium.empty()) override_medium = sh::medium_from_name(a.medium);
    const sh::FieldSweep sweep = sh::load_sweep(a.dir, override_medium);

    const sh::ExtractionResult result = sh::is_amorphous(sweep.medium)
                                            ? sh::extract_stark_amorphous(sweep)
                                            : sh::extract_stark_crystal(sweep);

    json manifest = manifest_skeleton("extract");
    manifest["sweep_dir"] = a.dir;
    manifest["medium"] = sh::medium_name(sweep.medium);
    manifest["kappa_khz_per_v_cm"] = result.kappa.khz_per_v_cm;
    manifest["kappa_sigma"] = result.kappa.sigma;
    manifest["gamma_zero_field_mhz"] = result.gamma_zero_field.gamma_mhz;
    manifest["se_gamma_zero_field_mhz"] = result.se_gamma_zero_field;
    manifest["slope_mhz_per_v_cm"] = result.line.slope;
    manifest["se_slope"] = result.line.se_slope;
    json pts = json::array();
    for (const auto& p : result.points) {
        json row = {{"field_v_per_cm", p.field_v_per_cm},
                    {"y_mhz", p.y_mhz},
                    {"y_sigma", p.y_sigma}};
        if (sh::is_amorphous(sweep.medium)) {
            row["f_bar"] = p.f_bar;
            row["se_f_bar"] = p.se_f_bar;
        }
        pts.push_back(row);
    }
    manifest["points"] = pts;

    const sh::ReversibilityReport report = sh::reversibility_check(sweep);
    if (!report.rows.empty()) {
        json rows = json::array();
        for (const auto& r : report.rows)
            rows.push_back({{"field_v_per_cm", r.field_v_per_cm},
                            {"deviation_mhz", r.deviation_mhz},
                            {"sigma_mhz", r.sigma_mhz},
                            {"pass", r.pass}});
        manifest["reversibility"] = {{"sigma_threshold", report.sigma_threshold},
                                     {"all_pass", report.all_pass},
                                     {"rows", rows}};
    }

    char line[128];
    std::snprintf(line, sizeof line, "kappa = %.4g +/- %.2g kHz/(V/cm)",
                  result.kappa.khz_per_v_cm, result.kappa.sigma);
    std::cout << line << "\n";
    if (!report.rows.empty())
        std::cout << "reversibility: " << (report.all_pass ? "all pass" : "FAILURES") << " at "
                  << report.sigma_threshold << " sigma\n";
    emit_manifest(manifest, a.manifest_path);
    return 0;
}

// ----------------------------------------------------------------- plan

struct PlanArgs {
    std::string medium = "crystal";
    double kappa = 0.0;
    double gamma_mhz = 1.0;
    double bandwidth_mhz = 0.0;
    double duration_ns = 0.0;
    double t_switch_s = 1e-6;
    std::string manifest_path;
};

int run_plan(const PlanArgs& a) {
    const double bandwidth =
        a.duration_ns > 0.0 ? sh::bandwidth_from_duration(a.duration_ns) : a.bandwidth_mhz;
    const sh::MediumModel medium = sh::medium_from_name(a.medium, a.kappa);
    const sh::CribTarget target =
        sh::CribTarget::from_bandwidth(bandwidth, medium, sh::HoleWidth(a.gamma_mhz));

    json manifest = manifest_skeleton("plan");
    manifest["medium"] = a.medium;
    manifest["kappa_khz_per_v_cm"] = a.kappa;
    manifest["bandwidth_mhz"] = bandwidth;

    sh::FieldSchedule schedule;
    if (sh::is_amorphous(medium)) {
        const sh::AmorphousFieldPlan plan = sh::amorphous_field_plan(target);
        schedule = sh::polarity_reversal_map(plan, a.t_switch_s);
        manifest["plan"] = {{"type", "homogeneous"},
                            {"e_v_per_cm", plan.e_v_per_cm},
                            {"f_bar", plan.f_bar},
                            {"gamma_mhz", a.gamma_mhz}};
        std::cout << "homogeneous field: " << plan.e_v_per_cm << " V/cm (f_bar "
                  << plan.f_bar << ")\n";
    } else {
        const sh::CrystalFieldPlan plan = sh::crystal_field_plan(target);
        schedule = sh::polarity_reversal_map(plan, a.t_switch_s);
        manifest["plan"] = {{"type", "gradient"}, {"e_max_v_per_cm", plan.e_max_v_per_cm}};
        std::cout << "gradient field: -" << plan.e_max_v_per_cm << " to +"
                  << plan.e_max_v_per_cm << " V/cm\n";
    }

    json phases = json::array();
    for (const auto& ph : schedule.phases)
        phases.push_back({{"t_start_s", ph.t_start_s}, {"polarity", ph.polarity}});
    manifest["schedule"] = {{"amplitude_v_per_cm", schedule.amplitude_v_per_cm},
                            {"gradient", schedule.gradient},
                            {"phases", phases}};
    std::cout << "schedule: +field until " << a.t_switch_s << " s, then -field\n";
    emit_manifest(manifest, a.manifest_path);
    return 0;
}

// --------------------------------------------------------------- oracle

struct OracleArgs {
    double f_bar = 1.0;
    std::uint64_t samples = 200000;
    std::uint64_t seed = 1;
    double xmax = 8.0;
    int points = 17;
    int workers = 0;
    std::string out;
};

int run_oracle(const OracleArgs& a) {
    sh::EnsembleSpec spec;
    spec.f_bar = a.f_bar;
    spec.n_samples = a.samples;
    spec.seed = a.seed;
    spec.n_workers = a.workers;
    const double step = a.points > 1 ? 2.0 * a.xmax / (a.points - 1) : 0.0;
    for (int i = 0; i < a.points; ++i) spec.x_grid.push_back(-a.xmax + step * i);

    const sh::McProfile mc = sh::mc_hole_shape(spec);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!a.out.empty()) {
        file.open(a.out);
        if (!file) throw sh::Error("cannot open " + a.out + " for writing");
        os = &file;
    }
    *os << "# f_bar: " << fmt17(a.f_bar) << "\n# samples: " << a.samples
        << "\n# seed: " << a.seed << "\n# columns: x,quadrature,ensemble,std_error,z\n";
    double worst_z = 0.0;
    for (std::size_t i = 0; i < mc.x.size(); ++i) {
        const double href = sh::hole_shape(mc.x[i], a.f_bar);
        const double se = mc.std_error[i] > 0.0 ? mc.std_error[i] : 1e-300;
        const double z = (mc.mean[i] - href) / se;
        worst_z = std::max(worst_z, std::fabs(z));
        *os << fmt17(mc.x[i]) << ',' << fmt17(href) << ',' << fmt17(mc.mean[i]) << ','
            << fmt17(mc.std_error[i]) << ',' << fmt17(z) << '\n';
    }
    if (!a.out.empty()) std::cout << "table written to " << a.out << "\n";
    const bool ok = worst_z <= 5.0;
    std::cout << (ok ? "PASS" : "FAIL") << ": worst |z| = " << worst_z << " over "
              << mc.x.size() << " points\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral-hole Stark response toolkit"};
    app.set_version_flag("--version", std::string(sh::kVersion));
    app.require_subcommand(1);

    ShapeArgs shape;
    CLI::App* cmd_shape = app.add_subcommand("shape", "evaluate the broadened hole shape h(x; f_bar)");
    cmd_shape->add_option("--fbar", shape.f_bar, "broadening parameter")
        ->required()
        ->check(CLI::NonNegativeNumber);
    cmd_shape->add_option("--xmin", shape.xmin, "grid start (units of gamma)");
    cmd_shape->add_option("--xmax", shape.xmax, "grid end (units of gamma)");
    cmd_shape->add_option("--points", shape.points, "grid size")->check(CLI::PositiveNumber);
    cmd_shape->add_option("--rel-tol", shape.rel_tol, "quadrature relative tolerance")
        ->check(CLI::PositiveNumber);
    cmd_shape->add_option("-o,--out", shape.out, "output file (default stdout)");

    SimulateArgs sim;
    CLI::App* cmd_sim = app.add_subcommand("simulate", "generate a synthetic hole-burning campaign");
    cmd_sim->add_option("--preset", sim.preset, "crystal-linbo3 or fiber-silicate");
    cmd_sim->add_option("--medium", sim.medium, "crystal | crystal-centrosymmetric | amorphous");
    cmd_sim->add_option("--kappa", sim.kappa, "Stark coefficient, kHz/(V/cm)")
        ->check(CLI::PositiveNumber);
    cmd_sim->add_flag("--centrosymmetric", sim.centrosymmetric,
                      "split the line into an opposed-dipole doublet (crystals only)");
    cmd_sim->add_option("--voltages", sim.voltages, "electrode voltages, V")->delimiter(',');
    cmd_sim->add_option("--gap", sim.gap_mm, "electrode gap, mm")->check(CLI::PositiveNumber);
    cmd_sim->add_option("--span", sim.span_mhz, "scan span, MHz")->check(CLI::PositiveNumber);
    cmd_sim->add_option("--points", sim.points, "samples per scan")->check(CLI::PositiveNumber);
    cmd_sim->add_option("--gamma", sim.gamma_mhz, "zero-field hole HWHM, MHz")
        ->check(CLI::PositiveNumber);
    cmd_sim->add_option("--depth", sim.depth, "hole depth in (0,1]")->check(CLI::PositiveNumber);
    cmd_sim->add_option("--noise", sim.noise, "additive Gaussian sigma")
        ->check(CLI::NonNegativeNumber);
    cmd_sim->add_option("--seed", sim.seed, "campaign seed")
        ->each([&sim](const std::string&) { sim.seed_set = true; });
    cmd_sim->add_option("--out", sim.out_dir, "output directory")->required();

    FitArgs fit;
    CLI::App* cmd_fit = app.add_subcommand("fit", "fit hole profiles from files");
    cmd_fit->add_option("files", fit.files, "profile files")->required()->expected(-1);
    cmd_fit->add_option("--mode", fit.mode, "lorentzian | broadened")
        ->check(CLI::IsMember({"lorentzian", "broadened"}));
    cmd_fit->add_option("--gamma", fit.gamma_mhz, "fixed hole HWHM for broadened mode, MHz")
        ->check(CLI::PositiveNumber);
    cmd_fit->add_option("--zero-field", fit.zero_field_file,
                        "zero-field profile supplying gamma for broadened mode");
    cmd_fit->add_option("--manifest", fit.manifest_path, "write the JSON manifest here");

    ExtractArgs ext;
    CLI::App* cmd_ext = app.add_subcommand("extract", "extract the Stark coefficient from a sweep directory");
    cmd_ext->add_option("--dir", ext.dir, "sweep directory")->required();
    cmd_ext->add_option("--medium", ext.medium, "override the medium recorded in the files");
    cmd_ext->add_option("--manifest", ext.manifest_path, "write the JSON manifest here");

    PlanArgs plan;
    CLI::App* cmd_plan = app.add_subcommand("plan", "size the broadening field for a storage bandwidth");
    cmd_plan->add_option("--medium", plan.medium, "crystal | amorphous");
    cmd_plan->add_option("--kappa", plan.kappa, "Stark coefficient, kHz/(V/cm)")
        ->required()
        ->check(CLI::PositiveNumber);
    cmd_plan->add_option("--gamma", plan.gamma_mhz, "zero-field hole HWHM, MHz (amorphous)")
        ->check(CLI::PositiveNumber);
    CLI::Option* opt_bw = cmd_plan->add_option("--bandwidth", plan.bandwidth_mhz,
                                               "target bandwidth, MHz")
                              ->check(CLI::PositiveNumber);
    cmd_plan->add_option("--duration", plan.duration_ns, "pulse duration, ns")
        ->check(CLI::PositiveNumber)
        ->excludes(opt_bw);
    cmd_plan->add_option("--switch-time", plan.t_switch_s, "polarity reversal time, s")
        ->check(CLI::PositiveNumber);
    cmd_plan->add_option("--manifest", plan.manifest_path, "write the JSON manifest here");

    OracleArgs oracle;
    CLI::App* cmd_oracle = app.add_subcommand(
        "oracle", "compare the quadrature shape against a first-principles ensemble average");
    cmd_oracle->add_option("--fbar", oracle.f_bar, "broadening parameter")
        ->required()
        ->check(CLI::NonNegativeNumber);
    cmd_oracle->add_option("--samples", oracle.samples, "ensemble size")
        ->check(CLI::PositiveNumber);
    cmd_oracle->add_option("--seed", oracle.seed, "ensemble seed");
    cmd_oracle->add_option("--xmax", oracle.xmax, "grid half-width")->check(CLI::PositiveNumber);
    cmd_oracle->add_option("--points", oracle.points, "grid size")->check(CLI::PositiveNumber);
    cmd_oracle->add_option("--workers", oracle.workers, "worker threads (0 = auto)");
    cmd_oracle->add_option("-o,--out", oracle.out, "write the comparison table here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_shape->parsed()) return run_shape(shape);
        if (cmd_sim->parsed()) return run_simulate(sim);
        if (cmd_fit->parsed()) return run_fit(fit);
        if (cmd_ext->parsed()) return run_extract(ext);
        if (cmd_plan->parsed()) return run_plan(plan);
        if (cmd_oracle->parsed()) return run_oracle(oracle);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
