// Acceptance gate: end-to-end checks of the library's quantitative
// guarantees. Each check prints one [PASS]/[FAIL] line with the measured
// numbers; the process exits with the number of failures.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "starkhole/cribplan.hpp"
#include "starkhole/expsim.hpp"
#include "starkhole/fitting.hpp"
#include "starkhole/lineshape.hpp"
#include "starkhole/mc.hpp"
#include "starkhole/numerics.hpp"
#include "starkhole/stark.hpp"

using namespace starkhole;

namespace {

std::string strf(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int run_criterion(int idx, const char* name, double time_budget_s,
                  const std::function<Outcome()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = fn();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = out.pass;
    std::string detail = out.detail;
    if (time_budget_s > 0.0 && elapsed > time_budget_s) {
        pass = false;
        detail += strf(" [over %.0f s budget]", time_budget_s);
    }
    std::printf("[%s] (%d) %s: %s (%.2f s)\n", pass ? "PASS" : "FAIL", idx, name,
                detail.c_str(), elapsed);
    std::fflush(stdout);
    return pass ? 0 : 1;
}

// (1) ensemble average vs quadrature at 10^6 samples, 21 points per f_bar
Outcome ensemble_vs_quadrature() {
    double worst = 0.0;
    int n_points = 0;
    for (double f_bar : {0.25, 1.0, 4.0}) {
        EnsembleSpec spec;
        spec.n_samples = 1000000;
        spec.f_bar = f_bar;
        spec.seed = 3;
        for (int i = 0; i < 21; ++i) spec.x_grid.push_back(-8.0 + 16.0 * i / 20.0);
        const McProfile mc = mc_hole_shape(spec);
        for (std::size_t i = 0; i < mc.x.size(); ++i) {
            const double href = hole_shape(mc.x[i], f_bar);
            const double se = std::hypot(mc.std_error[i], kDefaultRelTol * href);
            worst = std::max(worst, std::fabs(mc.mean[i] - href) / se);
            ++n_points;
        }
    }
    return {worst <= 3.0,
            strf("worst deviation %.2f combined standard errors over %d points", worst,
                 n_points)};
}

// (2) small-broadening limit against the analytic Lorentzian
Outcome lorentzian_limit() {
    double sup = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = -10.0 + 20.0 * i / 400.0;
        sup = std::max(sup, std::fabs(hole_shape(x, 1e-3) - lorentzian_unit(x)));
    }
    return {sup < 1e-6, strf("sup|h - lorentzian| = %.2e (limit 1e-6)", sup)};
}

// (3) unit area across the broadening range
Outcome normalization() {
    double worst = 0.0;
    for (double f_bar : {0.0, 0.1, 1.0, 5.0, 20.0}) {
        const auto body = integrate_adaptive(
            [f_bar](double x) { return hole_shape(x, f_bar); }, -200.0, 200.0, 1e-7);
        // Lorentzian-tail remainder beyond the truncation
        const double total = body.value + 2.0 / kPi * std::atan(1.0 / 200.0);
        worst = std::max(worst, std::fabs(total - 1.0));
    }
    return {worst < 1e-4, strf("worst |area - 1| = %.2e (limit 1e-4)", worst)};
}

// (4) crystal campaign round trip, noisy and noiseless
Outcome crystal_round_trip() {
    const CampaignPreset preset = preset_crystal_linbo3();
    const double kappa_true = medium_kappa(preset.medium).khz_per_v_cm;

    const FieldSweep noisy = simulate_sweep(preset.medium, preset.fields(), preset.scan);
    const ExtractionResult res = extract_stark_crystal(noisy);
    const double err = std::fabs(res.kappa.khz_per_v_cm - kappa_true);

    ScanConfig clean_cfg = preset.scan;
    clean_cfg.noise_sigma = 0.0;
    const FieldSweep clean = simulate_sweep(preset.medium, preset.fields(), clean_cfg);
    const double rel =
        std::fabs(extract_stark_crystal(clean).kappa.khz_per_v_cm - kappa_true) / kappa_true;

    const bool pass = err <= 1.0 && rel <= 1e-4;
    return {pass, strf("noisy kappa = %.4f +/- %.4f (true %.0f, limit +/-1); "
                       "noiseless rel err = %.1e (limit 1e-4)",
                       res.kappa.khz_per_v_cm, res.kappa.sigma, kappa_true, rel)};
}

// (5) fiber campaign round trip plus per-field linearity of the broadening
Outcome fiber_round_trip() {
    const CampaignPreset preset = preset_fiber_silicate();
    const double kappa_true = medium_kappa(preset.medium).khz_per_v_cm;

    const FieldSweep sweep = simulate_sweep(preset.medium, preset.fields(), preset.scan);
    const ExtractionResult res = extract_stark_amorphous(sweep);
    const double err = std::fabs(res.kappa.khz_per_v_cm - kappa_true);

    // every fitted broadening must sit on the through-origin line within 3 sigma
    double worst_pull = 0.0;
    for (const auto& pt : res.points) {
        if (!(pt.y_sigma > 0.0)) continue;
        const double resid = pt.y_mhz - res.line.slope * pt.field_v_per_cm;
        worst_pull = std::max(worst_pull, std::fabs(resid) / pt.y_sigma);
    }

    const bool pass = err <= 1.0 && worst_pull <= 3.0;
    return {pass, strf("kappa = %.4f +/- %.4f (true %.0f, limit +/-1); worst line "
                       "residual %.2f sigma (limit 3)",
                       res.kappa.khz_per_v_cm, res.kappa.sigma, kappa_true, worst_pull)};
}

// (6) after-scans return to the unperturbed hole on both apparatuses
Outcome reversibility() {
    const CampaignPreset crystal = preset_crystal_linbo3();
    const ReversibilityReport rc = reversibility_check(
        simulate_sweep(crystal.medium, crystal.fields(), crystal.scan));

    const CampaignPreset fiber = preset_fiber_silicate();
    const ReversibilityReport rf =
        reversibility_check(simulate_sweep(fiber.medium, fiber.fields(), fiber.scan));

    int n_fail = 0;
    for (const auto& row : rc.rows) n_fail += row.pass ? 0 : 1;
    for (const auto& row : rf.rows) n_fail += row.pass ? 0 : 1;
    return {rc.all_pass && rf.all_pass,
            strf("%zu crystal + %zu fiber after-scans at 3 sigma, %d failing",
                 rc.rows.size(), rf.rows.size(), n_fail)};
}

// (7) gradient plan for a 100 MHz target is exactly +/-2000 V/cm
Outcome crystal_plan_exact() {
    const MediumModel medium = CrystalMedium{StarkCoefficient(25.0)};
    const auto plan =
        crystal_field_plan(CribTarget::from_bandwidth(100.0, medium, HoleWidth(10.0)));
    const double span = plan.span_mhz(StarkCoefficient(25.0));
    const bool exact = plan.e_max_v_per_cm == 2000.0;
    const bool inverse = std::fabs(span - 100.0) <= 100.0 * 1e-14;
    return {exact && inverse,
            strf("e_max = %.17g V/cm (need exactly 2000); round-trip span = %.17g MHz",
                 plan.e_max_v_per_cm, span)};
}

// (8) homogeneous plan lands near 3.5 kV/cm across plausible hole widths
Outcome fiber_plan_range() {
    const MediumModel medium = AmorphousMedium{StarkCoefficient(15.0)};
    double lo = 1e300, hi = 0.0;
    bool consistent = true;
    for (double gamma : {1.0, 2.0, 5.0, 10.0, 15.0, 20.0}) {
        const auto plan =
            amorphous_field_plan(CribTarget::from_bandwidth(100.0, medium, HoleWidth(gamma)));
        lo = std::min(lo, plan.e_v_per_cm);
        hi = std::max(hi, plan.e_v_per_cm);
        const double fwhm = gamma * hole_fwhm(plan.f_bar);
        consistent = consistent && std::fabs(fwhm - 100.0) <= 1e-6 * 100.0;
    }
    const bool in_window = lo >= 0.5 * 3500.0 && hi <= 1.5 * 3500.0;
    return {in_window && consistent,
            strf("fields span %.1f..%.1f V/cm for gamma 1..20 MHz (window 1750..5250); "
                 "forward widths reproduce 100 MHz within 1e-6",
                 lo, hi)};
}

// (9) quoted 1.96-sigma intervals cover the truth at the nominal rate
Outcome interval_coverage() {
    const CampaignPreset preset = preset_crystal_linbo3();
    const double kappa_true = medium_kappa(preset.medium).khz_per_v_cm;
    ScanConfig cfg = preset.scan;
    cfg.n_points = 512;  // halves the runtime without changing the statistics question

    const int n_runs = 200;
    int covered = 0;
    for (int run = 0; run < n_runs; ++run) {
        cfg.seed = 1000 + static_cast<std::uint64_t>(run);
        const ExtractionResult res =
            extract_stark_crystal(simulate_sweep(preset.medium, preset.fields(), cfg));
        if (std::fabs(res.kappa.khz_per_v_cm - kappa_true) <= 1.96 * res.kappa.sigma)
            ++covered;
    }
    const double rate = static_cast<double>(covered) / n_runs;
    return {rate >= 0.90 && rate <= 0.99,
            strf("%d/%d runs covered (%.1f%%, accepted 90..99%%)", covered, n_runs,
                 100.0 * rate)};
}

}  // namespace

int main() {
    int failures = 0;
    failures += run_criterion(1, "ensemble average matches quadrature", 30.0,
                              ensemble_vs_quadrature);
    failures += run_criterion(2, "small-broadening Lorentzian limit", 0.0, lorentzian_limit);
    failures += run_criterion(3, "unit normalization", 0.0, normalization);
    failures += run_criterion(4, "crystal campaign round trip", 10.0, crystal_round_trip);
    failures += run_criterion(5, "fiber campaign round trip", 60.0, fiber_round_trip);
    failures += run_criterion(6, "field reversibility", 0.0, reversibility);
    failures += run_criterion(7, "gradient field plan", 0.0, crystal_plan_exact);
    failures += run_criterion(8, "homogeneous field plan", 0.0, fiber_plan_range);
    failures += run_criterion(9, "confidence interval calibration", 0.0, interval_coverage);

    std::printf("%d/9 criteria passed\n", 9 - failures);
    return failures;
}
