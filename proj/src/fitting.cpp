#include "starkhole/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "starkhole/levmar.hpp"
#include "starkhole/lineshape.hpp"
#include "starkhole/numerics.hpp"

namespace starkhole {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median(std::vector<double> v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + lo);
    }
    return m;
}

// Standard errors from the covariance of the weighted residual Jacobian;
// unweighted fits scale by the residual variance.
std::array<double, 4> standard_errors(const LevMarResult& r, bool weighted, int n_points) {
    std::array<double, 4> se{};
    const double dof = std::max(1, n_points - 4);
    const double s2 = weighted ? 1.0 : r.cost / dof;
    for (int j = 0; j < 4; ++j) {
        const double v = r.covariance(j, j) * s2;
        se[static_cast<std::size_t>(j)] = v > 0.0 && std::isfinite(v) ? std::sqrt(v) : 0.0;
    }
    return se;
}

struct InitGuess {
    double center;
    double gamma;
    double amplitude;
    double baseline;
};

InitGuess initial_guess(const HoleProfile& p) {
    const auto& x = p.freq_offsets_mhz;
    const auto& y = p.signal;
    const double b0 = median(y);
    const auto it_max = std::max_element(y.begin(), y.end());
    const std::size_t i_max = static_cast<std::size_t>(it_max - y.begin());
    const double a0 = *it_max - b0;
    const double half = b0 + 0.5 * a0;

    // half-maximum crossings outward from the peak
    std::size_t il = i_max;
    while (il > 0 && y[il] > half) --il;
    std::size_t ir = i_max;
    while (ir + 1 < y.size() && y[ir] > half) ++ir;
    double gamma0 = 0.5 * (x[ir] - x[il]);
    const double span = x.back() - x.front();
    if (!(gamma0 > 0.0)) gamma0 = span / 20.0;
    return {x[i_max], gamma0, std::max(a0, 1e-12), b0};
}

void check_fittable(const HoleProfile& p) {
    p.validate();
    const auto [mn, mx] = std::minmax_element(p.signal.begin(), p.signal.end());
    const double scale = std::max({std::fabs(*mn), std::fabs(*mx), 1.0});
    if (*mx - *mn <= 1e-12 * scale)
        throw DegenerateDataError("profile signal is constant; nothing to fit");
}

ResidualFn make_residual_fn(const HoleProfile& p,
                            std::function<double(const Eigen::VectorXd&, double)> model) {
    const bool weighted = !p.noise_sigma.empty();
    return [&p, weighted, model = std::move(model)](const Eigen::VectorXd& params,
                                                    Eigen::VectorXd& r) {
        for (std::size_t i = 0; i < p.signal.size(); ++i) {
            double res = model(params, p.freq_offsets_mhz[i]) - p.signal[i];
            if (weighted) res /= p.noise_sigma[i];
            r[static_cast<Eigen::Index>(i)] = res;
        }
    };
}

}  // namespace

const char* to_string(ScanTag tag) {
    switch (tag) {
        case ScanTag::before: return "before";
        case ScanTag::during: return "during";
        case ScanTag::after: return "after";
    }
    return "?";
}

ScanTag scan_tag_from_string(const std::string& s) {
    if (s == "before") return ScanTag::before;
    if (s == "during") return ScanTag::during;
    if (s == "after") return ScanTag::after;
    throw DomainError("unknown scan tag: " + s);
}

void HoleProfile::validate() const {
    if (freq_offsets_mhz.size() != signal.size())
        throw DomainError("profile: frequency and signal arrays differ in length");
    if (signal.size() < 8) throw DomainError("profile: needs at least 8 points");
    for (std::size_t i = 0; i < freq_offsets_mhz.size(); ++i) {
        if (!std::isfinite(freq_offsets_mhz[i]) || !std::isfinite(signal[i]))
            throw DomainError("profile: non-finite sample");
        if (i > 0 && !(freq_offsets_mhz[i] > freq_offsets_mhz[i - 1]))
            throw DomainError("profile: frequency offsets must be strictly increasing");
    }
    if (!noise_sigma.empty()) {
        if (noise_sigma.size() != signal.size())
            throw DomainError("profile: noise_sigma length mismatch");
        for (double s : noise_sigma)
            if (!(s > 0.0)) throw DomainError("profile: noise_sigma must be > 0");
    }
}

bool normalize_polarity(HoleProfile& profile) {
    const double med = median(profile.signal);
    const auto [mn, mx] = std::minmax_element(profile.signal.begin(), profile.signal.end());
    if (*mx - med >= med - *mn) return false;
    for (double& s : profile.signal) s = 2.0 * med - s;  // mirror around the baseline
    return true;
}

LorentzFit fit_lorentzian(const HoleProfile& profile) {
    check_fittable(profile);
    const auto& x = profile.freq_offsets_mhz;
    const InitGuess g = initial_guess(profile);
    const double span = x.back() - x.front();

    Eigen::VectorXd p0(4);
    p0 << g.center, g.gamma, g.amplitude, g.baseline;
    Eigen::VectorXd lower(4), upper(4);
    lower << x.front(), 1e-6 * span, 0.0, -kInf;
    upper << x.back(), 100.0 * span, kInf, kInf;

    auto model = [](const Eigen::VectorXd& p, double nu) {
        const double t = (nu - p[0]) / p[1];
        return p[3] + p[2] / (1.0 + t * t);
    };

    const auto fn = make_residual_fn(profile, model);
    const int m = static_cast<int>(profile.signal.size());
    LevMarResult r = levmar(fn, p0, lower, upper, m);
    if (!r.converged)
        throw FitError("lorentzian fit did not converge", r.cost_trace);

    const auto se = standard_errors(r, !profile.noise_sigma.empty(), m);
    LorentzFit fit;
    fit.center_mhz = r.params[0];
    fit.gamma_hwhm_mhz = r.params[1];
    fit.amplitude = r.params[2];
    fit.baseline = r.params[3];
    fit.se_center = se[0];
    fit.se_gamma = se[1];
    fit.se_amplitude = se[2];
    fit.se_baseline = se[3];
    fit.residual_norm = std::sqrt(r.cost);
    fit.converged = r.converged;
    fit.iterations = r.iterations;
    fit.cost_trace = std::move(r.cost_trace);
    return fit;
}

namespace {

// Invert hole_fwhm for the initial f_bar: bracket around an empirical
// interpolation of the width curve, then solve on the real function.
double f_bar_from_width(double fwhm_x) {
    if (!(fwhm_x > 2.02)) return 0.05;
    const double w = fwhm_x - 1.0692;
    double guess = std::sqrt(std::max((w * w - 0.8664) / 2.7726, 1e-6));
    double lo = std::max(guess / 2.0, 1e-3);
    double hi = guess * 2.0 + 0.1;
    int guard = 0;
    while (hole_fwhm(lo) > fwhm_x && lo > 1e-3) { lo *= 0.5; if (++guard > 60) break; }
    guard = 0;
    while (hole_fwhm(hi) < fwhm_x) { hi *= 1.6; if (++guard > 60) break; }
    try {
        return brent_root([fwhm_x](double f) { return hole_fwhm(f) - fwhm_x; }, lo, hi, 1e-3,
                          1e-3, 60);
    } catch (const Error&) {
        return guess;  // fall back to the interpolation
    }
}

}  // namespace

BroadenedFit fit_broadened(const HoleProfile& profile, const HoleWidth& gamma) {
    check_fittable(profile);
    const auto& x = profile.freq_offsets_mhz;

    // Lorentzian prefit seeds center, baseline, and the width ratio.
    const LorentzFit pre = fit_lorentzian(profile);
    const double f0 = f_bar_from_width(pre.fwhm_mhz() / gamma.gamma_mhz);
    const double h0 = hole_shape(0.0, f0);

    Eigen::VectorXd p0(4);
    p0 << f0, pre.amplitude / h0, pre.baseline, pre.center_mhz;
    Eigen::VectorXd lower(4), upper(4);
    lower << 0.0, 0.0, -kInf, x.front();
    upper << kInf, kInf, kInf, x.back();

    constexpr double kModelTol = 1e-9;
    const double g_mhz = gamma.gamma_mhz;
    auto model = [g_mhz](const Eigen::VectorXd& p, double nu) {
        return p[2] + p[1] * hole_shape((nu - p[3]) / g_mhz, p[0], kModelTol);
    };

    LevMarOptions opt;
    // keep difference steps in f_bar above the analytic small-f_bar branch
    opt.fd_step_min = Eigen::VectorXd::Zero(4);
    opt.fd_step_min[0] = 5e-4;

    const auto fn = make_residual_fn(profile, model);
    const int m = static_cast<int>(profile.signal.size());
    LevMarResult r = levmar(fn, p0, lower, upper, m, opt);
    if (!r.converged)
        throw FitError("broadened-hole fit did not converge", r.cost_trace);

    const auto se = standard_errors(r, !profile.noise_sigma.empty(), m);
    BroadenedFit fit;
    fit.f_bar = r.params[0];
    fit.amplitude = r.params[1];
    fit.baseline = r.params[2];
    fit.center_mhz = r.params[3];
    fit.se_f_bar = se[0];
    fit.se_amplitude = se[1];
    fit.se_baseline = se[2];
    fit.se_center = se[3];
    fit.residual_norm = std::sqrt(r.cost);
    fit.converged = r.converged;
    fit.iterations = r.iterations;
    fit.at_zero_boundary = r.at_lower[0];
    // Below the analytic small-f_bar branch the model is the exact
    // Lorentzian for every value, so the data cannot resolve within
    // [0, threshold): report such estimates as pinned at zero.
    if (fit.f_bar < kLorentzianLimitFbar) {
        fit.f_bar = 0.0;
        fit.at_zero_boundary = true;
    }
    fit.cost_trace = std::move(r.cost_trace);
    return fit;
}

LinFit linfit_origin(std::span<const double> x, std::span<const double> y,
                     std::span<const double> y_sigma) {
    if (x.size() != y.size()) throw DomainError("linfit_origin: size mismatch");
    if (!y_sigma.empty() && y_sigma.size() != y.size())
        throw DomainError("linfit_origin: sigma size mismatch");
    if (x.size() < 2) throw DomainError("linfit_origin: needs at least 2 points");

    const bool weighted = !y_sigma.empty();
    double y_scale = 0.0;
    for (double v : y) y_scale = std::max(y_scale, std::fabs(v));
    const double sigma_floor = 1e-12 * std::max(y_scale, 1.0);

    double sxx = 0.0, sxy = 0.0;
    std::vector<double> w(x.size(), 1.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (weighted) {
            const double s = std::max(y_sigma[i], sigma_floor);
            w[i] = 1.0 / (s * s);
        }
        sxx += w[i] * x[i] * x[i];
        sxy += w[i] * x[i] * y[i];
    }
    if (!(sxx > 0.0)) throw DegenerateDataError("linfit_origin: all abscissae are zero");

    LinFit fit;
    fit.slope = sxy / sxx;
    fit.n_points = static_cast<int>(x.size());

    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - fit.slope * x[i];
        ss_res += w[i] * r * r;
    }
    fit.residual_norm = std::sqrt(ss_res);
    if (weighted) {
        fit.se_slope = std::sqrt(1.0 / sxx);
    } else {
        const double s2 = ss_res / static_cast<double>(x.size() - 1);
        fit.se_slope = std::sqrt(s2 / sxx);
    }
    return fit;
}

namespace {

struct CampaignScans {
    const HoleProfile* before = nullptr;
    const HoleProfile* during = nullptr;
    const HoleProfile* after = nullptr;
};

std::map<double, CampaignScans> group_by_field(const FieldSweep& sweep) {
    std::map<double, CampaignScans> groups;
    for (const auto& rec : sweep.records) {
        auto& g = groups[rec.field.v_per_cm];
        switch (rec.profile.scan_tag) {
            case ScanTag::before: if (!g.before) g.before = &rec.profile; break;
            case ScanTag::during: if (!g.during) g.during = &rec.profile; break;
            case ScanTag::after: if (!g.after) g.after = &rec.profile; break;
        }
    }
    return groups;
}

// Inverse-variance-weighted Lorentzian width over all zero-field scans
// (before-scans and E = 0 during-scans).
struct GammaEstimate {
    double gamma = 0.0;
    double se = 0.0;
    double center = 0.0;
    double se_center = 0.0;
};

GammaEstimate estimate_gamma_zero(const FieldSweep& sweep) {
    double sw = 0.0, swg = 0.0, swc = 0.0, sw_c = 0.0;
    bool any = false;
    for (const auto& rec : sweep.records) {
        const bool zero_field = rec.profile.field.v_per_cm == 0.0 &&
                                rec.profile.scan_tag != ScanTag::after;
        if (!zero_field) continue;
        const LorentzFit fit = fit_lorentzian(rec.profile);
        const double wg = 1.0 / std::pow(std::max(fit.se_gamma, 1e-12), 2);
        const double wc = 1.0 / std::pow(std::max(fit.se_center, 1e-12), 2);
        sw += wg;
        swg += wg * fit.gamma_hwhm_mhz;
        sw_c += wc;
        swc += wc * fit.center_mhz;
        any = true;
    }
    if (!any)
        throw DomainError("sweep has no zero-field record (before-scan or E=0 profile)");
    return {swg / sw, std::sqrt(1.0 / sw), swc / sw_c, std::sqrt(1.0 / sw_c)};
}

}  // namespace

bool FieldSweep::has_zero_field_record() const {
    return std::any_of(records.begin(), records.end(), [](const SweepRecord& r) {
        return r.profile.field.v_per_cm == 0.0 && r.profile.scan_tag != ScanTag::after;
    });
}

ExtractionResult extract_stark_crystal(const FieldSweep& sweep) {
    const auto* crystal = std::get_if<CrystalMedium>(&sweep.medium);
    if (!crystal) throw DomainError("extract_stark_crystal: medium is not a crystal");
    if (crystal->inversion_symmetric)
        throw DomainError(
            "extract_stark_crystal: pseudo-Stark doublet sweeps cannot be reduced with a "
            "single-line fit");
    const GammaEstimate zero = estimate_gamma_zero(sweep);

    ExtractionResult result;
    result.gamma_zero_field = HoleWidth(zero.gamma);
    result.se_gamma_zero_field = zero.se;

    for (const auto& [field, scans] : group_by_field(sweep)) {
        if (!scans.during) continue;
        const LorentzFit during = fit_lorentzian(*scans.during);
        double ref_center = zero.center;
        double ref_se = zero.se_center;
        if (scans.before) {
            const LorentzFit before = fit_lorentzian(*scans.before);
            ref_center = before.center_mhz;
            ref_se = before.se_center;
        }
        ExtractionPoint pt;
        pt.field_v_per_cm = field;
        pt.y_mhz = during.center_mhz - ref_center;
        pt.y_sigma = std::hypot(during.se_center, ref_se);
        result.points.push_back(pt);
    }
    if (result.points.size() < 2)
        throw DegenerateDataError("extract_stark_crystal: need during-scans at two or more fields");

    std::vector<double> e, y, s;
    for (const auto& pt : result.points) {
        e.push_back(pt.field_v_per_cm);
        y.push_back(pt.y_mhz);
        s.push_back(pt.y_sigma);
    }
    result.line = linfit_origin(e, y, s);
    // slope MHz/(V/cm) -> kHz/(V/cm)
    result.kappa = StarkCoefficient(result.line.slope * 1e3, result.line.se_slope * 1e3);
    return result;
}

ExtractionResult extract_stark_amorphous(const FieldSweep& sweep) {
    if (!is_amorphous(sweep.medium))
        throw DomainError("extract_stark_amorphous: medium is not amorphous");
    const GammaEstimate zero = estimate_gamma_zero(sweep);
    const HoleWidth gamma(zero.gamma);

    ExtractionResult result;
    result.gamma_zero_field = gamma;
    result.se_gamma_zero_field = zero.se;

    for (const auto& [field, scans] : group_by_field(sweep)) {
        if (!scans.during) continue;
        const BroadenedFit fit = fit_broadened(*scans.during, gamma);
        ExtractionPoint pt;
        pt.field_v_per_cm = field;
        pt.f_bar = fit.f_bar;
        pt.se_f_bar = fit.se_f_bar;
        pt.y_mhz = fit.f_bar * gamma.gamma_mhz;
        pt.y_sigma = fit.se_f_bar * gamma.gamma_mhz;
        result.points.push_back(pt);
    }
    if (result.points.size() < 2)
        throw DegenerateDataError(
            "extract_stark_amorphous: need during-scans at two or more fields");

    std::vector<double> e, y, s;
    for (const auto& pt : result.points) {
        e.push_back(pt.field_v_per_cm);
        y.push_back(pt.y_mhz);
        s.push_back(pt.y_sigma);
    }
    result.line = linfit_origin(e, y, s);

    const double kappa = result.line.slope * 1e3;
    // fold the zero-field-width uncertainty into the coefficient error
    const double rel_gamma = zero.se / zero.gamma;
    const double sigma = std::hypot(result.line.se_slope * 1e3, kappa * rel_gamma);
    result.kappa = StarkCoefficient(kappa, sigma);
    return result;
}

ReversibilityReport reversibility_check(const FieldSweep& sweep, double sigma_threshold) {
    ReversibilityReport report;
    report.sigma_threshold = sigma_threshold;

    const auto groups = group_by_field(sweep);
    const bool amorphous = is_amorphous(sweep.medium);

    bool any_after = false;
    for (const auto& [field, scans] : groups)
        if (scans.after) any_after = true;
    if (!any_after) return report;  // nothing burned in after-scans: empty report

    const GammaEstimate zero = estimate_gamma_zero(sweep);
    constexpr double kAbsEps = 1e-9;  // MHz; keeps exact noiseless sweeps passing

    for (const auto& [field, scans] : groups) {
        if (!scans.after) continue;
        const LorentzFit after = fit_lorentzian(*scans.after);
        ReversibilityRow row;
        row.field_v_per_cm = field;
        if (amorphous) {
            row.deviation_mhz = after.fwhm_mhz() - 2.0 * zero.gamma;
            row.sigma_mhz = 2.0 * std::hypot(after.se_gamma, zero.se);
        } else {
            double ref_center = zero.center;
            double ref_se = zero.se_center;
            if (scans.before) {
                const LorentzFit before = fit_lorentzian(*scans.before);
                ref_center = before.center_mhz;
                ref_se = before.se_center;
            }
            row.deviation_mhz = after.center_mhz - ref_center;
            row.sigma_mhz = std::hypot(after.se_center, ref_se);
        }
        row.pass = std::fabs(row.deviation_mhz) <= sigma_threshold * row.sigma_mhz + kAbsEps;
        report.rows.push_back(row);
        report.all_pass = report.all_pass && row.pass;
    }
    return report;
}

}  // namespace starkhole
