#include "curvekit/mannheim.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "curvekit/errors.hpp"

namespace curvekit {

FrameVectorField::FrameVectorField(ScalarFn u, ScalarFn v, ScalarFn w, bool constant)
    : u_(std::move(u)), v_(std::move(v)), w_(std::move(w)), constant_(constant) {}

FrameVectorField FrameVectorField::constant(double u, double v, double w) {
    const double norm2 = u * u + v * v + w * w;
    if (std::abs(norm2 - 1.0) > 1e-12)
        throw InvariantViolation("frame field is not unit: u^2+v^2+w^2 = " +
                                 std::to_string(norm2));
    return FrameVectorField([u](double) { return u; }, [v](double) { return v; },
                            [w](double) { return w; }, true);
}

FrameVectorField FrameVectorField::varying(ScalarFn u, ScalarFn v, ScalarFn w) {
    return FrameVectorField(std::move(u), std::move(v), std::move(w), false);
}

Vec3 FrameVectorField::coeffs(double s) const {
    const Vec3 c(u_(s), v_(s), w_(s));
    if (std::abs(c.squaredNorm() - 1.0) > 1e-12)
        throw InvariantViolation("frame field is not unit at s = " + std::to_string(s) +
                                 ": u^2+v^2+w^2 = " + std::to_string(c.squaredNorm()));
    return c;
}

OffsetFunction OffsetFunction::constant(double lambda0) {
    OffsetFunction out;
    out.lambda0 = lambda0;
    out.value = [lambda0](double) { return lambda0; };
    out.v = [](double) { return 0.0; };
    return out;
}

OffsetFunction lambda_from_v(ScalarFn v, double lambda0, double s_max, double step) {
    if (!(s_max > 0.0) || !(step > 0.0))
        throw ParamOutOfRange("lambda_from_v needs positive domain and step");
    const int cells = std::max(8, static_cast<int>(std::ceil(s_max / step - 1e-9)));
    auto table = std::make_shared<IntegralTable>(v, s_max, cells);
    OffsetFunction out;
    out.lambda0 = lambda0;
    out.value = [lambda0, table](double s) { return lambda0 - (*table)(s); };
    out.v = std::move(v);
    return out;
}

ResidualProfile vmannheim_residual(const FrenetApparatus& app, const FrameVectorField& V,
                                   const OffsetFunction& lam) {
    const int n = app.size();
    ResidualProfile out;
    out.r.resize(n);
    for (int i = 0; i < n; ++i)
        out.normalizer = std::max(out.normalizer,
                                  app.kappa[i] * app.kappa[i] + app.tau[i] * app.tau[i]);
    if (!(out.normalizer > 0.0))
        throw DivideByZero("kappa^2 + tau^2 vanishes on the whole grid");
    try {
        for (int i = 0; i < n; ++i) {
            const Vec3 c = V.coeffs(app.s[i]);
            const double k2t2 = app.kappa[i] * app.kappa[i] + app.tau[i] * app.tau[i];
            const double raw =
                c.x() * app.kappa[i] - c.z() * app.tau[i] - lam.value(app.s[i]) * k2t2;
            out.r[i] = raw / out.normalizer;
            out.max_abs = std::max(out.max_abs, std::abs(out.r[i]));
        }
    } catch (const OutOfDomain& e) {
        throw DomainMismatch(std::string("field/offset domain does not cover the apparatus: ") +
                             e.what());
    }
    return out;
}

LambdaEstimate estimate_lambda(const FrenetApparatus& app, const FrameVectorField& V) {
    const int n = app.size();
    std::vector<double> fitted(n);
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec3 c = V.coeffs(app.s[i]);
        if (std::abs(c.y()) > 1e-12)
            throw NotApplicable("estimate_lambda requires v == 0, got v = " +
                                std::to_string(c.y()) + " at s = " + std::to_string(app.s[i]));
        const double k2t2 = app.kappa[i] * app.kappa[i] + app.tau[i] * app.tau[i];
        if (k2t2 < 1e-12)
            throw DivideByZero("kappa^2 + tau^2 = " + std::to_string(k2t2) + " at s = " +
                               std::to_string(app.s[i]));
        fitted[i] = (c.x() * app.kappa[i] - c.z() * app.tau[i]) / k2t2;
        mean += fitted[i];
    }
    mean /= n;
    double dev = 0.0;
    for (double f : fitted) dev = std::max(dev, std::abs(f - mean));
    LambdaEstimate out;
    out.lambda_fit = mean;
    out.flatness = dev / std::max(std::abs(mean), 1e-300);
    return out;
}

PartnerCurve build_partner(const SampledCurve& base, const FrenetApparatus& app,
                           const FrameVectorField& V, const OffsetFunction& lam) {
    const int n = base.size();
    if (app.size() != n || std::abs(app.step - base.step()) > 1e-12 * std::max(1.0, app.step))
        throw DomainMismatch("curve and apparatus grids differ");
    app.validate();

    const double h = base.step();
    std::vector<Vec3> v_world(n);
    std::vector<double> lam_s(n), speed(n);
    for (int i = 0; i < n; ++i) {
        const double s = app.s[i];
        const Vec3 c = V.coeffs(s);
        lam_s[i] = lam.value(s);
        v_world[i] = c.x() * app.T[i] + c.y() * app.N[i] + c.z() * app.B[i];
        // beta' = (u - lambda kappa) T + (v + lambda') N + (w + lambda tau) B
        const double tang = c.x() - lam_s[i] * app.kappa[i];
        const double norm = c.y() - lam.v(s);
        const double binorm = c.z() + lam_s[i] * app.tau[i];
        speed[i] = std::sqrt(tang * tang + norm * norm + binorm * binorm);
    }

    const auto v_integral = cumulative_integral(v_world, h);
    std::vector<Vec3> beta(n);
    double chord_total = 0.0;
    for (int i = 0; i < n; ++i) {
        beta[i] = v_integral[i] + lam_s[i] * app.N[i];
        if (i > 0) chord_total += (beta[i] - beta[i - 1]).norm();
    }
    if (chord_total < 10.0 * h)
        throw DegeneratePartner("partner collapses: total length " +
                                std::to_string(chord_total) + " below 10 steps");

    PartnerCurve out{SampledCurve(h, base.grid(), std::move(beta)),
                     cumulative_integral(speed, h)};
    return out;
}

std::pair<int, int> reliable_window(const FrenetApparatus& app, const WindowOptions& opts) {
    const int n = app.size();
    std::vector<char> ok(n, 0);
    for (int i = opts.margin; i < n - opts.margin; ++i) {
        const double rate = std::max(app.kappa[i], std::abs(app.tau[i]));
        ok[i] = app.step * rate <= opts.resolve;
    }
    int best_lo = 0, best_hi = 0;
    for (int i = 0; i < n;) {
        if (!ok[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j < n && ok[j]) ++j;
        if (j - i > best_hi - best_lo) {
            best_lo = i;
            best_hi = j;
        }
        i = j;
    }
    if (best_hi - best_lo < kMinSamples)
        throw StepTooLarge("partner grid cannot resolve kappa/tau: only " +
                           std::to_string(best_hi - best_lo) +
                           " contiguous reliable samples");
    return {best_lo, best_hi};
}

namespace {

// Inverse of the monotone correspondence as a spline s(sbar).
CubicSpline inverse_correspondence(const Correspondence& corr) {
    if (corr.s.size() != corr.sbar.size() || corr.s.size() < 4)
        throw DomainMismatch("correspondence table too short");
    for (size_t i = 0; i + 1 < corr.sbar.size(); ++i)
        if (!(corr.sbar[i + 1] > corr.sbar[i]))
            throw DomainMismatch("correspondence is not strictly monotone");
    return CubicSpline(corr.sbar, corr.s);
}

std::vector<Vec3> window_vectors(const std::vector<Vec3>& v, int lo, int hi) {
    return std::vector<Vec3>(v.begin() + lo, v.begin() + hi);
}

std::vector<double> window_scalars(const std::vector<double>& v, int lo, int hi) {
    return std::vector<double>(v.begin() + lo, v.begin() + hi);
}

} // namespace

CollinearityResult verify_collinear(const FrenetApparatus& base_app,
                                    const FrenetApparatus& partner_app,
                                    const Correspondence& corr, const WindowOptions& opts,
                                    double kappa_min) {
    const int np = partner_app.size();
    int vanishing = 0;
    for (int i = 0; i < np; ++i)
        if (partner_app.kappa[i] < kappa_min) ++vanishing;
    if (vanishing > np / 20)
        throw DegeneratePartner("partner kappa < kappa_min on " + std::to_string(vanishing) +
                                " of " + std::to_string(np) + " samples");

    const auto [lo, hi] = reliable_window(partner_app, opts);
    const auto grid = window_scalars(partner_app.s, lo, hi);
    const VecSpline binormal(grid, window_vectors(partner_app.B, lo, hi));
    const double sb_lo = partner_app.s[lo + 2];
    const double sb_hi = partner_app.s[hi - 3];

    if (corr.s.size() != base_app.s.size())
        throw DomainMismatch("correspondence does not match the base apparatus grid");

    CollinearityResult out;
    const int nb = base_app.size();
    for (int i = kBoundaryMargin; i < nb - kBoundaryMargin; ++i) {
        const double sbar = corr.sbar[i];
        if (sbar < sb_lo || sbar > sb_hi) continue;
        const Vec3 bbar = binormal(sbar).normalized();
        out.collinearity_max = std::max(out.collinearity_max,
                                        bbar.cross(base_app.N[i]).norm());
        const int sign = bbar.dot(base_app.N[i]) >= 0.0 ? 1 : -1;
        if (out.samples_used == 0) out.epsilon = sign;
        else if (sign != out.epsilon) out.epsilon_constant = false;
        ++out.samples_used;
    }
    if (out.samples_used == 0)
        throw StepTooLarge("no base samples map into the partner's reliable window");
    return out;
}

AngularResidual angular_check(const FrenetApparatus& app, double u, double w, double lam) {
    if (std::abs(u * u + w * w - 1.0) > 1e-12)
        throw InvariantViolation("angular check needs u^2 + w^2 = 1 (v == 0)");
    if (std::abs(lam) < 1e-300) throw SingularOffset("lambda must be nonzero");
    const double amp = std::sqrt(u * u + w * w);
    const double theta0 = std::atan2(w, u);
    AngularResidual out;
    for (int i = 0; i < app.size(); ++i) {
        const double theta = std::atan2(app.tau[i], app.kappa[i]);
        const double c1 = 2.0 * u * app.kappa[i] -
                          (u * u + u * amp * std::cos(2.0 * theta + theta0)) / lam;
        const double c2 = 2.0 * w * app.tau[i] -
                          (-w * w + w * amp * std::sin(2.0 * theta + theta0)) / lam;
        out.first_max = std::max(out.first_max, std::abs(c1) * std::abs(lam));
        out.second_max = std::max(out.second_max, std::abs(c2) * std::abs(lam));
    }
    return out;
}

PartnerOdeResult partner_ode_residual(const FrenetApparatus& partner_app,
                                      const OffsetFunction& lam, const FrameVectorField& V,
                                      const Correspondence& corr,
                                      const PartnerOdeOptions& opts) {
    const auto [lo, hi] = reliable_window(partner_app, opts.window);
    const double h = partner_app.step;
    const int stride = std::clamp(static_cast<int>(std::lround(opts.stencil_span / h)), 2, 64);

    const CubicSpline s_of_sbar = inverse_correspondence(corr);
    const double s_hi = corr.s.back();

    const int np = partner_app.size();
    std::vector<double> psi(np, 0.0), lam_at(np, 0.0), v_at(np, 0.0);
    for (int j = lo; j < hi; ++j) {
        const double s = std::clamp(s_of_sbar(partner_app.s[j]), 0.0, s_hi);
        const Vec3 c = V.coeffs(s);
        psi[j] = std::atan2(c.z(), c.x());
        v_at[j] = c.y();
        lam_at[j] = lam.value(s);
        if (std::abs(lam_at[j]) < 1e-9)
            throw SingularOffset("lambda = " + std::to_string(lam_at[j]) + " at s = " +
                                 std::to_string(s));
        if (std::abs(v_at[j]) >= 1.0 - 1e-9)
            throw VTooLarge("|v| = " + std::to_string(std::abs(v_at[j])) + " at s = " +
                            std::to_string(s));
    }

    PartnerOdeResult out;
    double res_minus = 0.0, res_plus = 0.0;
    for (int j = lo + 2 * stride; j < hi - 2 * stride; ++j) {
        const double rate = std::max(partner_app.kappa[j], std::abs(partner_app.tau[j]));
        if (rate * stride * h > opts.resolve_cap) continue;

        auto strided = [&](const std::vector<double>& f) {
            return (f[j - 2 * stride] - 8.0 * f[j - stride] + 8.0 * f[j + stride] -
                    f[j + 2 * stride]) /
                   (12.0 * h * stride);
        };
        const double dtau = strided(partner_app.tau);
        const double dpsi = strided(psi);

        const double tb = partner_app.tau[j];
        const double kb = partner_app.kappa[j];
        const double l = lam_at[j];
        const double v = v_at[j];
        const double one_l2t2 = 1.0 + l * l * tb * tb;
        const double drift = v * tb * std::sqrt(one_l2t2) / (l * std::sqrt(1.0 - v * v));
        const double group = (dpsi + kb) * one_l2t2 / l;
        res_minus = std::max(res_minus, std::abs(dtau - (drift - group)));
        res_plus = std::max(res_plus, std::abs(dtau - (drift + group)));
        ++out.samples_used;
    }
    if (out.samples_used == 0)
        throw StepTooLarge("no resolvable samples for the partner ODE at this step");

    if (res_minus <= res_plus) {
        out.residual_max = res_minus;
        out.residual_other = res_plus;
        out.sign_convention = "paper-eq-b";
    } else {
        out.residual_max = res_plus;
        out.residual_other = res_minus;
        out.sign_convention = "paper-s1";
    }
    return out;
}

double speed_ratio_residual(const FrenetApparatus& partner_app, const OffsetFunction& lam,
                            const FrameVectorField& V, const Correspondence& corr,
                            const WindowOptions& opts) {
    const auto [lo, hi] = reliable_window(partner_app, opts);
    const auto grid = window_scalars(partner_app.s, lo, hi);
    const CubicSpline tau_bar(grid, window_scalars(partner_app.tau, lo, hi));
    const double sb_lo = partner_app.s[lo + 2];
    const double sb_hi = partner_app.s[hi - 3];

    // dsbar/ds on the uniform base grid; ratio = ds/dsbar.
    const double base_h = corr.s[1] - corr.s[0];
    const auto dsbar = derivative_5pt(corr.sbar, base_h);

    double worst = 0.0;
    for (size_t i = kBoundaryMargin; i + kBoundaryMargin < corr.s.size(); ++i) {
        const double sbar = corr.sbar[i];
        if (sbar < sb_lo || sbar > sb_hi || !(dsbar[i] > 0.0)) continue;
        const double tb = tau_bar(sbar);
        const double l = lam.value(corr.s[i]);
        const double v = V.coeffs(corr.s[i]).y();
        if (std::abs(v) >= 1.0 - 1e-9)
            throw VTooLarge("|v| too close to 1 at s = " + std::to_string(corr.s[i]));
        const double expected = std::sqrt((1.0 + l * l * tb * tb) / (1.0 - v * v));
        worst = std::max(worst, std::abs(1.0 / dsbar[i] - expected));
    }
    return worst;
}

ThetaRateResult theta_rate_check(const FrenetApparatus& base_app,
                                 const FrenetApparatus& partner_app,
                                 const Correspondence& corr, const WindowOptions& opts) {
    const auto [lo, hi] = reliable_window(partner_app, opts);
    const auto grid = window_scalars(partner_app.s, lo, hi);
    const CubicSpline kappa_bar(grid, window_scalars(partner_app.kappa, lo, hi));
    const double sb_lo = partner_app.s[lo + 2];
    const double sb_hi = partner_app.s[hi - 3];

    const int nb = base_app.size();
    std::vector<double> theta(nb);
    for (int i = 0; i < nb; ++i) theta[i] = std::atan2(base_app.tau[i], base_app.kappa[i]);
    // unwrap branch jumps
    for (int i = 1; i < nb; ++i) {
        while (theta[i] - theta[i - 1] > M_PI) theta[i] -= 2.0 * M_PI;
        while (theta[i] - theta[i - 1] < -M_PI) theta[i] += 2.0 * M_PI;
    }
    const auto dtheta = derivative_5pt(theta, base_app.step);
    const auto dsbar = derivative_5pt(corr.sbar, base_app.step);

    ThetaRateResult out;
    double signed_sum = 0.0;
    int used = 0;
    for (int i = kBoundaryMargin; i < nb - kBoundaryMargin; ++i) {
        const double sbar = corr.sbar[i];
        if (sbar < sb_lo || sbar > sb_hi || !(dsbar[i] > 0.0)) continue;
        const double rate = dtheta[i] / dsbar[i]; // dtheta/dsbar
        const double kb = kappa_bar(sbar);
        if (!(kb > 0.0)) continue;
        out.residual_max = std::max(out.residual_max, std::abs(std::abs(rate) / kb - 1.0));
        signed_sum += rate;
        ++used;
    }
    if (used == 0) throw StepTooLarge("no samples for the theta-rate check");
    out.sign = signed_sum >= 0.0 ? 1 : -1;
    return out;
}

MannheimReport check_mannheim(const FrenetApparatus& app, const FrameVectorField& V,
                              std::optional<double> lambda0, double tol_pred) {
    MannheimReport report;
    report.tol_pred = tol_pred;
    report.tol_col = kTolCol;

    OffsetFunction lam;
    if (lambda0.has_value()) {
        lam = OffsetFunction::constant(*lambda0);
        report.lambda_fit = *lambda0;
    } else {
        const auto est = estimate_lambda(app, V);
        lam = OffsetFunction::constant(est.lambda_fit);
        report.lambda_fit = est.lambda_fit;
    }
    const auto residual = vmannheim_residual(app, V, lam);
    report.residual_max = residual.max_abs;
    report.theta.resize(app.size());
    for (int i = 0; i < app.size(); ++i)
        report.theta[i] = std::atan2(app.tau[i], app.kappa[i]);
    report.verdict = report.residual_max < tol_pred;
    return report;
}

PartnerVerification verify_partner(const SampledCurve& base, const FrenetApparatus& app,
                                   const FrameVectorField& V, const OffsetFunction& lam,
                                   const PartnerOptions& opts) {
    PartnerCurve partner = build_partner(base, app, V, lam);

    // Quasi-cusps (speed dips the grid cannot resolve) are trimmed away; the
    // remaining checks run on the regular part of the partner.
    SampledCurve partner_unit = [&] {
        const SampledCurve full =
            resample_by_arclength(partner.beta.points(), base.step(), false);
        try {
            return largest_unit_speed_run(full);
        } catch (const DegenerateInput& e) {
            throw DegeneratePartner(std::string("partner cannot be re-parametrized: ") +
                                    e.what());
        }
    }();

    // Straight-line partners have no frames; detect before estimating them.
    const auto khat = estimate_curvature(partner_unit);
    int vanishing = 0;
    for (double k : khat)
        if (k < opts.kappa_min) ++vanishing;
    if (vanishing > static_cast<int>(khat.size()) / 20)
        throw DegeneratePartner("partner kappa below kappa_min on " +
                                std::to_string(vanishing) + " of " +
                                std::to_string(khat.size()) + " samples");

    PartnerVerification out{MannheimReport{}, std::move(partner), std::move(partner_unit),
                            FrenetApparatus{}, Correspondence{}};
    out.partner_app = frenet_apparatus(out.partner_unit, opts.kappa_min);
    out.corr = Correspondence{base.grid(), out.partner.sbar};

    MannheimReport& report = out.report;
    report.tol_pred = opts.tol_pred;
    report.tol_col = opts.tol_col;

    const auto residual = vmannheim_residual(app, V, lam);
    report.residual_max = residual.max_abs;
    report.lambda_fit = lam.lambda0;
    bool v_zero = true;
    for (int i = 0; i < app.size(); ++i)
        if (std::abs(V.coeffs(app.s[i]).y()) > 1e-12) {
            v_zero = false;
            break;
        }
    if (v_zero) report.lambda_fit = estimate_lambda(app, V).lambda_fit;

    const auto col = verify_collinear(app, out.partner_app, out.corr, opts.window,
                                      opts.kappa_min);
    report.collinearity_max = col.collinearity_max;
    report.epsilon = col.epsilon;
    report.epsilon_constant = col.epsilon_constant;

    const auto ode = partner_ode_residual(out.partner_app, lam, V, out.corr, opts.ode);
    report.ode_residual_max = ode.residual_max;
    report.sign_convention = ode.sign_convention;

    report.speed_ratio_max = speed_ratio_residual(out.partner_app, lam, V, out.corr,
                                                  opts.window);
    const auto rate = theta_rate_check(app, out.partner_app, out.corr, opts.window);
    report.theta_rate_residual = rate.residual_max;
    report.theta_rate_sign = rate.sign;

    report.theta.resize(app.size());
    for (int i = 0; i < app.size(); ++i)
        report.theta[i] = std::atan2(app.tau[i], app.kappa[i]);

    report.verdict = report.residual_max < opts.tol_pred &&
                     col.collinearity_max < opts.tol_col && col.epsilon_constant;
    return out;
}

} // namespace curvekit
