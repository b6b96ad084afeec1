#include "curvekit/generating.hpp"

#include <cmath>
#include <memory>

#include "curvekit/errors.hpp"
#include "curvekit/geometry.hpp"

namespace curvekit {

namespace {

// kappa spline and torsion-integral spline shared by the generating ops.
struct AppSplines {
    std::shared_ptr<CubicSpline> kappa;
    std::shared_ptr<CubicSpline> phi; // integral of tau, 0 at s front
};

AppSplines make_app_splines(const FrenetApparatus& app) {
    const auto phi = cumulative_integral(app.tau, app.step);
    return {std::make_shared<CubicSpline>(app.s, app.kappa),
            std::make_shared<CubicSpline>(app.s, phi)};
}

} // namespace

GeneratingProfile s_T(const FrenetApparatus& app, double theta0) {
    const auto sp = make_app_splines(app);
    GeneratingProfile out;
    out.phi0 = theta0;
    out.phi = [sp, theta0](double s) { return (*sp.phi)(s) + theta0; };
    out.s_T = [sp, theta0](double s) {
        return (*sp.kappa)(s) * std::cos((*sp.phi)(s) + theta0);
    };
    return out;
}

std::vector<double> s_M(const SampledCurve& gamma, double theta0) {
    const int n = gamma.size();
    double radius = 0.0;
    for (const auto& p : gamma.points()) radius += p.norm();
    radius /= n;
    for (int i = 0; i < n; ++i) {
        const double dev = std::abs(gamma.point(i).norm() - radius);
        if (dev > 1e-6)
            throw NotSpherical("curve is not on an origin-centered sphere: | |p| - r | = " +
                               std::to_string(dev) + " at sample " + std::to_string(i));
    }

    const auto d1 = derivative_5pt(gamma.points(), gamma.step());
    const auto d2 = derivative_5pt(d1, gamma.step());
    std::vector<double> integrand(n), speed(n);
    for (int i = 0; i < n; ++i) {
        speed[i] = d1[i].norm();
        if (!(speed[i] > 0.0))
            throw DegenerateInput("gamma' vanishes at sample " + std::to_string(i));
        integrand[i] = gamma.point(i).dot(d1[i].cross(d2[i])) / (speed[i] * speed[i]);
    }
    const auto accumulated = cumulative_integral(integrand, gamma.step());

    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = speed[i] * std::cos(accumulated[i] + theta0);
    return out;
}

double spherical_check(const std::vector<double>& s_m, const SampledCurve& gamma) {
    const int n = gamma.size();
    if (static_cast<int>(s_m.size()) != n)
        throw DomainMismatch("S_M samples do not match the curve grid");
    std::vector<Vec3> integrand(n);
    for (int i = 0; i < n; ++i) integrand[i] = s_m[i] * gamma.point(i);
    const auto alpha = cumulative_integral(integrand, gamma.step());
    return fit_sphere(alpha).residual;
}

CurvatureProfile generated_curvatures(const FrenetApparatus& app, double phi0,
                                      double kappa_min) {
    if (std::abs(app.s.front()) > 1e-12)
        throw DomainMismatch("generated profile needs an apparatus grid starting at 0");
    const auto sp = make_app_splines(app);
    for (int i = 0; i < app.size(); ++i) {
        const double phi = (*sp.phi)(app.s[i]) + phi0;
        if (app.kappa[i] * std::cos(phi) < kappa_min)
            throw CurvatureSignChange("generated kappa = kappa cos(phi) = " +
                                      std::to_string(app.kappa[i] * std::cos(phi)) +
                                      " at s = " + std::to_string(app.s[i]));
    }
    auto kappa_bar = [sp, phi0](double s) {
        return (*sp.kappa)(s) * std::cos((*sp.phi)(s) + phi0);
    };
    auto tau_bar = [sp, phi0](double s) {
        return (*sp.kappa)(s) * std::sin((*sp.phi)(s) + phi0);
    };
    const double s_max = app.s.back();
    const int cells = std::max(8192, 4 * (app.size() - 1));
    auto phi_bar = std::make_shared<IntegralTable>(tau_bar, s_max, cells);
    return CurvatureProfile::analytic(std::move(kappa_bar), std::move(tau_bar),
                                      [phi_bar](double s) { return (*phi_bar)(s); }, s_max,
                                      CurvatureProfile::Kind::Tabulated);
}

std::pair<SampledCurve, FrenetApparatus>
build_generated(const SampledCurve& base, const FrenetApparatus& app, double phi0) {
    CurvatureProfile profile = generated_curvatures(app, phi0);

    // Initial frame solving beta'' = S_T gamma' at s = 0:
    //   Nbar0 = T0,  Tbar0 = -cos(phi0) N0 + sin(phi0) B0,
    //   Bbar0 = Tbar0 x Nbar0 = sin(phi0) N0 + cos(phi0) B0.
    const Vec3 t0 = app.T.front(), n0 = app.N.front(), b0 = app.B.front();
    const InitialFrame init(base.point(0),
                            -std::cos(phi0) * n0 + std::sin(phi0) * b0, t0,
                            std::sin(phi0) * n0 + std::cos(phi0) * b0);
    return integrate_frenet(profile, init, base.step());
}

GeneratedResiduals generated_residuals(const FrenetApparatus& base_app,
                                       const FrenetApparatus& k_app, double phi0) {
    const int n = std::min(base_app.size(), k_app.size());
    const GeneratingProfile gen = s_T(base_app, phi0);
    const auto beta_dd = derivative_5pt(k_app.T, k_app.step); // beta'' = Tbar'

    GeneratedResiduals out;
    double eps_sum = 0.0;
    for (int i = kBoundaryMargin; i < n - kBoundaryMargin; ++i) {
        const double st = gen.s_T(base_app.s[i]);
        out.eq_beta_max = std::max(out.eq_beta_max,
                                   (beta_dd[i] - st * base_app.T[i]).norm());
        out.normal_alignment_max = std::max(out.normal_alignment_max,
                                            k_app.N[i].cross(base_app.T[i]).norm());
        eps_sum += k_app.N[i].dot(base_app.T[i]);
    }
    out.epsilon = eps_sum >= 0.0 ? 1 : -1;
    return out;
}

std::string to_string(CurveLabel label) {
    switch (label) {
    case CurveLabel::Mannheim: return "mannheim";
    case CurveLabel::BMannheim: return "b_mannheim";
    case CurveLabel::VMannheim: return "v_mannheim";
    case CurveLabel::Generating: return "generating";
    case CurveLabel::None: return "none";
    }
    return "none";
}

ClassificationResult classify(const FrenetApparatus& app,
                              std::optional<std::pair<double, double>> field_uw,
                              bool as_definition) {
    const int n = app.size();
    const auto phi = cumulative_integral(app.tau, app.step);

    Eigen::MatrixXd design(n, 2);
    Eigen::VectorXd target(n);
    double kappa_scale = 0.0;
    for (int i = 0; i < n; ++i) {
        design(i, 0) = std::cos(phi[i]);
        design(i, 1) = std::sin(phi[i]);
        target(i) = app.kappa[i];
        kappa_scale = std::max(kappa_scale, std::abs(app.kappa[i]));
    }
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);
    const Eigen::VectorXd fitted = design * coef;

    ClassificationResult out;
    out.fit_residual = (target - fitted).cwiseAbs().maxCoeff() / kappa_scale;
    out.big_r = std::hypot(coef(0), coef(1));
    if (out.fit_residual >= kClassifyTol || !(out.big_r > 0.0)) {
        out.label = CurveLabel::None;
        out.theta0 = 0.0;
        return out;
    }
    if (as_definition) {
        out.label = CurveLabel::Generating;
        out.theta0 = std::atan2(-coef(1), coef(0));
    } else if (field_uw.has_value()) {
        out.label = CurveLabel::VMannheim;
        out.theta0 = std::atan2(-coef(1), coef(0));
    } else if (std::abs(coef(0)) >= std::abs(coef(1))) {
        // kappa = R cos(Phi + theta0)
        out.label = CurveLabel::Mannheim;
        out.theta0 = std::atan2(-coef(1), coef(0));
    } else {
        // kappa = R sin(Phi + theta0)
        out.label = CurveLabel::BMannheim;
        out.theta0 = std::atan2(coef(0), coef(1));
    }
    return out;
}

} // namespace curvekit
