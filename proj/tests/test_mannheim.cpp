#include <cmath>

#include <doctest.h>

#include "curvekit/errors.hpp"
#include "curvekit/integrate.hpp"
#include "curvekit/mannheim.hpp"
#include "curvekit/profile.hpp"
#include "support/oracles.hpp"

using namespace curvekit;

namespace {

// Reconstructed T-Mannheim base curve: kappa = R cos^2(0.4 s), lambda = 1/R.
struct TMannheimBase {
    SampledCurve curve;
    FrenetApparatus app;
};

TMannheimBase make_t_mannheim_base(double step = 1e-3) {
    const auto profile =
        mannheim_profile(4.0, [](double s) { return 0.4 * s; }, MannheimVariant::T, 2.0);
    auto [curve, app] = integrate_frenet(profile, InitialFrame{}, step);
    return {std::move(curve), std::move(app)};
}

} // namespace

TEST_CASE("frame fields enforce the unit-norm invariant") {
    CHECK_THROWS_AS(FrameVectorField::constant(1.0, 1.0, 0.0), InvariantViolation);
    const auto drifting = FrameVectorField::varying(
        [](double s) { return 1.0 + 0.1 * s; }, [](double) { return 0.0; },
        [](double) { return 0.0; });
    CHECK(drifting.coeffs(0.0).x() == 1.0);
    CHECK_THROWS_AS(drifting.coeffs(1.0), InvariantViolation);
}

TEST_CASE("vmannheim_residual flags mismatched domains") {
    const auto app = oracle::exact_helix_apparatus({2.0, 1.0}, 5.0, 1e-2);
    const auto lam = lambda_from_v([](double) { return 0.0; }, 2.0, 1.0, 1e-3);
    CHECK_THROWS_AS(vmannheim_residual(app, FrameVectorField::constant(1, 0, 0), lam),
                    DomainMismatch);
}

TEST_CASE("verify_collinear rejects widely vanishing partner curvature") {
    const auto base = oracle::exact_helix_apparatus({2.0, 1.0}, 5.0, 1e-3);
    auto partner = base;
    partner.B = base.N;
    for (int i = 0; i < partner.size() / 10; ++i) partner.kappa[i] = 1e-9;
    Correspondence corr{base.s, base.s};
    CHECK_THROWS_AS(verify_collinear(base, partner, corr), DegeneratePartner);
}

TEST_CASE("lambda_from_v quadrature") {
    SUBCASE("zero integrand") {
        const auto lam = lambda_from_v([](double) { return 0.0; }, 2.0, 5.0, 1e-3);
        CHECK(lam.value(0.0) == 2.0);
        CHECK(lam.value(3.7) == 2.0);
    }
    SUBCASE("constant integrand") {
        const auto lam = lambda_from_v([](double) { return 0.3; }, 0.0, 5.0, 1e-3);
        for (double s = 0.0; s <= 5.0; s += 0.41)
            CHECK(lam.value(s) == doctest::Approx(-0.3 * s).epsilon(1e-13));
    }
    SUBCASE("sin integrand against the antiderivative") {
        const auto lam = lambda_from_v([](double s) { return std::sin(s); }, 0.0, 5.0, 1e-3);
        double worst = 0.0;
        for (double s = 0.0; s <= 5.0; s += 0.013)
            worst = std::max(worst, std::abs(lam.value(s) - (std::cos(s) - 1.0)));
        CHECK(worst < 1e-10);
        CHECK(lam.value(0.0) == 0.0);
    }
}

TEST_CASE("vmannheim_residual on exact apparatuses") {
    SUBCASE("unit circle with lambda 1 satisfies the predicate") {
        const auto app = oracle::exact_circle_apparatus(1.0, 3.0, 1e-2);
        const auto res = vmannheim_residual(app, FrameVectorField::constant(1, 0, 0),
                                            OffsetFunction::constant(1.0));
        CHECK(res.max_abs < 1e-14);
    }
    SUBCASE("helix with lambda 2 satisfies, lambda 1 fails with residual 1") {
        const auto app = oracle::exact_helix_apparatus({2.0, 1.0}, 5.0, 1e-2);
        const auto good = vmannheim_residual(app, FrameVectorField::constant(1, 0, 0),
                                             OffsetFunction::constant(2.0));
        CHECK(good.max_abs < 1e-14);
        const auto bad = vmannheim_residual(app, FrameVectorField::constant(1, 0, 0),
                                            OffsetFunction::constant(1.0));
        CHECK(bad.max_abs == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("estimate_lambda") {
    SUBCASE("circle of radius 3") {
        const auto app = oracle::exact_circle_apparatus(3.0, 5.0, 1e-2);
        const auto est = estimate_lambda(app, FrameVectorField::constant(1, 0, 0));
        CHECK(est.lambda_fit == doctest::Approx(3.0).epsilon(1e-13));
        CHECK(est.flatness < 1e-12);
    }
    SUBCASE("helix fit equals the radius parameter") {
        const auto app = oracle::exact_helix_apparatus({2.0, 1.0}, 5.0, 1e-2);
        const auto est = estimate_lambda(app, FrameVectorField::constant(1, 0, 0));
        CHECK(est.lambda_fit == doctest::Approx(2.0).epsilon(1e-13));
    }
    SUBCASE("reconstructed mannheim profile fits lambda = 1/R") {
        const auto base = make_t_mannheim_base();
        const auto est = estimate_lambda(base.app, FrameVectorField::constant(1, 0, 0));
        CHECK(std::abs(est.lambda_fit - 0.25) < 1e-6);
        CHECK(est.flatness < 1e-3);
    }
    SUBCASE("rejects nonzero v") {
        const auto app = oracle::exact_helix_apparatus({2.0, 1.0}, 5.0, 1e-2);
        CHECK_THROWS_AS(estimate_lambda(app, FrameVectorField::constant(0, 1, 0)),
                        NotApplicable);
    }
    SUBCASE("guards vanishing kappa^2 + tau^2") {
        auto app = oracle::exact_circle_apparatus(1.0, 3.0, 1e-2);
        for (auto& k : app.kappa) k = 1e-7;
        CHECK_THROWS_AS(estimate_lambda(app, FrameVectorField::constant(1, 0, 0)),
                        DivideByZero);
    }
}

TEST_CASE("angular characterization for constant fields") {
    SUBCASE("helix with the right lambda") {
        const auto app = oracle::exact_helix_apparatus({2.0, 1.0}, 5.0, 1e-2);
        const auto res = angular_check(app, 1.0, 0.0, 2.0);
        CHECK(res.first_max < 1e-10);
        CHECK(res.second_max < 1e-10);
    }
    SUBCASE("circle with lambda = r") {
        const auto app = oracle::exact_circle_apparatus(2.0, 5.0, 1e-2);
        const auto res = angular_check(app, 1.0, 0.0, 2.0);
        CHECK(res.first_max < 1e-12);
        CHECK(res.second_max < 1e-12);
    }
    SUBCASE("helix with the wrong lambda fails loudly") {
        const auto app = oracle::exact_helix_apparatus({2.0, 1.0}, 5.0, 1e-2);
        const auto res = angular_check(app, 1.0, 0.0, 1.0);
        CHECK(res.first_max > 0.1);
    }
    SUBCASE("u^2 + w^2 must be 1") {
        const auto app = oracle::exact_helix_apparatus({2.0, 1.0}, 5.0, 1e-2);
        CHECK_THROWS_AS(angular_check(app, 1.0, 0.5, 2.0), InvariantViolation);
    }
}

TEST_CASE("build_partner") {
    SUBCASE("unit circle with V = T and lambda 1 collapses to the center") {
        const auto profile = make_named_curve("circle", {{"r", 1.0}}, 2.0 * M_PI);
        const auto [curve, app] = integrate_frenet(profile, InitialFrame{}, 1e-3);
        CHECK_THROWS_AS(build_partner(curve, app, FrameVectorField::constant(1, 0, 0),
                                      OffsetFunction::constant(1.0)),
                        DegeneratePartner);
    }
    SUBCASE("zero offset returns the integral curve of T, i.e. the curve itself") {
        const auto base = make_t_mannheim_base();
        const auto partner = build_partner(base.curve, base.app,
                                           FrameVectorField::constant(1, 0, 0),
                                           OffsetFunction::constant(0.0));
        double worst = 0.0;
        for (int i = 0; i < base.curve.size(); ++i)
            worst = std::max(worst, (partner.beta.point(i) -
                                     (base.curve.point(i) - base.curve.point(0))).norm());
        CHECK(worst < 1e-9);
    }
    SUBCASE("mannheim base yields a nondegenerate partner") {
        const auto base = make_t_mannheim_base();
        const auto partner = build_partner(base.curve, base.app,
                                           FrameVectorField::constant(1, 0, 0),
                                           OffsetFunction::constant(0.25));
        CHECK(partner.sbar.back() > 0.5);
        for (size_t i = 1; i < partner.sbar.size(); ++i)
            CHECK(partner.sbar[i] > partner.sbar[i - 1]);
    }
}

TEST_CASE("verify_collinear on an identity pairing is exactly zero") {
    const auto base = oracle::exact_helix_apparatus({2.0, 1.0}, 5.0, 1e-3);
    auto partner = base;
    partner.B = base.N; // pretend the partner binormal sits on the base normal
    Correspondence corr{base.s, base.s};
    const auto res = verify_collinear(base, partner, corr);
    CHECK(res.collinearity_max < 1e-15);
    CHECK(res.epsilon == 1);
    CHECK(res.epsilon_constant);
    CHECK(res.samples_used > 1000);
}

TEST_CASE("partner pipeline on the T-Mannheim base") {
    const auto base = make_t_mannheim_base();
    const auto field = FrameVectorField::constant(1, 0, 0);

    SUBCASE("correct offset verifies") {
        const auto result =
            verify_partner(base.curve, base.app, field, OffsetFunction::constant(0.25));
        const auto& rep = result.report;
        CHECK(rep.verdict);
        CHECK(rep.residual_max < 1e-4);
        CHECK(*rep.collinearity_max < 1e-4);
        CHECK(rep.epsilon_constant);
        CHECK(*rep.epsilon == 1);
        CHECK(*rep.ode_residual_max < 1e-3);
        CHECK(*rep.sign_convention == "paper-eq-b");
        CHECK(*rep.speed_ratio_max < 1e-3);
        // the open question: |dtheta/dsbar| = kappa_bar, observed sign +
        CHECK(*rep.theta_rate_residual < 1e-2);
        CHECK(*rep.theta_rate_sign == 1);
    }
    SUBCASE("wrong offset is rejected on collinearity") {
        const auto result =
            verify_partner(base.curve, base.app, field, OffsetFunction::constant(0.30));
        CHECK_FALSE(result.report.verdict);
        CHECK(*result.report.collinearity_max > 1e-2);
    }
    SUBCASE("kappa perturbation breaks predicate and collinearity together") {
        const auto profile = CurvatureProfile::analytic(
            [](double s) { return 1.05 * 4.0 * std::pow(std::cos(0.4 * s), 2); },
            [](double s) { return 4.0 * std::cos(0.4 * s) * std::sin(0.4 * s); }, 2.0);
        const auto [curve, app] = integrate_frenet(profile, InitialFrame{}, 1e-3);
        const auto residual = vmannheim_residual(app, field, OffsetFunction::constant(0.25));
        CHECK(residual.max_abs > 1e-2);
        const auto result = verify_partner(curve, app, field, OffsetFunction::constant(0.25));
        CHECK(*result.report.collinearity_max > 1e-2);
    }
}

TEST_CASE("helix partner with lambda 2 degenerates to the axis line") {
    const auto profile = make_named_curve("helix", {{"a", 2.0}, {"b", 1.0}}, 10.0);
    const auto [curve, app] = integrate_frenet(profile, InitialFrame{}, 1e-3);
    CHECK_THROWS_AS(verify_partner(curve, app, FrameVectorField::constant(1, 0, 0),
                                   OffsetFunction::constant(2.0)),
                    DegeneratePartner);
}

TEST_CASE("B-Mannheim forward direction: V = B with lambda = -1/R") {
    const auto profile = mannheim_profile(
        4.0, [](double s) { return 0.3 + 0.4 * s; }, MannheimVariant::B, 2.0);
    const auto [curve, app] = integrate_frenet(profile, InitialFrame{}, 1e-3);
    const auto result = verify_partner(curve, app, FrameVectorField::constant(0, 0, 1),
                                       OffsetFunction::constant(-0.25));
    CHECK(result.report.residual_max < 1e-4);
    CHECK(*result.report.collinearity_max < 1e-4);
    CHECK(result.report.epsilon_constant);
    // negative lambda flips the winning convention of the kappa-bar group
    CHECK(*result.report.sign_convention == "paper-s1");
    CHECK(*result.report.ode_residual_max < 5e-3);
}

TEST_CASE("non-constant v field built to satisfy the predicate verifies") {
    // v = 0.1 sin s, u = sqrt(1 - v^2), w = 0, lambda0 = 0.4; the profile is
    // constructed so u kappa - w tau = lambda (kappa^2 + tau^2) pointwise.
    auto v = [](double s) { return 0.1 * std::sin(s); };
    auto u = [v](double s) { return std::sqrt(1.0 - v(s) * v(s)); };
    auto lam_cf = [](double s) { return 0.4 - 0.1 * (1.0 - std::cos(s)); };
    auto theta = [](double s) { return 0.5 + 0.3 * s; };
    auto rho = [=](double s) { return u(s) * std::cos(theta(s)) / lam_cf(s); };
    const auto profile = CurvatureProfile::analytic(
        [=](double s) { return rho(s) * std::cos(theta(s)); },
        [=](double s) { return rho(s) * std::sin(theta(s)); }, 2.0);
    const auto [curve, app] = integrate_frenet(profile, InitialFrame{}, 1e-3);

    const auto field = FrameVectorField::varying(u, v, [](double) { return 0.0; });
    const auto lam = lambda_from_v(v, 0.4, 2.0, 1e-3);

    const auto residual = vmannheim_residual(app, field, lam);
    CHECK(residual.max_abs < 1e-4);

    const auto result = verify_partner(curve, app, field, lam);
    CHECK(*result.report.collinearity_max < 1e-3);
    CHECK(result.report.epsilon_constant);
    CHECK(*result.report.ode_residual_max < 5e-3);
    CHECK(*result.report.speed_ratio_max < 1e-3);
}

TEST_CASE("general V with varying u and w exercises the arctan term") {
    auto v = [](double s) { return 0.1 * std::sin(s); };
    auto g = [](double s) { return 0.2 * s; };
    auto u = [=](double s) { return std::cos(g(s)) * std::sqrt(1.0 - v(s) * v(s)); };
    auto w = [=](double s) { return std::sin(g(s)) * std::sqrt(1.0 - v(s) * v(s)); };
    auto lam_cf = [](double s) { return 0.4 - 0.1 * (1.0 - std::cos(s)); };
    auto theta = [](double s) { return 0.4 + 0.2 * s; };
    auto rho = [=](double s) {
        return (u(s) * std::cos(theta(s)) - w(s) * std::sin(theta(s))) / lam_cf(s);
    };
    const auto profile = CurvatureProfile::analytic(
        [=](double s) { return rho(s) * std::cos(theta(s)); },
        [=](double s) { return rho(s) * std::sin(theta(s)); }, 2.0);
    const auto [curve, app] = integrate_frenet(profile, InitialFrame{}, 1e-3);

    const auto field = FrameVectorField::varying(u, v, w);
    const auto lam = lambda_from_v(v, 0.4, 2.0, 1e-3);
    const auto result = verify_partner(curve, app, field, lam);
    CHECK(*result.report.collinearity_max < 1e-3);
    CHECK(*result.report.ode_residual_max < 5e-3);
    CHECK(*result.report.sign_convention == "paper-eq-b");
}

TEST_CASE("planar partner reduces the ODE residual to kappa/lambda") {
    const auto partner = oracle::exact_circle_apparatus(2.0, 5.0, 1e-3);
    Correspondence corr{partner.s, partner.s};
    const auto res = partner_ode_residual(partner, OffsetFunction::constant(0.5),
                                          FrameVectorField::constant(1, 0, 0), corr);
    // dtau/dsbar = 0 and tau = 0, so both conventions leave exactly kappa/lambda.
    CHECK(res.residual_max == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.residual_other == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("perturbing the partner torsion inflates the ODE residual") {
    const auto base = make_t_mannheim_base();
    const auto result = verify_partner(base.curve, base.app,
                                       FrameVectorField::constant(1, 0, 0),
                                       OffsetFunction::constant(0.25));
    auto perturbed = result.partner_app;
    for (auto& t : perturbed.tau) t *= 1.1;
    const auto res = partner_ode_residual(perturbed, OffsetFunction::constant(0.25),
                                          FrameVectorField::constant(1, 0, 0), result.corr);
    CHECK(res.residual_max > 10.0 * *result.report.ode_residual_max);
}

TEST_CASE("scaling the curve scales lambda and keeps verdicts") {
    const auto base = make_t_mannheim_base();
    const double c = 2.3;
    std::vector<double> s(base.curve.size());
    std::vector<Vec3> p(base.curve.size());
    for (int i = 0; i < base.curve.size(); ++i) {
        s[i] = c * base.curve.s(i);
        p[i] = c * base.curve.point(i);
    }
    const SampledCurve scaled(c * base.curve.step(), std::move(s), std::move(p));
    const auto app = frenet_apparatus(scaled);
    const auto est = estimate_lambda(app, FrameVectorField::constant(1, 0, 0));
    CHECK(est.lambda_fit == doctest::Approx(c * 0.25).epsilon(1e-4));
    const auto res = vmannheim_residual(app, FrameVectorField::constant(1, 0, 0),
                                        OffsetFunction::constant(c * 0.25));
    CHECK(res.max_abs < kTolPredEstimated);
}

TEST_CASE("check_mannheim assembles a predicate-only report") {
    const auto app = oracle::exact_helix_apparatus({2.0, 1.0}, 5.0, 1e-2);
    const auto report = check_mannheim(app, FrameVectorField::constant(1, 0, 0),
                                       std::nullopt, 1e-6);
    CHECK(report.verdict);
    CHECK(report.lambda_fit == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(report.collinearity_max.has_value());
    CHECK_FALSE(report.sign_convention.has_value());
    CHECK(report.theta[0] == doctest::Approx(std::atan2(0.2, 0.4)).epsilon(1e-12));
}
