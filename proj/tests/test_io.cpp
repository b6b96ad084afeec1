#include <cmath>
#include <filesystem>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "curvekit/errors.hpp"
#include "curvekit/io.hpp"
#include "support/oracles.hpp"

using namespace curvekit;
using nlohmann::json;

TEST_CASE("format_double round-trips exactly") {
    for (double x : {0.0, 1.0 / 3.0, -2.718281828459045e-7, 6.283185307179586, 1e17}) {
        const std::string text = io::format_double(x);
        CHECK(std::stod(text) == x);
    }
}

TEST_CASE("curve CSV round trip is bit exact") {
    const oracle::Helix hx{2.0, 1.0};
    const auto curve = oracle::sample_unit_speed([&](double s) { return hx.point(s); }, 3.0, 1e-2);
    const auto back = io::curve_from_csv(io::curve_to_csv(curve));
    REQUIRE(back.size() == curve.size());
    CHECK(back.step() == curve.step());
    for (int i = 0; i < curve.size(); ++i) {
        CHECK(back.s(i) == curve.s(i));
        CHECK(back.point(i) == curve.point(i));
    }
}

TEST_CASE("apparatus CSV round trip is bit exact") {
    const oracle::Helix hx{2.0, 1.0};
    const auto curve = oracle::sample_unit_speed([&](double s) { return hx.point(s); }, 3.0, 1e-2);
    const auto app = oracle::exact_helix_apparatus(hx, 3.0, 1e-2);
    const auto back = io::apparatus_from_csv(io::apparatus_to_csv(curve, app));
    REQUIRE(back.size() == app.size());
    for (int i = 0; i < app.size(); ++i) {
        CHECK(back.T[i] == app.T[i]);
        CHECK(back.N[i] == app.N[i]);
        CHECK(back.B[i] == app.B[i]);
        CHECK(back.kappa[i] == app.kappa[i]);
        CHECK(back.tau[i] == app.tau[i]);
    }
}

TEST_CASE("CSV parsing rejects malformed input") {
    CHECK_THROWS_AS(io::curve_from_csv("x,y,z\n1,2,3\n"), ParseError);
    CHECK_THROWS_AS(io::curve_from_csv("s,x,y,z\n0,0,0\n"), ParseError);
    CHECK_THROWS_AS(io::curve_from_csv("s,x,y,z\n0,0,zero,0\n0.1,1,0,0\n"), ParseError);
}

TEST_CASE("profile JSON") {
    SUBCASE("named helix") {
        const json j = {{"kind", "named"},
                        {"family", "helix"},
                        {"params", {{"a", 2.0}, {"b", 1.0}}},
                        {"s_max", 10.0},
                        {"step", 0.001}};
        const auto spec = io::profile_from_json(j);
        CHECK(spec.profile.kappa(1.0) == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(spec.step.has_value());
        CHECK(*spec.step == 0.001);
    }
    SUBCASE("tabulated") {
        json j;
        j["kind"] = "tabulated";
        std::vector<double> grid, kap, tau;
        for (int i = 0; i <= 100; ++i) {
            grid.push_back(i * 0.01);
            kap.push_back(1.0);
            tau.push_back(0.5);
        }
        j["grid"] = grid;
        j["kappa"] = kap;
        j["tau"] = tau;
        const auto spec = io::profile_from_json(j);
        CHECK(spec.profile.kind() == CurvatureProfile::Kind::Tabulated);
        CHECK(spec.profile.tau_integral(1.0) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK_FALSE(spec.step.has_value());
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(io::profile_from_json(json{{"kind", "mystery"}}), ParseError);
        CHECK_THROWS_AS(io::profile_from_json(json{{"kind", "named"}}), ParseError);
        CHECK_THROWS_AS(io::profile_from_json(json::array()), ParseError);
    }
}

TEST_CASE("report JSON carries exactly the documented keys") {
    MannheimReport report;
    report.verdict = true;
    report.lambda_fit = 0.25;
    report.residual_max = 1e-9;
    report.collinearity_max = 2e-6;
    report.epsilon = 1;
    report.sign_convention = "paper-eq-b";
    report.tol_pred = 1e-4;
    report.tol_col = 1e-4;
    const json j = io::report_to_json(report);
    CHECK(j.size() == 7);
    for (const char* key : {"verdict", "lambda_fit", "residual_max", "collinearity_max",
                            "epsilon", "sign_convention", "tolerances"})
        CHECK(j.contains(key));
    CHECK(j["tolerances"].size() == 2);
    CHECK(j["epsilon"] == 1);

    MannheimReport bare;
    const json j2 = io::report_to_json(bare);
    CHECK(j2["collinearity_max"].is_null());
    CHECK(j2["sign_convention"].is_null());
}

TEST_CASE("classification JSON") {
    ClassificationResult result;
    result.label = CurveLabel::BMannheim;
    result.big_r = 3.0;
    result.theta0 = 0.25;
    result.fit_residual = 1e-5;
    const json j = io::classification_to_json(result);
    CHECK(j["label"] == "b_mannheim");
    CHECK(j.size() == 4);
}

TEST_CASE("atomic write replaces the file and leaves no temp") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "curvekit_io_test";
    fs::create_directories(dir);
    const auto path = (dir / "out.txt").string();
    io::atomic_write(path, "first\n");
    io::atomic_write(path, "second\n");
    CHECK(io::read_file(path) == "second\n");
    CHECK_FALSE(fs::exists(path + ".tmp"));
    fs::remove_all(dir);
}

TEST_CASE("projection SVG is deterministic and panelled") {
    const oracle::Helix hx{2.0, 1.0};
    const auto curve = oracle::sample_unit_speed([&](double s) { return hx.point(s); }, 3.0, 1e-2);
    const auto svg1 = io::projection_svg(curve, nullptr);
    const auto svg2 = io::projection_svg(curve, nullptr);
    CHECK(svg1 == svg2);
    CHECK(svg1.rfind("<svg", 0) == 0);
    size_t polylines = 0, pos = 0;
    while ((pos = svg1.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == 3);
    const auto overlaid = io::projection_svg(curve, &curve);
    size_t polylines2 = 0;
    pos = 0;
    while ((pos = overlaid.find("<polyline", pos)) != std::string::npos) {
        ++polylines2;
        pos += 9;
    }
    CHECK(polylines2 == 6);
}
