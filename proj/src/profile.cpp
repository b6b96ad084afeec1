#include "curvekit/profile.hpp"

#include <cmath>
#include <memory>
#include <set>

#include "curvekit/errors.hpp"

namespace curvekit {

namespace {
constexpr int kPhiCells = 8192;
constexpr int kGuardSamples = 4096;
} // namespace

CurvatureProfile::CurvatureProfile(ScalarFn k, ScalarFn t, ScalarFn phi, double s_max,
                                   Kind kind)
    : kappa_(std::move(k)), tau_(std::move(t)), phi_(std::move(phi)), s_max_(s_max),
      kind_(kind) {
    if (!(s_max_ > 0.0)) throw ParamOutOfRange("profile needs s_max > 0");
}

void CurvatureProfile::check_domain(double s) const {
    const double eps = 1e-9 * std::max(1.0, s_max_);
    if (s < -eps || s > s_max_ + eps)
        throw OutOfDomain("profile evaluated at s = " + std::to_string(s) +
                          " outside [0, " + std::to_string(s_max_) + "]");
}

double CurvatureProfile::kappa(double s) const {
    check_domain(s);
    return kappa_(std::clamp(s, 0.0, s_max_));
}

double CurvatureProfile::tau(double s) const {
    check_domain(s);
    return tau_(std::clamp(s, 0.0, s_max_));
}

double CurvatureProfile::tau_integral(double s) const {
    check_domain(s);
    return phi_(std::clamp(s, 0.0, s_max_));
}

CurvatureProfile CurvatureProfile::analytic(ScalarFn kappa, ScalarFn tau,
                                            ScalarFn tau_integral, double s_max, Kind kind) {
    return CurvatureProfile(std::move(kappa), std::move(tau), std::move(tau_integral),
                            s_max, kind);
}

CurvatureProfile CurvatureProfile::analytic(ScalarFn kappa, ScalarFn tau, double s_max) {
    auto table = std::make_shared<IntegralTable>(tau, s_max, kPhiCells);
    return CurvatureProfile(std::move(kappa), std::move(tau),
                            [table](double s) { return (*table)(s); }, s_max,
                            Kind::NamedAnalytic);
}

CurvatureProfile CurvatureProfile::tabulated(const std::vector<double>& grid,
                                             const std::vector<double>& kappa,
                                             const std::vector<double>& tau) {
    const int n = static_cast<int>(grid.size());
    if (n < 4) throw ParamOutOfRange("tabulated profile needs at least 4 grid points");
    if (kappa.size() != grid.size() || tau.size() != grid.size())
        throw ParamOutOfRange("tabulated profile arrays have mismatched lengths");
    if (std::abs(grid.front()) > 1e-12)
        throw ParamOutOfRange("tabulated profile grid must start at 0");
    const double h = grid[1] - grid[0];
    const double tol = 1e-9 * std::max(1.0, std::abs(grid.back()));
    for (int i = 0; i + 1 < n; ++i)
        if (std::abs(grid[i + 1] - grid[i] - h) > tol)
            throw ParamOutOfRange("tabulated profile grid is not uniform");
    for (int i = 0; i < n; ++i)
        if (!(kappa[i] > 0.0))
            throw NonPositiveCurvature("tabulated kappa <= 0 at grid index " +
                                       std::to_string(i));

    auto ks = std::make_shared<CubicSpline>(grid, kappa);
    auto ts = std::make_shared<CubicSpline>(grid, tau);
    const double s_max = grid.back();
    const int cells = std::max(kPhiCells, 4 * (n - 1));
    auto phi = std::make_shared<IntegralTable>([ts](double s) { return (*ts)(s); },
                                               s_max, cells);
    return CurvatureProfile([ks](double s) { return (*ks)(s); },
                            [ts](double s) { return (*ts)(s); },
                            [phi](double s) { return (*phi)(s); }, s_max, Kind::Tabulated);
}

namespace {

void require_params(const std::string& family, const std::map<std::string, double>& params,
                    const std::set<std::string>& names) {
    for (const auto& name : names)
        if (!params.count(name))
            throw ParamOutOfRange(family + " requires parameter '" + name + "'");
    for (const auto& [key, value] : params) {
        (void)value;
        if (!names.count(key))
            throw ParamOutOfRange(family + " does not take parameter '" + key + "'");
    }
}

} // namespace

CurvatureProfile make_named_curve(const std::string& family,
                                  const std::map<std::string, double>& params,
                                  double s_max) {
    if (!(s_max > 0.0)) throw ParamOutOfRange("s_max must be positive");
    if (family == "circle") {
        require_params(family, params, {"r"});
        const double r = params.at("r");
        if (!(r > 0.0)) throw ParamOutOfRange("circle radius must be positive");
        return CurvatureProfile::analytic([r](double) { return 1.0 / r; },
                                          [](double) { return 0.0; },
                                          [](double) { return 0.0; }, s_max);
    }
    if (family == "helix") {
        require_params(family, params, {"a", "b"});
        const double a = params.at("a");
        const double b = params.at("b");
        if (!(a > 0.0)) throw ParamOutOfRange("helix radius a must be positive");
        const double k = a / (a * a + b * b);
        const double t = b / (a * a + b * b);
        return CurvatureProfile::analytic([k](double) { return k; },
                                          [t](double) { return t; },
                                          [t](double s) { return t * s; }, s_max);
    }
    if (family == "salkowski") {
        // Constant curvature 1 with the classical arc-length torsion
        // tau(s) = a s / sqrt(1 - (a s)^2); requires a*s_max < 1.
        require_params(family, params, {"a"});
        const double a = params.at("a");
        if (!(a > 0.0 && a < 1.0)) throw ParamOutOfRange("salkowski parameter a must lie in (0, 1)");
        if (!(a * s_max < 1.0))
            throw ParamOutOfRange("salkowski domain requires a * s_max < 1, got " +
                                  std::to_string(a * s_max));
        return CurvatureProfile::analytic(
            [](double) { return 1.0; },
            [a](double s) { return a * s / std::sqrt(1.0 - a * a * s * s); },
            [a](double s) { return (1.0 - std::sqrt(1.0 - a * a * s * s)) / a; }, s_max);
    }
    throw UnknownFamily("no curve family named '" + family + "'");
}

CurvatureProfile mannheim_profile(double big_r, ScalarFn theta, MannheimVariant variant,
                                  double s_max, double kappa_min) {
    if (!(big_r > 0.0)) throw ParamOutOfRange("mannheim profile needs R > 0");
    ScalarFn kappa, tau;
    if (variant == MannheimVariant::T) {
        kappa = [big_r, theta](double s) {
            const double c = std::cos(theta(s));
            return big_r * c * c;
        };
        tau = [big_r, theta](double s) {
            const double th = theta(s);
            return big_r * std::cos(th) * std::sin(th);
        };
    } else {
        kappa = [big_r, theta](double s) {
            const double th = theta(s);
            return big_r * std::cos(th) * std::sin(th);
        };
        tau = [big_r, theta](double s) {
            const double c = std::cos(theta(s));
            return big_r * c * c;
        };
    }
    const double floor = std::max(kappa_min, kMannheimKappaFloor * big_r);
    for (int i = 0; i <= kGuardSamples; ++i) {
        const double s = s_max * i / kGuardSamples;
        if (kappa(s) < floor)
            throw CurvatureVanishes("mannheim profile kappa = " + std::to_string(kappa(s)) +
                                    " at s = " + std::to_string(s) + " is below " +
                                    std::to_string(floor));
    }
    return CurvatureProfile::analytic(std::move(kappa), std::move(tau), s_max);
}

} // namespace curvekit
