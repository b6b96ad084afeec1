#pragma once

#include <functional>
#include <map>
#include <string>

#include "curvekit/frenet.hpp"
#include "curvekit/numerics.hpp"

namespace curvekit {

using ScalarFn = std::function<double(double)>;

// Curvature/torsion profile (kappa(s), tau(s)) on [0, s_max] together with
// the torsion integral Phi(s) = integral of tau from 0 to s. Profiles are
// immutable; evaluation outside the domain throws OutOfDomain.
class CurvatureProfile {
public:
    enum class Kind { NamedAnalytic, Tabulated };

    // Closed-form torsion integral supplied by the caller.
    static CurvatureProfile analytic(ScalarFn kappa, ScalarFn tau, ScalarFn tau_integral,
                                     double s_max, Kind kind = Kind::NamedAnalytic);
    // Torsion integral built by composite-Simpson tabulation of tau.
    static CurvatureProfile analytic(ScalarFn kappa, ScalarFn tau, double s_max);
    // Cubic-interpolated samples on a uniform grid starting at 0.
    static CurvatureProfile tabulated(const std::vector<double>& grid,
                                      const std::vector<double>& kappa,
                                      const std::vector<double>& tau);

    double kappa(double s) const;
    double tau(double s) const;
    double tau_integral(double s) const;
    double s_max() const { return s_max_; }
    Kind kind() const { return kind_; }

private:
    CurvatureProfile(ScalarFn k, ScalarFn t, ScalarFn phi, double s_max, Kind kind);
    void check_domain(double s) const;

    ScalarFn kappa_, tau_, phi_;
    double s_max_;
    Kind kind_;
};

// Named analytic families: circle{r}, helix{a,b}, salkowski{a}.
CurvatureProfile make_named_curve(const std::string& family,
                                  const std::map<std::string, double>& params,
                                  double s_max);

enum class MannheimVariant { T, B };

// Curvature must stay above this fraction of R: theta ranges that graze the
// zeros of cos(theta) (variant T) or cos(theta) sin(theta) (variant B) give
// profiles whose frames are numerically unusable downstream.
inline constexpr double kMannheimKappaFloor = 2e-4;

// Profile families that satisfy the constant-offset Mannheim identities
// exactly:  variant T: kappa = R cos^2(theta), tau = R cos(theta) sin(theta)
// so kappa * R = kappa^2 + tau^2;  variant B swaps the roles so that
// tau * R = kappa^2 + tau^2.
CurvatureProfile mannheim_profile(double big_r, ScalarFn theta, MannheimVariant variant,
                                  double s_max, double kappa_min = kKappaMin);

} // namespace curvekit
