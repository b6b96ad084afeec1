#pragma once

#include <optional>
#include <string>
#include <utility>

#include "curvekit/frenet.hpp"
#include "curvekit/integrate.hpp"
#include "curvekit/profile.hpp"
#include "curvekit/sampled_curve.hpp"

namespace curvekit {

// S_T(s) = kappa(s) cos(Phi(s) + phi0) with Phi the torsion integral of the
// apparatus; s_T(s) = kappa(s) cos(phi(s)) holds pointwise by construction.
struct GeneratingProfile {
    double phi0 = 0.0;
    ScalarFn s_T;
    ScalarFn phi; // Phi(s) + phi0
};

GeneratingProfile s_T(const FrenetApparatus& app, double theta0);

// S_M(s) = |gamma'| cos( integral of det(gamma, gamma', gamma'') / |gamma'|^2
// + theta0 ) for a spherical curve centered at the origin. Returns samples on
// the curve's grid. Throws NotSpherical when max | |gamma| - r | > 1e-6.
std::vector<double> s_M(const SampledCurve& gamma, double theta0);

// Builds alpha(s) = integral of S_M(s) gamma(s) ds and returns the relative
// least-squares sphere-fit residual of alpha.
double spherical_check(const std::vector<double>& s_m, const SampledCurve& gamma);

// Generated profile kappa_bar = kappa cos(phi), tau_bar = kappa sin(phi),
// phi = Phi + phi0; kappa_bar^2 + tau_bar^2 = kappa^2 holds identically.
// Throws CurvatureSignChange when kappa cos(phi) drops below kappa_min.
CurvatureProfile generated_curvatures(const FrenetApparatus& app, double phi0,
                                      double kappa_min = kKappaMin);

// Builds the generated curve K by Frenet integration of generated_curvatures,
// started from the frame that realizes beta'' = S_T gamma' (so Nbar = +T at
// every sample, not merely up to a rigid motion).
std::pair<SampledCurve, FrenetApparatus>
build_generated(const SampledCurve& base, const FrenetApparatus& app, double phi0);

// Post-checks of a built generated curve against its base.
struct GeneratedResiduals {
    double eq_beta_max = 0.0;          // max |beta'' - S_T gamma'|
    double normal_alignment_max = 0.0; // max |Nbar x T|
    int epsilon = 0;                   // sign of <Nbar, T>
};

GeneratedResiduals generated_residuals(const FrenetApparatus& base_app,
                                       const FrenetApparatus& k_app, double phi0);

enum class CurveLabel { Mannheim, BMannheim, VMannheim, Generating, None };

std::string to_string(CurveLabel label);

struct ClassificationResult {
    CurveLabel label = CurveLabel::None;
    double big_r = 0.0;
    double theta0 = 0.0;
    double fit_residual = 0.0;
};

inline constexpr double kClassifyTol = 1e-3;

// Least-squares fit of kappa(s) = A cos(Phi) + B sin(Phi) on the apparatus
// grid. A pass below kClassifyTol labels the curve per the sinusoid phase:
// cos-dominant -> Mannheim, sin-dominant -> BMannheim, VMannheim when a
// constant field (u, w) is supplied. With as_definition the label is
// Generating for any pass (the closing definition admits every phase).
ClassificationResult classify(const FrenetApparatus& app,
                              std::optional<std::pair<double, double>> field_uw = {},
                              bool as_definition = false);

} // namespace curvekit
