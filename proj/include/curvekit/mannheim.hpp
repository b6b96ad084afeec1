#pragma once

#include <optional>
#include <string>
#include <vector>

#include "curvekit/frenet.hpp"
#include "curvekit/profile.hpp"
#include "curvekit/sampled_curve.hpp"

namespace curvekit {

// Unit frame field V = u T + v N + w B. Coefficients are checked against the
// unit-norm invariant on every evaluation.
class FrameVectorField {
public:
    static FrameVectorField constant(double u, double v, double w);
    static FrameVectorField varying(ScalarFn u, ScalarFn v, ScalarFn w);

    // (u, v, w) at s; throws InvariantViolation when u^2+v^2+w^2 deviates
    // from 1 by more than 1e-12.
    Vec3 coeffs(double s) const;
    bool is_constant() const { return constant_; }

private:
    FrameVectorField(ScalarFn u, ScalarFn v, ScalarFn w, bool constant);
    ScalarFn u_, v_, w_;
    bool constant_;
};

// Offset function lambda(s) = lambda0 - integral of v, paired with the v it
// came from so lambda' = -v holds by construction.
struct OffsetFunction {
    double lambda0 = 0.0;
    ScalarFn value; // lambda(s)
    ScalarFn v;     // -lambda'(s)

    static OffsetFunction constant(double lambda0);
};

// Composite-Simpson quadrature of v at the given step.
OffsetFunction lambda_from_v(ScalarFn v, double lambda0, double s_max, double step);

// Pointwise residual of the V-Mannheim predicate
//   r(s) = (u kappa - w tau - lambda (kappa^2 + tau^2)) / max(kappa^2 + tau^2).
struct ResidualProfile {
    std::vector<double> r;
    double max_abs = 0.0;
    double normalizer = 0.0;
};

ResidualProfile vmannheim_residual(const FrenetApparatus& app, const FrameVectorField& V,
                                   const OffsetFunction& lam);

// Solves the predicate for a constant lambda when v == 0:
// lambda(s) = (u kappa - w tau) / (kappa^2 + tau^2), reported as mean and
// relative flatness.
struct LambdaEstimate {
    double lambda_fit = 0.0;
    double flatness = 0.0;
};

LambdaEstimate estimate_lambda(const FrenetApparatus& app, const FrameVectorField& V);

// Partner curve beta(s) = integral of V + lambda(s) N(s) sampled on the base
// grid (not unit speed), with the monotone arc-length correspondence
// sbar(s_i) computed from the closed-form speed of beta.
struct PartnerCurve {
    SampledCurve beta;
    std::vector<double> sbar;
};

PartnerCurve build_partner(const SampledCurve& base, const FrenetApparatus& app,
                           const FrameVectorField& V, const OffsetFunction& lam);

struct Correspondence {
    std::vector<double> s;    // base parameter, uniform
    std::vector<double> sbar; // partner arc length, strictly increasing
};

// Estimation-window controls for checks on an estimated partner apparatus.
// Samples where step * max(kappa, |tau|) exceeds `resolve` cannot be
// differentiated reliably; `margin` strips the boundary halo left by the
// cascaded one-sided stencils.
struct WindowOptions {
    int margin = 24;
    double resolve = 0.01;
};

// Largest contiguous run of resolvable samples, [first, last). Throws
// StepTooLarge when empty.
std::pair<int, int> reliable_window(const FrenetApparatus& app, const WindowOptions& opts);

struct CollinearityResult {
    double collinearity_max = 0.0; // max over compared samples of |Bbar x N|
    int epsilon = 0;               // sign of <Bbar, N> at the first sample
    bool epsilon_constant = true;
    int samples_used = 0;
};

// Tests the defining pairing Bbar(sbar(s)) = epsilon N(s). Throws
// DegeneratePartner when partner kappa < kappa_min on more than 5% of
// samples.
CollinearityResult verify_collinear(const FrenetApparatus& base_app,
                                    const FrenetApparatus& partner_app,
                                    const Correspondence& corr,
                                    const WindowOptions& opts = {},
                                    double kappa_min = kKappaMin);

// Angular characterization for constant (u, w), v == 0:
//   2 u kappa = (1/lambda) [u^2 + u sqrt(u^2+w^2) cos(2 theta + theta0)]
//   2 w tau   = (1/lambda) [-w^2 + w sqrt(u^2+w^2) sin(2 theta + theta0)]
// with theta = atan2(tau, kappa). Residuals are normalized by 1/lambda.
struct AngularResidual {
    double first_max = 0.0;
    double second_max = 0.0;
};

AngularResidual angular_check(const FrenetApparatus& app, double u, double w, double lam);

// Partner torsion ODE. Both pairings of the kappa-bar group are evaluated:
//   dtau/dsbar = v tau sqrt(1+lambda^2 tau^2) / (lambda sqrt(1-v^2))
//                -+ (1/lambda)(d(arctan(w/u))/dsbar + kappa) (1+lambda^2 tau^2)
// and the convention with the smaller residual is reported ("paper-eq-b" for
// the minus pairing, "paper-s1" for the plus pairing).
struct PartnerOdeOptions {
    WindowOptions window;
    double stencil_span = 0.008; // arc length covered by one stencil arm
    double resolve_cap = 0.04;   // skip samples with max(kappa,|tau|)*span above this
};

struct PartnerOdeResult {
    double residual_max = 0.0;
    double residual_other = 0.0;
    std::string sign_convention; // "paper-eq-b" | "paper-s1"
    int samples_used = 0;
};

PartnerOdeResult partner_ode_residual(const FrenetApparatus& partner_app,
                                      const OffsetFunction& lam, const FrameVectorField& V,
                                      const Correspondence& corr,
                                      const PartnerOdeOptions& opts = {});

// Max deviation of ds/dsbar from sqrt((1+lambda^2 tau^2)/(1-v^2)) over the
// reliable window.
double speed_ratio_residual(const FrenetApparatus& partner_app, const OffsetFunction& lam,
                            const FrameVectorField& V, const Correspondence& corr,
                            const WindowOptions& opts = {});

// Empirical check of |d theta / dsbar| = kappa_bar with theta = atan2(tau,
// kappa) on the base curve; the relative sign varies with frame orientation,
// so the observed one is reported rather than assumed.
struct ThetaRateResult {
    double residual_max = 0.0; // max | |dtheta/dsbar| / kappa_bar - 1 |
    int sign = 0;
};

ThetaRateResult theta_rate_check(const FrenetApparatus& base_app,
                                 const FrenetApparatus& partner_app,
                                 const Correspondence& corr, const WindowOptions& opts = {});

// Verdict record for a Mannheim check or full partner verification.
struct MannheimReport {
    bool verdict = false;
    double lambda_fit = 0.0;
    double residual_max = 0.0;
    std::optional<double> collinearity_max;
    std::optional<int> epsilon;
    bool epsilon_constant = true;
    std::optional<std::string> sign_convention;
    std::optional<double> ode_residual_max;
    std::optional<double> speed_ratio_max;
    std::optional<double> theta_rate_residual;
    std::optional<int> theta_rate_sign;
    std::vector<double> theta; // atan2(tau, kappa) per base sample
    double tol_pred = 0.0;
    double tol_col = 0.0;
};

inline constexpr double kTolPredAnalytic = 1e-6;
inline constexpr double kTolPredEstimated = 1e-4;
inline constexpr double kTolCol = 1e-4;

// Predicate-only check of an apparatus against V. When `lambda` is absent and
// v == 0, lambda is fitted with estimate_lambda.
MannheimReport check_mannheim(const FrenetApparatus& app, const FrameVectorField& V,
                              std::optional<double> lambda0, double tol_pred = kTolPredEstimated);

struct PartnerOptions {
    double kappa_min = kKappaMin;
    WindowOptions window;
    PartnerOdeOptions ode;
    double tol_pred = kTolPredEstimated;
    double tol_col = kTolCol;
};

struct PartnerVerification {
    MannheimReport report;
    PartnerCurve partner;          // on the base grid
    SampledCurve partner_unit;     // re-parametrized by arc length
    FrenetApparatus partner_app;   // estimated on the unit-speed partner
    Correspondence corr;
};

// Full pipeline: predicate residual, partner construction, re-parametrization,
// partner apparatus, collinearity, partner ODE, speed ratio and theta-rate
// checks. Degenerate partners (collapsed point or straight line) surface as
// DegeneratePartner.
PartnerVerification verify_partner(const SampledCurve& base, const FrenetApparatus& app,
                                   const FrameVectorField& V, const OffsetFunction& lam,
                                   const PartnerOptions& opts = {});

} // namespace curvekit
