#pragma once

#include <vector>

#include "curvekit/numerics.hpp"
#include "curvekit/sampled_curve.hpp"

namespace curvekit {

inline constexpr double kKappaMin = 1e-6;       // below this the normal is meaningless
inline constexpr double kFrameTol = 1e-8;       // orthonormality / handedness tolerance
inline constexpr int kBoundaryMargin = 2;       // one-sided stencil samples per end

// Per-sample Frenet frame (T, N, B) with curvature and torsion on a uniform
// arc-length grid. Frames are right-handed and orthonormal to kFrameTol.
struct FrenetApparatus {
    double step = 0.0;
    std::vector<double> s;
    std::vector<Vec3> T, N, B;
    std::vector<double> kappa, tau;

    int size() const { return static_cast<int>(s.size()); }

    // Max over samples of the frame Gram matrix deviation from identity.
    double orthonormality_report() const;
    // Max over samples of |det(T,N,B) - 1|.
    double handedness_report() const;
    // Throws when frames drift past kFrameTol or kappa dips below kappa_min.
    void validate(double kappa_min = kKappaMin) const;
};

// Estimates the Frenet apparatus of a unit-speed sampled curve with 4th-order
// finite differences, then projects each frame to the nearest rotation.
// Throws VanishingCurvature when kappa < kappa_min anywhere.
FrenetApparatus frenet_apparatus(const SampledCurve& curve, double kappa_min = kKappaMin);

// frame_orthonormality_report(app): alias kept close to the apparatus type.
inline double frame_orthonormality_report(const FrenetApparatus& app) {
    return app.orthonormality_report();
}

// Curvature magnitudes only, with no failure on vanishing curvature. Used to
// detect degenerate (straight or collapsed) curves before building frames.
std::vector<double> estimate_curvature(const SampledCurve& curve);

} // namespace curvekit
