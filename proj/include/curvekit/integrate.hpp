#pragma once

#include <utility>

#include "curvekit/frenet.hpp"
#include "curvekit/profile.hpp"
#include "curvekit/sampled_curve.hpp"

namespace curvekit {

// Orthonormal right-handed frame fixing the integration constants of the
// Frenet system. The constructor enforces orthonormality and handedness to
// 1e-12.
struct InitialFrame {
    Vec3 origin = Vec3::Zero();
    Vec3 T0 = Vec3::UnitX();
    Vec3 N0 = Vec3::UnitY();
    Vec3 B0 = Vec3::UnitZ();

    InitialFrame() = default;
    InitialFrame(const Vec3& origin, const Vec3& t0, const Vec3& n0, const Vec3& b0);
};

// Integrates gamma' = T, T' = kappa N, N' = -kappa T + tau B, B' = -tau N
// with classical fixed-step RK4, re-orthonormalizing the frame after every
// step. The grid lands on s_max exactly (the step is shrunk to divide the
// domain evenly); the returned apparatus carries the integrated frames with
// the profile's exact kappa/tau values.
std::pair<SampledCurve, FrenetApparatus>
integrate_frenet(const CurvatureProfile& profile, const InitialFrame& init, double step);

} // namespace curvekit
