#pragma once

#include <vector>

#include "curvekit/numerics.hpp"

namespace curvekit {

// Nearest rotation matrix to M (polar factor). Uses a Newton-Schulz iteration
// for near-orthogonal input and falls back to an SVD otherwise.
Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m);

struct SphereFit {
    Vec3 center = Vec3::Zero();
    double radius = 0.0;
    double residual = 0.0; // max |dist(p, center) - radius| / radius
};

// Algebraic least-squares sphere through a point cloud.
SphereFit fit_sphere(const std::vector<Vec3>& points);

struct PlaneFit {
    Vec3 point = Vec3::Zero();
    Vec3 normal = Vec3::UnitZ();
    double residual = 0.0; // max |<p - point, normal>|
};

// Total least-squares plane through a point cloud.
PlaneFit fit_plane(const std::vector<Vec3>& points);

} // namespace curvekit
