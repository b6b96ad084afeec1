#include "curvekit/geometry.hpp"

#include <cmath>

#include "curvekit/errors.hpp"

namespace curvekit {

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m) {
    const Eigen::Matrix3d gram = m.transpose() * m;
    const double dev = (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (dev < 0.1) {
        Eigen::Matrix3d q = m;
        for (int it = 0; it < 2; ++it)
            q = 0.5 * q * (3.0 * Eigen::Matrix3d::Identity() - q.transpose() * q);
        return q;
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d u = svd.matrixU();
    if ((u * svd.matrixV().transpose()).determinant() < 0.0) u.col(2) *= -1.0;
    return u * svd.matrixV().transpose();
}

SphereFit fit_sphere(const std::vector<Vec3>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 4) throw DegenerateInput("sphere fit needs at least 4 points");
    Eigen::MatrixXd a(n, 4);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        a(i, 0) = 2.0 * points[i].x();
        a(i, 1) = 2.0 * points[i].y();
        a(i, 2) = 2.0 * points[i].z();
        a(i, 3) = 1.0;
        b(i) = points[i].squaredNorm();
    }
    const Eigen::Vector4d sol = a.colPivHouseholderQr().solve(b);
    SphereFit fit;
    fit.center = sol.head<3>();
    const double r2 = sol(3) + fit.center.squaredNorm();
    if (!(r2 > 0.0)) throw DegenerateInput("sphere fit produced non-positive radius");
    fit.radius = std::sqrt(r2);
    double worst = 0.0;
    for (const auto& p : points)
        worst = std::max(worst, std::abs((p - fit.center).norm() - fit.radius));
    fit.residual = worst / fit.radius;
    return fit;
}

PlaneFit fit_plane(const std::vector<Vec3>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 3) throw DegenerateInput("plane fit needs at least 3 points");
    Vec3 centroid = Vec3::Zero();
    for (const auto& p : points) centroid += p;
    centroid /= n;
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& p : points) {
        const Vec3 d = p - centroid;
        cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    PlaneFit fit;
    fit.point = centroid;
    fit.normal = eig.eigenvectors().col(0).normalized();
    double worst = 0.0;
    for (const auto& p : points)
        worst = std::max(worst, std::abs(fit.normal.dot(p - centroid)));
    fit.residual = worst;
    return fit;
}

} // namespace curvekit
