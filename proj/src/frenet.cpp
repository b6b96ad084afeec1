#include "curvekit/frenet.hpp"

#include <cmath>
#include <string>

#include "curvekit/errors.hpp"
#include "curvekit/geometry.hpp"

namespace curvekit {

double FrenetApparatus::orthonormality_report() const {
    double worst = 0.0;
    for (int i = 0; i < size(); ++i) {
        Eigen::Matrix3d f;
        f.col(0) = T[i];
        f.col(1) = N[i];
        f.col(2) = B[i];
        const Eigen::Matrix3d gram = f.transpose() * f;
        worst = std::max(worst, (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    }
    return worst;
}

double FrenetApparatus::handedness_report() const {
    double worst = 0.0;
    for (int i = 0; i < size(); ++i)
        worst = std::max(worst, std::abs(T[i].dot(N[i].cross(B[i])) - 1.0));
    return worst;
}

void FrenetApparatus::validate(double kappa_min) const {
    if (size() < kMinSamples) throw InvariantViolation("apparatus has too few samples");
    if (orthonormality_report() > kFrameTol)
        throw InvariantViolation("frame orthonormality drift exceeds tolerance");
    if (handedness_report() > kFrameTol)
        throw InvariantViolation("frame handedness drift exceeds tolerance");
    for (int i = 0; i < size(); ++i)
        if (kappa[i] < kappa_min)
            throw VanishingCurvature("kappa = " + std::to_string(kappa[i]) + " at s = " +
                                     std::to_string(s[i]));
}

std::vector<double> estimate_curvature(const SampledCurve& curve) {
    const auto tangents_raw = derivative_5pt(curve.points(), curve.step());
    std::vector<Vec3> tangents(tangents_raw.size());
    for (size_t i = 0; i < tangents_raw.size(); ++i) {
        const double len = tangents_raw[i].norm();
        tangents[i] = (len > 0.0) ? Vec3(tangents_raw[i] / len) : Vec3::Zero();
    }
    const auto tprime = derivative_5pt(tangents, curve.step());
    std::vector<double> kappa(tprime.size());
    for (size_t i = 0; i < tprime.size(); ++i) kappa[i] = tprime[i].norm();
    return kappa;
}

FrenetApparatus frenet_apparatus(const SampledCurve& curve, double kappa_min) {
    curve.require_unit_speed();
    const int n = curve.size();
    const double h = curve.step();

    auto tangents = derivative_5pt(curve.points(), h);
    for (auto& t : tangents) t.normalize();

    const auto tprime = derivative_5pt(tangents, h);

    FrenetApparatus app;
    app.step = h;
    app.s = curve.grid();
    app.T.resize(n);
    app.N.resize(n);
    app.B.resize(n);
    app.kappa.resize(n);
    app.tau.resize(n);

    for (int i = 0; i < n; ++i) {
        app.kappa[i] = tprime[i].norm();
        if (app.kappa[i] < kappa_min)
            throw VanishingCurvature("kappa = " + std::to_string(app.kappa[i]) +
                                     " below kappa_min at s = " + std::to_string(app.s[i]));
        Eigen::Matrix3d frame;
        frame.col(0) = tangents[i];
        frame.col(1) = tprime[i] / app.kappa[i];
        frame.col(2) = frame.col(0).cross(frame.col(1));
        frame = nearest_rotation(frame);
        app.T[i] = frame.col(0);
        app.N[i] = frame.col(1);
        app.B[i] = frame.col(2);
    }

    const auto bprime = derivative_5pt(app.B, h);
    for (int i = 0; i < n; ++i) app.tau[i] = -bprime[i].dot(app.N[i]);

    app.validate(kappa_min);
    return app;
}

} // namespace curvekit
