#include "curvekit/integrate.hpp"

#include <cmath>
#include <string>

#include "curvekit/errors.hpp"
#include "curvekit/geometry.hpp"

namespace curvekit {

namespace {

struct FrenetState {
    Vec3 p, T, N, B;

    FrenetState operator+(const FrenetState& o) const {
        return {p + o.p, T + o.T, N + o.N, B + o.B};
    }
    FrenetState operator*(double c) const { return {p * c, T * c, N * c, B * c}; }
};

FrenetState rhs(const FrenetState& y, double kappa, double tau) {
    return {y.T, kappa * y.N, -kappa * y.T + tau * y.B, -tau * y.N};
}

} // namespace

InitialFrame::InitialFrame(const Vec3& origin_, const Vec3& t0, const Vec3& n0,
                           const Vec3& b0)
    : origin(origin_), T0(t0), N0(n0), B0(b0) {
    Eigen::Matrix3d f;
    f.col(0) = T0;
    f.col(1) = N0;
    f.col(2) = B0;
    const double gram_dev = (f.transpose() * f - Eigen::Matrix3d::Identity())
                                .cwiseAbs()
                                .maxCoeff();
    if (gram_dev > 1e-12)
        throw InvariantViolation("initial frame is not orthonormal (deviation " +
                                 std::to_string(gram_dev) + ")");
    if (std::abs(f.determinant() - 1.0) > 1e-12)
        throw InvariantViolation("initial frame is not right-handed");
}

std::pair<SampledCurve, FrenetApparatus>
integrate_frenet(const CurvatureProfile& profile, const InitialFrame& init, double step) {
    if (!(step > 0.0)) throw ParamOutOfRange("integration step must be positive");
    const double s_max = profile.s_max();
    const int steps = static_cast<int>(std::ceil(s_max / step - 1e-9));
    if (steps < kMinSamples - 1)
        throw StepTooLarge("step " + std::to_string(step) + " leaves fewer than " +
                           std::to_string(kMinSamples) + " samples on [0, " +
                           std::to_string(s_max) + "]");
    const double h = s_max / steps;

    // Evaluate the profile on the half grid once: stability check and RK4
    // stage values come from the same pass.
    std::vector<double> kappa_half(2 * steps + 1), tau_half(2 * steps + 1);
    double max_rate = 0.0;
    for (int j = 0; j <= 2 * steps; ++j) {
        const double s = std::min(0.5 * j * h, s_max);
        kappa_half[j] = profile.kappa(s);
        tau_half[j] = profile.tau(s);
        if (!(kappa_half[j] > 0.0))
            throw NonPositiveCurvature("kappa(s) = " + std::to_string(kappa_half[j]) +
                                       " at s = " + std::to_string(s));
        max_rate = std::max({max_rate, kappa_half[j], std::abs(tau_half[j])});
    }
    if (h > 0.01 / max_rate + 1e-15)
        throw StepTooLarge("step " + std::to_string(h) + " exceeds 0.01 / max(kappa, |tau|) = " +
                           std::to_string(0.01 / max_rate));

    FrenetState y{init.origin, init.T0, init.N0, init.B0};

    std::vector<double> grid(steps + 1);
    std::vector<Vec3> points(steps + 1);
    FrenetApparatus app;
    app.step = h;
    app.s.resize(steps + 1);
    app.T.resize(steps + 1);
    app.N.resize(steps + 1);
    app.B.resize(steps + 1);
    app.kappa.resize(steps + 1);
    app.tau.resize(steps + 1);

    auto record = [&](int i) {
        grid[i] = i * h;
        points[i] = y.p;
        app.s[i] = grid[i];
        app.T[i] = y.T;
        app.N[i] = y.N;
        app.B[i] = y.B;
        app.kappa[i] = kappa_half[2 * i];
        app.tau[i] = tau_half[2 * i];
    };
    record(0);

    for (int i = 0; i < steps; ++i) {
        const double k0 = kappa_half[2 * i], t0 = tau_half[2 * i];
        const double km = kappa_half[2 * i + 1], tm = tau_half[2 * i + 1];
        const double k1 = kappa_half[2 * i + 2], t1 = tau_half[2 * i + 2];

        const FrenetState f1 = rhs(y, k0, t0);
        const FrenetState f2 = rhs(y + f1 * (0.5 * h), km, tm);
        const FrenetState f3 = rhs(y + f2 * (0.5 * h), km, tm);
        const FrenetState f4 = rhs(y + f3 * h, k1, t1);
        y = y + (f1 + (f2 + f3) * 2.0 + f4) * (h / 6.0);

        Eigen::Matrix3d frame;
        frame.col(0) = y.T;
        frame.col(1) = y.N;
        frame.col(2) = y.B;
        frame = nearest_rotation(frame);
        y.T = frame.col(0);
        y.N = frame.col(1);
        y.B = frame.col(2);

        record(i + 1);
    }

    SampledCurve curve(h, std::move(grid), std::move(points));
    app.validate(0.0);
    return {std::move(curve), std::move(app)};
}

} // namespace curvekit
