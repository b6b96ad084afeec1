#include "curvekit/sampled_curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "curvekit/errors.hpp"

namespace curvekit {

SampledCurve::SampledCurve(double step, std::vector<double> s, std::vector<Vec3> points)
    : step_(step), s_(std::move(s)), points_(std::move(points)) {
    if (!(step_ > 0.0)) throw InvariantViolation("curve step must be positive");
    if (s_.size() != points_.size())
        throw InvariantViolation("curve grid and point counts differ");
    const int n = size();
    if (n < kMinSamples)
        throw InvariantViolation("curve needs at least " + std::to_string(kMinSamples) +
                                 " samples, got " + std::to_string(n));
    // Uniform spacing; the tolerance is relative to the grid extent so that
    // honest accumulation in s0 + i*step rounding passes.
    const double tol = 1e-12 * std::max({1.0, std::abs(s_.back()), step_});
    for (int i = 0; i + 1 < n; ++i) {
        const double ds = s_[i + 1] - s_[i];
        if (!(ds > 0.0) || std::abs(ds - step_) > tol)
            throw InvariantViolation("curve grid is not uniformly spaced at index " +
                                     std::to_string(i));
    }
}

double SampledCurve::max_speed_deviation() const {
    double worst = 0.0;
    for (int i = 0; i + 1 < size(); ++i) {
        const double chord = (points_[i + 1] - points_[i]).norm();
        worst = std::max(worst, std::abs(chord / step_ - 1.0));
    }
    return worst;
}

void SampledCurve::require_unit_speed(double tol) const {
    const double dev = max_speed_deviation();
    if (dev > tol)
        throw InvariantViolation("curve is not unit speed: chord deviation " +
                                 std::to_string(dev) + " exceeds " + std::to_string(tol));
}

namespace {

// Arc length of the spline restricted to [a, x] by 5-point Gauss quadrature.
double segment_length(const VecSpline& spline, double a, double x) {
    const double mid = 0.5 * (a + x);
    const double half = 0.5 * (x - a);
    double acc = 0.0;
    for (int g = 0; g < 5; ++g)
        acc += Gauss5::weight[g] * spline.derivative(mid + half * Gauss5::node[g]).norm();
    return half * acc;
}

} // namespace

SampledCurve resample_by_arclength(const std::vector<Vec3>& points, double step,
                                   bool enforce_unit_speed) {
    if (!(step > 0.0)) throw ParamOutOfRange("resampling step must be positive");
    const int n = static_cast<int>(points.size());
    if (n < 4) throw DegenerateInput("resampling needs at least 4 points, got " +
                                     std::to_string(n));

    std::vector<double> t(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) {
        const double chord = (points[i + 1] - points[i]).norm();
        if (!(chord > 0.0))
            throw DuplicatePoints("consecutive points coincide at index " + std::to_string(i));
        t[i + 1] = t[i] + chord;
    }

    const VecSpline spline(t, points);

    // Cumulative arc length at the knots.
    std::vector<double> arc(n, 0.0);
    for (int i = 0; i + 1 < n; ++i)
        arc[i + 1] = arc[i] + segment_length(spline, t[i], t[i + 1]);
    const double total = arc.back();
    if (total < 10.0 * step)
        throw DegenerateInput("total length " + std::to_string(total) +
                              " is below 10 steps of " + std::to_string(step));

    const int count = static_cast<int>(std::floor(total / step + 1e-9)) + 1;

    // Invert arc(t) = s with a bracketed Newton iteration.
    auto invert = [&](double target) {
        if (target <= 0.0) return t.front();
        if (target >= total) return t.back();
        int i = static_cast<int>(std::upper_bound(arc.begin(), arc.end(), target) -
                                 arc.begin()) - 1;
        i = std::clamp(i, 0, n - 2);
        double lo = t[i], hi = t[i + 1];
        double x = 0.5 * (lo + hi);
        const double gtol = 1e-14 * std::max(1.0, total);
        for (int it = 0; it < 100; ++it) {
            const double g = arc[i] + segment_length(spline, t[i], x) - target;
            if (std::abs(g) <= gtol) return x;
            if (g > 0.0) hi = x;
            else lo = x;
            const double speed = spline.derivative(x).norm();
            double next = (speed > 0.0) ? x - g / speed : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - x) <= 4e-16 * std::max(1.0, t.back())) return next;
            x = next;
        }
        return x;
    };

    std::vector<double> s_out(count);
    std::vector<Vec3> p_out(count);
    for (int k = 0; k < count; ++k) {
        s_out[k] = k * step;
        p_out[k] = spline(invert(s_out[k]));
    }

    SampledCurve out(step, std::move(s_out), std::move(p_out));
    if (enforce_unit_speed) out.require_unit_speed();
    return out;
}

SampledCurve largest_unit_speed_run(const SampledCurve& curve, double tol,
                                    double min_fraction) {
    const int n = curve.size();
    std::vector<char> ok(n - 1, 0);
    for (int i = 0; i + 1 < n; ++i) {
        const double chord = (curve.point(i + 1) - curve.point(i)).norm();
        ok[i] = std::abs(chord / curve.step() - 1.0) <= tol;
    }
    int best_lo = 0, best_hi = 0;
    for (int i = 0; i < n - 1;) {
        if (!ok[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j < n - 1 && ok[j]) ++j;
        if (j - i > best_hi - best_lo) {
            best_lo = i;
            best_hi = j;
        }
        i = j;
    }
    const int count = best_hi - best_lo + 1; // cells -> samples
    if (count < std::max(kMinSamples, static_cast<int>(min_fraction * n)))
        throw DegenerateInput("longest unit-speed run covers only " + std::to_string(count) +
                              " of " + std::to_string(n) + " samples");
    std::vector<double> s(curve.grid().begin() + best_lo, curve.grid().begin() + best_hi + 1);
    std::vector<Vec3> p(curve.points().begin() + best_lo, curve.points().begin() + best_hi + 1);
    return SampledCurve(curve.step(), std::move(s), std::move(p));
}

} // namespace curvekit
