#pragma once

#include <vector>

#include "curvekit/numerics.hpp"

namespace curvekit {

inline constexpr double kSpeedTol = 1e-3;   // unit-speed chord tolerance
inline constexpr int kMinSamples = 7;       // 5-point stencils need interior margin

// Ordered samples of a space curve over a uniformly spaced parameter grid.
// The parameter is arc length for unit-speed curves; partner curves produced
// by the mannheim module stay on the base curve's grid and are not unit
// speed until re-parametrized.
class SampledCurve {
public:
    SampledCurve(double step, std::vector<double> s, std::vector<Vec3> points);

    int size() const { return static_cast<int>(points_.size()); }
    double step() const { return step_; }
    double s(int i) const { return s_[i]; }
    const Vec3& point(int i) const { return points_[i]; }
    const std::vector<double>& grid() const { return s_; }
    const std::vector<Vec3>& points() const { return points_; }
    double param_length() const { return s_.back() - s_.front(); }

    // Max over cells of | chord / step - 1 |.
    double max_speed_deviation() const;
    // Throws InvariantViolation when the curve is not unit speed within tol.
    void require_unit_speed(double tol = kSpeedTol) const;

private:
    double step_;
    std::vector<double> s_;
    std::vector<Vec3> points_;
};

// Re-parametrizes an ordered polyline by arc length: cumulative-chord cubic
// splines, Gauss quadrature for length, and monotone inversion to place
// samples at multiples of step. With enforce_unit_speed the result is checked
// against kSpeedTol; callers that window their estimates may skip the check
// and trim instead.
SampledCurve resample_by_arclength(const std::vector<Vec3>& points, double step,
                                   bool enforce_unit_speed = true);

// Largest contiguous subrange whose chords all meet the unit-speed tolerance.
// Throws DegenerateInput when the run is shorter than min_fraction of the
// input (or the minimum sample count).
SampledCurve largest_unit_speed_run(const SampledCurve& curve, double tol = kSpeedTol,
                                    double min_fraction = 0.25);

} // namespace curvekit
