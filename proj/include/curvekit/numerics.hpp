#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace curvekit {

using Vec3 = Eigen::Vector3d;

namespace detail {
template <typename T>
struct ZeroOf {
    static T value() { return T{}; }
};
template <>
struct ZeroOf<Vec3> {
    static Vec3 value() { return Vec3::Zero(); }
};
} // namespace detail

// First derivative of uniformly spaced samples, 4th order. Interior samples
// use the centered 5-point stencil; the two samples at each boundary use the
// matching one-sided 5-point stencils.
template <typename T>
std::vector<T> derivative_5pt(const std::vector<T>& f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 5) throw std::invalid_argument("derivative_5pt needs at least 5 samples");
    std::vector<T> d(n, detail::ZeroOf<T>::value());
    const double w = 1.0 / (12.0 * h);
    for (int i = 2; i < n - 2; ++i)
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * w;
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * w;
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * w;
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) * w;
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) * w;
    return d;
}

// Cumulative integral of uniformly spaced samples. Each cell integrates the
// degree-4 polynomial through five neighbouring samples (Newton-Cotes family),
// so quartics integrate exactly and the cumulative error is O(h^4).
template <typename T>
std::vector<T> cumulative_integral(const std::vector<T>& f, double h) {
    static constexpr double kFirst[5] = {251.0, 646.0, -264.0, 106.0, -19.0};
    static constexpr double kSecond[5] = {-19.0, 346.0, 456.0, -74.0, 11.0};
    static constexpr double kMid[5] = {11.0, -74.0, 456.0, 346.0, -19.0};
    const int n = static_cast<int>(f.size());
    if (n < 5) throw std::invalid_argument("cumulative_integral needs at least 5 samples");
    std::vector<T> out(n, detail::ZeroOf<T>::value());
    T acc = detail::ZeroOf<T>::value();
    const double s = h / 720.0;
    for (int k = 0; k + 1 < n; ++k) {
        const double* w = kMid;
        int base = k - 2;
        if (k == 0) {
            w = kFirst;
            base = 0;
        } else if (k == 1) {
            w = kSecond;
            base = 0;
        } else if (k == n - 2) {
            // mirrored first-cell rule
            T cell = detail::ZeroOf<T>::value();
            for (int j = 0; j < 5; ++j) cell = cell + f[n - 1 - j] * kFirst[j];
            acc = acc + cell * s;
            out[k + 1] = acc;
            continue;
        }
        T cell = detail::ZeroOf<T>::value();
        for (int j = 0; j < 5; ++j) cell = cell + f[base + j] * w[j];
        acc = acc + cell * s;
        out[k + 1] = acc;
    }
    return out;
}

// Composite Simpson rule with true midpoint evaluations.
double simpson(const std::function<double(double)>& f, double a, double b, int cells);

// Cubic spline with not-a-knot end conditions over strictly increasing knots.
// Evaluation outside [x_front - eps, x_back + eps] throws OutOfDomain.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    int locate(double& x) const;

    std::vector<double> x_, y_, m_; // m_: second derivatives at knots
};

// Component-wise cubic spline of 3D samples.
class VecSpline {
public:
    VecSpline(const std::vector<double>& x, const std::vector<Vec3>& p);
    Vec3 operator()(double x) const;
    Vec3 derivative(double x) const;
    double x_front() const { return sx_->x_front(); }
    double x_back() const { return sx_->x_back(); }

private:
    std::shared_ptr<CubicSpline> sx_, sy_, sz_;
};

// Cumulative integral of a callable on [0, s_max], tabulated per cell with
// composite Simpson and evaluated anywhere in the domain by integrating the
// partial cell on the fly. value(0) = 0.
class IntegralTable {
public:
    IntegralTable(std::function<double(double)> f, double s_max, int cells);
    double operator()(double s) const;
    double s_max() const { return s_max_; }

private:
    std::function<double(double)> f_;
    double s_max_, h_;
    std::vector<double> table_;
};

// Weights of the 5-point Gauss-Legendre rule on [-1, 1].
struct Gauss5 {
    static const double node[5];
    static const double weight[5];
};

} // namespace curvekit
