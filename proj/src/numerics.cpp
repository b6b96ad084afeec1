#include "curvekit/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "curvekit/errors.hpp"

namespace curvekit {

const double Gauss5::node[5] = {
    -0.9061798459386640, -0.5384693101056831, 0.0,
    0.5384693101056831, 0.9061798459386640};
const double Gauss5::weight[5] = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

double simpson(const std::function<double(double)>& f, double a, double b, int cells) {
    if (cells < 1) cells = 1;
    const double h = (b - a) / cells;
    double acc = 0.0;
    for (int i = 0; i < cells; ++i) {
        const double x0 = a + i * h;
        const double x1 = (i + 1 == cells) ? b : a + (i + 1) * h;
        acc += (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
    }
    return acc;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const int n = static_cast<int>(x_.size());
    if (n < 4 || y_.size() != x_.size())
        throw InvariantViolation("cubic spline needs at least 4 knots");
    for (int i = 0; i + 1 < n; ++i)
        if (!(x_[i + 1] > x_[i]))
            throw InvariantViolation("cubic spline knots must be strictly increasing");

    // Solve for second derivatives with not-a-knot end conditions. M_0 and
    // M_{n-1} are eliminated symbolically, leaving a tridiagonal system for
    // M_1 .. M_{n-2}.
    std::vector<double> h(n - 1);
    for (int i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

    const int m = n - 2; // unknowns M_1 .. M_{n-2}
    std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0), rhs(m, 0.0);
    for (int i = 1; i <= n - 2; ++i) {
        const int r = i - 1;
        double a = h[i - 1] / 6.0;
        double b = (h[i - 1] + h[i]) / 3.0;
        double c = h[i] / 6.0;
        double d = (y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1];
        if (i == 1) {
            // M_0 = ((h0 + h1) M_1 - h0 M_2) / h1
            b += a * (h[0] + h[1]) / h[1];
            c -= a * h[0] / h[1];
            a = 0.0;
        }
        if (i == n - 2) {
            // M_{n-1} = ((h_{n-2} + h_{n-3}) M_{n-2} - h_{n-2} M_{n-3}) / h_{n-3}
            b += c * (h[n - 2] + h[n - 3]) / h[n - 3];
            a -= c * h[n - 2] / h[n - 3];
            c = 0.0;
        }
        lower[r] = a;
        diag[r] = b;
        upper[r] = c;
        rhs[r] = d;
    }
    // Thomas solve
    for (int r = 1; r < m; ++r) {
        const double w = lower[r] / diag[r - 1];
        diag[r] -= w * upper[r - 1];
        rhs[r] -= w * rhs[r - 1];
    }
    m_.assign(n, 0.0);
    m_[n - 2] = rhs[m - 1] / diag[m - 1];
    for (int r = m - 2; r >= 0; --r)
        m_[r + 1] = (rhs[r] - upper[r] * m_[r + 2]) / diag[r];
    m_[0] = ((h[0] + h[1]) * m_[1] - h[0] * m_[2]) / h[1];
    m_[n - 1] = ((h[n - 2] + h[n - 3]) * m_[n - 2] - h[n - 2] * m_[n - 3]) / h[n - 3];
}

int CubicSpline::locate(double& x) const {
    const double span = x_.back() - x_.front();
    const double eps = 1e-9 * std::max(1.0, std::abs(span));
    if (x < x_.front() - eps || x > x_.back() + eps)
        throw OutOfDomain("spline evaluation outside knot range");
    x = std::clamp(x, x_.front(), x_.back());
    int i = static_cast<int>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
    return std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
}

double CubicSpline::operator()(double x) const {
    const int i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double x) const {
    const int i = locate(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    return (y_[i + 1] - y_[i]) / h +
           ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
}

VecSpline::VecSpline(const std::vector<double>& x, const std::vector<Vec3>& p) {
    std::vector<double> cx(p.size()), cy(p.size()), cz(p.size());
    for (size_t i = 0; i < p.size(); ++i) {
        cx[i] = p[i].x();
        cy[i] = p[i].y();
        cz[i] = p[i].z();
    }
    sx_ = std::make_shared<CubicSpline>(x, std::move(cx));
    sy_ = std::make_shared<CubicSpline>(x, std::move(cy));
    sz_ = std::make_shared<CubicSpline>(x, std::move(cz));
}

Vec3 VecSpline::operator()(double x) const {
    return Vec3((*sx_)(x), (*sy_)(x), (*sz_)(x));
}

Vec3 VecSpline::derivative(double x) const {
    return Vec3(sx_->derivative(x), sy_->derivative(x), sz_->derivative(x));
}

IntegralTable::IntegralTable(std::function<double(double)> f, double s_max, int cells)
    : f_(std::move(f)), s_max_(s_max) {
    if (!(s_max > 0.0)) throw InvariantViolation("integral table needs s_max > 0");
    if (cells < 8) cells = 8;
    h_ = s_max / cells;
    table_.assign(cells + 1, 0.0);
    for (int i = 0; i < cells; ++i) {
        const double x0 = i * h_;
        const double x1 = (i + 1 == cells) ? s_max : (i + 1) * h_;
        table_[i + 1] = table_[i] +
                        (x1 - x0) / 6.0 * (f_(x0) + 4.0 * f_(0.5 * (x0 + x1)) + f_(x1));
    }
}

double IntegralTable::operator()(double s) const {
    const double eps = 1e-9 * std::max(1.0, s_max_);
    if (s < -eps || s > s_max_ + eps)
        throw OutOfDomain("integral evaluated outside [0, s_max]");
    s = std::clamp(s, 0.0, s_max_);
    int i = std::clamp(static_cast<int>(s / h_), 0, static_cast<int>(table_.size()) - 2);
    const double x0 = i * h_;
    if (s == x0) return table_[i];
    return table_[i] + (s - x0) / 6.0 * (f_(x0) + 4.0 * f_(0.5 * (x0 + s)) + f_(s));
}

} // namespace curvekit
