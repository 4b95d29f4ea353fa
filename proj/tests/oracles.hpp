#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library code it is used to check.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Vec2 = std::array<double, 2>;
using Field = std::function<Vec2(double, const Vec2&)>;

// Classical RK4 with steps proportional to t (h = rel_step * t), landing
// exactly on t_end.
inline Vec2 rk4(const Field& f, Vec2 y, double t, double t_end, double rel_step = 1e-4)
{
    auto axpy = [](const Vec2& a, double s, const Vec2& b) {
        return Vec2{a[0] + s * b[0], a[1] + s * b[1]};
    };
    while (t < t_end) {
        double h = rel_step * t;
        if (t + h > t_end) {
            h = t_end - t;
        }
        const Vec2 k1 = f(t, y);
        const Vec2 k2 = f(t + h / 2, axpy(y, h / 2, k1));
        const Vec2 k3 = f(t + h / 2, axpy(y, h / 2, k2));
        const Vec2 k4 = f(t + h, axpy(y, h, k3));
        for (int i = 0; i < 2; ++i) {
            y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        }
        t += h;
    }
    return y;
}

// x(t) = x0 sin(theta ln(t/t0)) written out directly.
inline double spring_x(double theta, double t0, double x0, double t)
{
    return x0 * std::sin(theta * std::log(t / t0));
}

// ln(m_t/m0) rebuilt by quadrature of dx/sqrt(x0^2 - x^2) along each monotone
// piece of x(t) = x0 sin(theta ln(t/t0)) on [t0, t], divided by theta.
inline double quadrature_log_mass(double theta, double t0, double x0, double t)
{
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto piece = [&](double xa, double xb) {
        if (xa == xb) {
            return 0.0;
        }
        const double ua = xa / x0;
        const double ub = xb / x0;
        const double lo = std::min(ua, ub);
        const double hi = std::max(ua, ub);
        // Integral of du / sqrt((1 - u)(1 + u)). Near u = +-1 the quadrature
        // passes the exact distance to the endpoint, which keeps 1 -+ u from
        // rounding to a few bits.
        return integrator.integrate(
            [lo, hi](double u, double dist) {
                double minus = 1.0 - u;
                double plus = 1.0 + u;
                if (dist > 0.0 && hi == 1.0) {
                    minus = dist;
                } else if (dist < 0.0 && lo == -1.0) {
                    plus = -dist;
                }
                return 1.0 / std::sqrt(minus * plus);
            },
            lo, hi);
    };
    std::vector<double> breaks{t0};
    for (int n = 0;; ++n) {
        const double tn = t0 * std::exp((n + 0.5) * std::numbers::pi / theta);
        if (tn >= t) {
            break;
        }
        breaks.push_back(tn);
    }
    breaks.push_back(t);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double xa = spring_x(theta, t0, x0, breaks[i]);
        double xb = spring_x(theta, t0, x0, breaks[i + 1]);
        // turning points sit exactly on +-x0
        if (i > 0) {
            xa = (i % 2 == 1 ? 1.0 : -1.0) * x0;
        }
        if (i + 2 < breaks.size()) {
            xb = ((i + 1) % 2 == 1 ? 1.0 : -1.0) * x0;
        }
        total += piece(xa, xb);
    }
    return total / theta;
}

inline std::vector<double> geometric(double a, double b, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(n - 1));
    }
    out.back() = b;
    return out;
}

} // namespace oracle
