#include "logspring/fitter_kernels.hpp"

#include "logspring/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace logspring::kernels {

namespace {

double envelope_at(const ModelFrame& frame, double shifted_t)
{
    switch (frame.envelope) {
    case Envelope::constant:
        return 1.0;
    case Envelope::inverse_time:
        return frame.theta / shifted_t;
    case Envelope::inverse_square_time: {
        const double r = frame.t_ref / shifted_t;
        return r * r;
    }
    }
    return 1.0;
}

double total_sum_of_squares(std::span<const double> y, double* sum_sq_out)
{
    double mean = 0.0;
    double sum_sq = 0.0;
    for (double v : y) {
        mean += v;
        sum_sq += v * v;
    }
    mean /= static_cast<double>(y.size());
    double tss = 0.0;
    for (double v : y) {
        tss += (v - mean) * (v - mean);
    }
    *sum_sq_out = sum_sq;
    return tss;
}

double power_from_rss(double rss, double tss, double sum_sq)
{
    if (!(tss > 1e-24 * sum_sq) || !std::isfinite(rss)) {
        return 0.0;
    }
    return std::clamp(1.0 - rss / tss, 0.0, 1.0);
}

} // namespace

void design_matrix(std::span<const double> t, const ModelFrame& frame, std::span<double> col_one,
                   std::span<double> col_sin, std::span<double> col_cos)
{
    const double log_ref = std::log(frame.t_ref);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double shifted = t[i] + frame.t_shift;
        const double phase = frame.theta * (std::log(shifted) - log_ref);
        const double env = envelope_at(frame, shifted);
        col_one[i] = 1.0;
        col_sin[i] = env * std::sin(phase);
        col_cos[i] = env * std::cos(phase);
    }
}

LinearFit solve_linear(std::span<const double> t, std::span<const double> y,
                       const ModelFrame& frame)
{
    const std::size_t n = t.size();
    std::array<std::vector<double>, 3> a;
    for (auto& col : a) {
        col.resize(n);
    }
    design_matrix(t, frame, a[0], a[1], a[2]);
    const std::array<std::vector<double>, 3> original = a;
    std::vector<double> qty(y.begin(), y.end());

    double max_norm = 0.0;
    for (const auto& col : a) {
        double s = 0.0;
        for (double v : col) {
            s += v * v;
        }
        max_norm = std::max(max_norm, std::sqrt(s));
    }

    LinearFit out;
    std::array<double, 3> r_diag{};
    for (std::size_t k = 0; k < 3; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            norm += a[k][i] * a[k][i];
        }
        norm = std::sqrt(norm);
        if (norm <= 1e-12 * max_norm || norm == 0.0) {
            out.full_rank = false;
            out.rss = std::numeric_limits<double>::infinity();
            return out;
        }
        const double alpha = a[k][k] > 0.0 ? -norm : norm;
        // v = x - alpha e_k, stored in place in column k.
        a[k][k] -= alpha;
        double vtv = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            vtv += a[k][i] * a[k][i];
        }
        auto reflect = [&](std::vector<double>& target) {
            double dot = 0.0;
            for (std::size_t i = k; i < n; ++i) {
                dot += a[k][i] * target[i];
            }
            const double f = 2.0 * dot / vtv;
            for (std::size_t i = k; i < n; ++i) {
                target[i] -= f * a[k][i];
            }
        };
        for (std::size_t j = k + 1; j < 3; ++j) {
            reflect(a[j]);
        }
        reflect(qty);
        r_diag[k] = alpha;
    }

    // R is upper triangular: diagonal in r_diag, above-diagonal entries in a[j][k], k < j.
    std::array<double, 3> beta{};
    for (std::size_t kk = 3; kk-- > 0;) {
        double s = qty[kk];
        for (std::size_t j = kk + 1; j < 3; ++j) {
            s -= a[j][kk] * beta[j];
        }
        beta[kk] = s / r_diag[kk];
    }

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (beta[0] * original[0][i] + beta[1] * original[1][i] +
                                 beta[2] * original[2][i]);
        rss += r * r;
    }
    out.offset = beta[0];
    out.amp_sin = beta[1];
    out.amp_cos = beta[2];
    out.rss = rss;
    out.full_rank = true;
    return out;
}

std::vector<double> scan_rss_serial(std::span<const double> t, std::span<const double> y,
                                    std::span<const double> theta_grid, const ModelFrame& base)
{
    std::vector<double> rss(theta_grid.size());
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        ModelFrame frame = base;
        frame.theta = theta_grid[i];
        rss[i] = solve_linear(t, y, frame).rss;
    }
    return rss;
}

std::vector<double> scan_rss_parallel(std::span<const double> t, std::span<const double> y,
                                      std::span<const double> theta_grid, const ModelFrame& base)
{
    std::vector<double> rss(theta_grid.size());
    const auto n = static_cast<long>(theta_grid.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        ModelFrame frame = base;
        frame.theta = theta_grid[static_cast<std::size_t>(i)];
        rss[static_cast<std::size_t>(i)] = solve_linear(t, y, frame).rss;
    }
    return rss;
}

std::size_t argmin_first(std::span<const double> rss)
{
    if (rss.empty()) {
        throw InputError("argmin_first: empty input");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < rss.size(); ++i) {
        if (!std::isfinite(rss[best]) && std::isfinite(rss[i])) {
            best = i;
        } else if (rss[i] < rss[best] - 1e-15 * rss[best]) {
            best = i;
        }
    }
    return best;
}

std::vector<double> periodogram_serial(std::span<const double> t, std::span<const double> y,
                                       std::span<const double> theta_grid,
                                       const ModelFrame& base)
{
    double sum_sq = 0.0;
    const double tss = total_sum_of_squares(y, &sum_sq);
    std::vector<double> rss = scan_rss_serial(t, y, theta_grid, base);
    for (double& v : rss) {
        v = power_from_rss(v, tss, sum_sq);
    }
    return rss;
}

std::vector<double> periodogram_parallel(std::span<const double> t, std::span<const double> y,
                                         std::span<const double> theta_grid,
                                         const ModelFrame& base)
{
    double sum_sq = 0.0;
    const double tss = total_sum_of_squares(y, &sum_sq);
    std::vector<double> rss = scan_rss_parallel(t, y, theta_grid, base);
    for (double& v : rss) {
        v = power_from_rss(v, tss, sum_sq);
    }
    return rss;
}

} // namespace logspring::kernels
