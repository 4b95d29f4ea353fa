#include "logspring/fitter.hpp"

#include "logspring/errors.hpp"
#include "logspring/fitter_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace logspring {

namespace {

constexpr double kInvPhi = 0.6180339887498949;
constexpr double kThetaRelTol = 1e-9;
constexpr std::size_t kShiftGrid = 33;

struct ThetaProfile {
    kernels::LinearFit linear;
    double theta = 0.0;
};

template <class F>
std::pair<double, double> golden_section(F&& f, double a, double b, double rel_tol)
{
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > rel_tol * 0.5 * std::abs(a + b) && b - a > 0.0) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

std::vector<double> theta_grid(ThetaRange range, std::size_t points)
{
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = range.lo + (range.hi - range.lo) * static_cast<double>(i) /
                                 static_cast<double>(points - 1);
    }
    grid.back() = range.hi;
    return grid;
}

ThetaProfile profile_theta(const TimeSeries& series, std::span<const double> grid,
                           const kernels::ModelFrame& base, bool parallel)
{
    const auto rss = parallel ? kernels::scan_rss_parallel(series.t(), series.y(), grid, base)
                              : kernels::scan_rss_serial(series.t(), series.y(), grid, base);
    const std::size_t k = kernels::argmin_first(rss);
    if (!std::isfinite(rss[k])) {
        throw FitError("fit: design matrix is rank deficient on the whole theta grid");
    }
    kernels::ModelFrame frame = base;
    frame.theta = grid[k];
    ThetaProfile best{kernels::solve_linear(series.t(), series.y(), frame), grid[k]};

    const double lo = grid[k == 0 ? 0 : k - 1];
    const double hi = grid[std::min(k + 1, grid.size() - 1)];
    auto objective = [&](double theta) {
        kernels::ModelFrame f = base;
        f.theta = theta;
        const double r = kernels::solve_linear(series.t(), series.y(), f).rss;
        return std::isfinite(r) ? r : std::numeric_limits<double>::max();
    };
    const auto [theta_ref, rss_ref] = golden_section(objective, lo, hi, kThetaRelTol);
    // Keep the grid point unless refinement strictly improves: a flat objective
    // (e.g. a zero signal) must stay on the smallest grid theta.
    if (rss_ref < best.linear.rss - 1e-15 * best.linear.rss) {
        frame.theta = theta_ref;
        best = ThetaProfile{kernels::solve_linear(series.t(), series.y(), frame), theta_ref};
    }
    return best;
}

} // namespace

TimeSeries::TimeSeries(std::vector<double> t, std::vector<double> y, std::string label)
    : t_(std::move(t)), y_(std::move(y)), label_(std::move(label))
{
    if (t_.size() != y_.size()) {
        throw InputError("TimeSeries: t and y differ in length");
    }
    for (std::size_t i = 0; i < t_.size(); ++i) {
        if (!std::isfinite(t_[i]) || !(t_[i] > 0.0)) {
            throw DomainError("TimeSeries: times must be finite and > 0");
        }
        if (i > 0 && !(t_[i] > t_[i - 1])) {
            throw InputError("TimeSeries: times must be strictly increasing");
        }
        if (!std::isfinite(y_[i])) {
            throw InputError("TimeSeries: samples must be finite");
        }
    }
}

TimeSeries TimeSeries::scaled(double c) const
{
    std::vector<double> y = y_;
    for (double& v : y) {
        v *= c;
    }
    return TimeSeries(t_, std::move(y), label_);
}

std::string_view to_string(Envelope envelope)
{
    switch (envelope) {
    case Envelope::constant:
        return "constant";
    case Envelope::inverse_time:
        return "inverse_time";
    case Envelope::inverse_square_time:
        return "inverse_square_time";
    }
    return "constant";
}

Envelope parse_envelope(std::string_view name)
{
    if (name == "constant") {
        return Envelope::constant;
    }
    if (name == "inverse_time") {
        return Envelope::inverse_time;
    }
    if (name == "inverse_square_time") {
        return Envelope::inverse_square_time;
    }
    throw InputError("unknown envelope '" + std::string(name) +
                     "' (expected constant, inverse_time or inverse_square_time)");
}

double LogPeriodicFit::evaluate(double t) const
{
    const double shifted = t + t_shift;
    const double phase = theta * (std::log(shifted) - std::log(t_ref));
    double env = 1.0;
    if (envelope == Envelope::inverse_time) {
        env = theta / shifted;
    } else if (envelope == Envelope::inverse_square_time) {
        env = (t_ref / shifted) * (t_ref / shifted);
    }
    return offset + env * (amp_sin * std::sin(phase) + amp_cos * std::cos(phase));
}

LogPeriodicFit fit(const TimeSeries& series, ThetaRange theta_range, const FitOptions& options)
{
    if (!(theta_range.lo > 0.0) || !std::isfinite(theta_range.hi)) {
        throw DomainError("fit: theta range must be positive (lo > 0)");
    }
    if (!(theta_range.hi > theta_range.lo)) {
        throw DomainError("fit: theta range must satisfy lo < hi");
    }
    if (series.size() < kMinFitSamples) {
        throw InsufficientDataError("fit: need at least 8 samples, got " +
                                    std::to_string(series.size()));
    }
    const double t_min = series.t().front();
    const double t_ref = options.t_ref.value_or(t_min);
    if (!(t_ref > 0.0)) {
        throw DomainError("fit: t_ref must be > 0");
    }
    const std::size_t points = std::max(options.grid_points, kMinThetaGridPoints);
    const std::vector<double> grid = theta_grid(theta_range, points);

    kernels::ModelFrame base;
    base.t_ref = t_ref;
    base.envelope = options.envelope;
    base.t_shift = 0.0;

    ThetaProfile best = profile_theta(series, grid, base, options.parallel);
    double best_shift = 0.0;

    if (options.fit_shift) {
        const double lo = -0.5 * t_min;
        const double hi = 2.0 * t_min;
        auto profile_at = [&](double shift) {
            kernels::ModelFrame f = base;
            f.t_shift = shift;
            return profile_theta(series, grid, f, options.parallel);
        };
        std::vector<double> shifts(kShiftGrid);
        std::vector<double> values(kShiftGrid);
        for (std::size_t i = 0; i < kShiftGrid; ++i) {
            shifts[i] = lo + (hi - lo) * static_cast<double>(i) / (kShiftGrid - 1);
            if (t_min + shifts[i] <= 0.0) {
                values[i] = std::numeric_limits<double>::infinity();
                continue;
            }
            values[i] = profile_at(shifts[i]).linear.rss;
        }
        const std::size_t k = kernels::argmin_first(values);
        const double a = shifts[k == 0 ? 0 : k - 1];
        const double b = shifts[std::min(k + 1, kShiftGrid - 1)];
        ThetaProfile shifted = profile_at(shifts[k]);
        double shift = shifts[k];
        // Absolute tolerance in t_c: the golden helper is relative, so work in
        // the offset variable u = t_c + 2 t_min which stays in [1.5 t_min, 4 t_min].
        auto objective = [&](double u) { return profile_at(u - 2.0 * t_min).linear.rss; };
        const auto [u_ref, rss_ref] =
            golden_section(objective, a + 2.0 * t_min, b + 2.0 * t_min, kThetaRelTol);
        if (rss_ref < shifted.linear.rss - 1e-15 * shifted.linear.rss) {
            shift = u_ref - 2.0 * t_min;
            shifted = profile_at(shift);
        }
        if (shifted.linear.rss < best.linear.rss - 1e-15 * best.linear.rss) {
            best = shifted;
            best_shift = shift;
        }
    }

    LogPeriodicFit out;
    out.amp_sin = best.linear.amp_sin;
    out.amp_cos = best.linear.amp_cos;
    out.offset = best.linear.offset;
    out.theta = best.theta;
    out.t_ref = t_ref;
    out.t_shift = best_shift;
    out.envelope = options.envelope;
    out.rms_residual = std::sqrt(best.linear.rss / static_cast<double>(series.size()));
    out.theta_grid_resolution = (theta_range.hi - theta_range.lo) / static_cast<double>(points - 1);
    return out;
}

std::vector<double> log_time_periodogram(const TimeSeries& series,
                                         std::span<const double> theta_grid, Envelope envelope,
                                         std::optional<double> t_ref, bool parallel)
{
    if (series.size() < kMinFitSamples) {
        throw InsufficientDataError("log_time_periodogram: need at least 8 samples");
    }
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        if (!(theta_grid[i] > 0.0) || (i > 0 && !(theta_grid[i] > theta_grid[i - 1]))) {
            throw DomainError("log_time_periodogram: theta grid must be positive and increasing");
        }
    }
    kernels::ModelFrame base;
    base.t_ref = t_ref.value_or(series.t().front());
    base.envelope = envelope;
    return parallel ? kernels::periodogram_parallel(series.t(), series.y(), theta_grid, base)
                    : kernels::periodogram_serial(series.t(), series.y(), theta_grid, base);
}

} // namespace logspring
