#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace logspring {

/// Samples (t_i, y_i) with t strictly increasing and positive.
class TimeSeries {
public:
    TimeSeries(std::vector<double> t, std::vector<double> y, std::string label = {});

    std::span<const double> t() const noexcept { return t_; }
    std::span<const double> y() const noexcept { return y_; }
    std::size_t size() const noexcept { return t_.size(); }
    const std::string& label() const noexcept { return label_; }

    TimeSeries scaled(double c) const;

private:
    std::vector<double> t_;
    std::vector<double> y_;
    std::string label_;
};

inline constexpr std::size_t kMinFitSamples = 8;
inline constexpr std::size_t kMinThetaGridPoints = 400;

/// Amplitude profile multiplying the oscillation. inverse_time is theta/(t + t_c),
/// the shape of a velocity series; inverse_square_time is (t_ref/(t + t_c))^2,
/// the shape of the stock-rate series beta_o(t) (P - P*) for the constructed
/// market coefficients.
enum class Envelope { constant, inverse_time, inverse_square_time };

std::string_view to_string(Envelope envelope);
/// Throws InputError for unknown names.
Envelope parse_envelope(std::string_view name);

struct ThetaRange {
    double lo;
    double hi;
};

struct FitOptions {
    Envelope envelope = Envelope::constant;
    bool fit_shift = false;
    /// Defaults to the first sample time.
    std::optional<double> t_ref;
    /// Uniform theta grid size; values below 400 are raised to 400.
    std::size_t grid_points = kMinThetaGridPoints;
    bool parallel = true;
};

/// y(t) = offset + env(t) [amp_sin sin(theta ln((t + t_shift)/t_ref))
///                         + amp_cos cos(theta ln((t + t_shift)/t_ref))]
struct LogPeriodicFit {
    double amp_sin = 0.0;
    double amp_cos = 0.0;
    double theta = 0.0;
    double t_ref = 0.0;
    double t_shift = 0.0;
    double offset = 0.0;
    Envelope envelope = Envelope::constant;
    double rms_residual = 0.0;
    double theta_grid_resolution = 0.0;

    double evaluate(double t) const;
};

/// Profiled least squares: (A, B, C) are solved exactly for each (theta, t_c)
/// by Householder QR; theta is scanned on a uniform grid, the first (smallest)
/// minimiser wins ties, and the winner is polished by golden-section search to
/// |dtheta| < 1e-9 theta. With fit_shift, t_c is searched on
/// [-0.5 t_min, 2 t_min] around that inner profile.
LogPeriodicFit fit(const TimeSeries& series, ThetaRange theta_range, const FitOptions& options = {});

/// Fraction of variance explained by the (A, B, C) subproblem at each theta,
/// i.e. 1 - RSS/TSS clamped to [0, 1]. Constant series give 0.
std::vector<double> log_time_periodogram(const TimeSeries& series,
                                         std::span<const double> theta_grid,
                                         Envelope envelope = Envelope::constant,
                                         std::optional<double> t_ref = std::nullopt,
                                         bool parallel = true);

} // namespace logspring
