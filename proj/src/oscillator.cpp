#include "logspring/oscillator.hpp"

#include "logspring/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace logspring {

namespace {

void require_positive_time(double t, const char* what)
{
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError(std::string(what) + ": time must be finite and > 0, got " +
                          std::to_string(t));
    }
}

void require_pure_sine(const SpringConfig& config, const char* what)
{
    if (config.x1() != 0.0) {
        throw PreconditionError(std::string(what) + ": only defined for x1 == 0");
    }
    if (config.x0() == 0.0) {
        throw PreconditionError(std::string(what) + ": requires x0 != 0");
    }
}

} // namespace

SpringConfig::SpringConfig(double m0, double t0, double k0, double x0, double x1)
    : m0_(m0), t0_(t0), k0_(k0), x0_(x0), x1_(x1)
{
    if (!(m0 > 0.0) || !(t0 > 0.0) || !(k0 > 0.0) || !std::isfinite(m0) ||
        !std::isfinite(t0) || !std::isfinite(k0)) {
        throw DomainError("SpringConfig: m0, t0 and k0 must be finite and > 0");
    }
    if (!std::isfinite(x0) || !std::isfinite(x1)) {
        throw DomainError("SpringConfig: amplitudes must be finite");
    }
    theta_ = std::sqrt(k0 / m0) * t0;
    if (!(theta_ > 0.0) || !std::isfinite(theta_)) {
        throw DomainError("SpringConfig: derived theta is not finite and positive");
    }
    log_t0_ = std::log(t0);
}

SpringConfig SpringConfig::with_amplitudes(double x0, double x1) const
{
    return SpringConfig(m0_, t0_, k0_, x0, x1);
}

double theta(const SpringConfig& config) noexcept { return config.theta(); }

double mass_at(const SpringConfig& config, double t)
{
    require_positive_time(t, "mass_at");
    return config.m0() * (t / config.t0());
}

double stiffness_at(const SpringConfig& config, double t)
{
    require_positive_time(t, "stiffness_at");
    return config.k0() * (config.t0() / t);
}

double angular_frequency_at(const SpringConfig& config, double t)
{
    require_positive_time(t, "angular_frequency_at");
    return config.theta() / t;
}

double phase_at(const SpringConfig& config, double t)
{
    require_positive_time(t, "phase_at");
    return config.theta() * (std::log(t) - config.log_t0());
}

double position(const SpringConfig& config, double t)
{
    const double phi = phase_at(config, t);
    return config.x0() * std::sin(phi) + config.x1() * std::cos(phi);
}

double velocity(const SpringConfig& config, double t)
{
    const double phi = phase_at(config, t);
    return (config.theta() / t) * (config.x0() * std::cos(phi) - config.x1() * std::sin(phi));
}

double acceleration(const SpringConfig& config, double t)
{
    const double phi = phase_at(config, t);
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    const double th = config.theta();
    const double x = config.x0() * s + config.x1() * c;
    const double quad = config.x0() * c - config.x1() * s;
    return -(th / (t * t)) * quad - (th * th / (t * t)) * x;
}

double energy(const SpringConfig& config, double t, double x, double v)
{
    return 0.5 * stiffness_at(config, t) * x * x + 0.5 * mass_at(config, t) * v * v;
}

double energy(const SpringConfig& config, double t)
{
    return energy(config, t, position(config, t), velocity(config, t));
}

SpringState state_at(const SpringConfig& config, double t)
{
    SpringState s;
    s.t = t;
    s.x = position(config, t);
    s.v = velocity(config, t);
    s.m = mass_at(config, t);
    s.k = stiffness_at(config, t);
    s.omega = config.theta() / t;
    s.energy = 0.5 * s.k * s.x * s.x + 0.5 * s.m * s.v * s.v;
    return s;
}

double universal_residual(const SpringConfig& config, double t, double x, double v)
{
    require_pure_sine(config, "universal_residual");
    const double omega = angular_frequency_at(config, t);
    const double a = x / config.x0();
    const double b = v / (config.x0() * omega);
    return a * a + b * b - 1.0;
}

double universal_residual(const SpringConfig& config, double t)
{
    return universal_residual(config, t, position(config, t), velocity(config, t));
}

double reconstructed_log_mass(const SpringConfig& config, double t)
{
    require_pure_sine(config, "reconstructed_log_mass");
    require_positive_time(t, "reconstructed_log_mass");
    if (t < config.t0()) {
        throw PreconditionError("reconstructed_log_mass: requires t >= t0");
    }
    const double x0 = config.x0();
    auto unit_arcsine = [x0](double x) { return std::asin(std::clamp(x / x0, -1.0, 1.0)); };

    // Turning points sit at phase (n + 1/2) pi where asin(x/x0) = (-1)^n pi/2 exactly.
    const double phi = phase_at(config, t);
    double accumulated = 0.0;
    double previous = unit_arcsine(position(config, config.t0()));
    for (long n = 0; (static_cast<double>(n) + 0.5) * std::numbers::pi < phi; ++n) {
        const double turning = (n % 2 == 0) ? 0.5 * std::numbers::pi : -0.5 * std::numbers::pi;
        accumulated += std::abs(turning - previous);
        previous = turning;
    }
    accumulated += std::abs(unit_arcsine(position(config, t)) - previous);
    return accumulated / config.theta();
}

double mass_consistency_residual(const SpringConfig& config, double t)
{
    const double rebuilt = reconstructed_log_mass(config, t);
    return rebuilt - (std::log(t) - config.log_t0());
}

ExtremumTimes extremum_times(const SpringConfig& config, int n_min, int n_max)
{
    if (config.x1() != 0.0) {
        throw PreconditionError("extremum_times: only defined for x1 == 0");
    }
    if (n_min > n_max) {
        throw PreconditionError("extremum_times: n_min must not exceed n_max");
    }
    const double th = config.theta();
    const double lag = std::atan(1.0 / th);
    ExtremumTimes out;
    out.position.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    out.velocity.reserve(static_cast<std::size_t>(n_max - n_min + 1));
    for (int n = n_min; n <= n_max; ++n) {
        out.position.push_back(config.t0() * std::exp((n + 0.5) * std::numbers::pi / th));
        out.velocity.push_back(config.t0() * std::exp((n * std::numbers::pi - lag) / th));
    }
    return out;
}

std::vector<double> log_grid(double t_start, double t_end, std::size_t n)
{
    if (!(t_start > 0.0) || !(t_end >= t_start) || n == 0) {
        throw DomainError("log_grid: need 0 < t_start <= t_end and n >= 1");
    }
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = t_start;
        return out;
    }
    const double a = std::log(t_start);
    const double b = std::log(t_end);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(n - 1);
        out[i] = std::exp(a + (b - a) * u);
    }
    out.front() = t_start;
    out.back() = t_end;
    return out;
}

std::vector<double> linear_grid(double t_start, double t_end, std::size_t n)
{
    if (!(t_start > 0.0) || !(t_end >= t_start) || n == 0) {
        throw DomainError("linear_grid: need 0 < t_start <= t_end and n >= 1");
    }
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = t_start;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(n - 1);
        out[i] = t_start + (t_end - t_start) * u;
    }
    out.back() = t_end;
    return out;
}

void sample_states_serial(const SpringConfig& config, std::span<const double> times,
                          std::span<SpringState> out)
{
    if (out.size() != times.size()) {
        throw InputError("sample_states: output span size mismatch");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        out[i] = state_at(config, times[i]);
    }
}

void sample_states(const SpringConfig& config, std::span<const double> times,
                   std::span<SpringState> out)
{
    if (out.size() != times.size()) {
        throw InputError("sample_states: output span size mismatch");
    }
    for (double t : times) {
        require_positive_time(t, "sample_states");
    }
    const auto n = static_cast<long>(times.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = state_at(config, times[static_cast<std::size_t>(i)]);
    }
}

std::vector<SpringState> sample_states(const SpringConfig& config, std::span<const double> times)
{
    std::vector<SpringState> out(times.size());
    sample_states(config, times, out);
    return out;
}

} // namespace logspring
