#pragma once

#include <span>
#include <vector>

namespace logspring {

/// Spring whose mass grows linearly in time while its stiffness decays as 1/t:
///
///   m(t) = m0 * t / t0,   k(t) = k0 * t0 / t
///
/// so that omega(t) * t = sqrt(k0 / m0) * t0 is a constant angle theta. The
/// equation of motion reduces to t^2 x'' + t x' + theta^2 x = 0, solved by
///
///   x(t) = x0 sin(theta ln(t/t0)) + x1 cos(theta ln(t/t0)).
///
/// The closed forms are smooth on (0, inf) and are evaluated there, not only
/// for t >= t0.
class SpringConfig {
public:
    SpringConfig(double m0, double t0, double k0, double x0 = 1.0, double x1 = 0.0);

    double m0() const noexcept { return m0_; }
    double t0() const noexcept { return t0_; }
    double k0() const noexcept { return k0_; }
    double x0() const noexcept { return x0_; }
    double x1() const noexcept { return x1_; }
    double theta() const noexcept { return theta_; }
    double log_t0() const noexcept { return log_t0_; }

    SpringConfig with_amplitudes(double x0, double x1) const;

private:
    double m0_;
    double t0_;
    double k0_;
    double x0_;
    double x1_;
    double theta_;
    double log_t0_;
};

struct SpringState {
    double t = 0.0;
    double x = 0.0;
    double v = 0.0;
    double m = 0.0;
    double k = 0.0;
    double omega = 0.0;
    double energy = 0.0;
};

double theta(const SpringConfig& config) noexcept;

double mass_at(const SpringConfig& config, double t);
double stiffness_at(const SpringConfig& config, double t);
/// omega(t) = sqrt(k(t)/m(t)) = theta / t.
double angular_frequency_at(const SpringConfig& config, double t);

/// theta * ln(t/t0), computed as theta * (ln t - ln t0).
double phase_at(const SpringConfig& config, double t);

double position(const SpringConfig& config, double t);
double velocity(const SpringConfig& config, double t);
/// Closed-form x''(t), used to check the reduced equation of motion.
double acceleration(const SpringConfig& config, double t);

/// 1/2 k(t) x^2 + 1/2 m(t) v^2 on the closed-form trajectory.
double energy(const SpringConfig& config, double t);
/// Same functional evaluated at an arbitrary (x, v), e.g. a simulated state.
double energy(const SpringConfig& config, double t, double x, double v);

SpringState state_at(const SpringConfig& config, double t);

/// (x/x0)^2 + (v/(x0 omega_t))^2 - 1 on the closed form. Requires x1 == 0, x0 != 0.
double universal_residual(const SpringConfig& config, double t);
double universal_residual(const SpringConfig& config, double t, double x, double v);

/// ln(m_t/m0) rebuilt from (1/theta) * integral dx / sqrt(x0^2 - x^2) along the
/// trajectory on [t0, t]. The path is split at the turning points |x| = x0 and
/// each monotone piece contributes |asin(x_b/x0) - asin(x_a/x0)|, which is the
/// sin(a) = sin(2 pi n + a) branch bookkeeping. Requires x1 == 0, x0 != 0, t >= t0.
double reconstructed_log_mass(const SpringConfig& config, double t);

/// reconstructed_log_mass(t) - ln(t/t0).
double mass_consistency_residual(const SpringConfig& config, double t);

struct ExtremumTimes {
    /// t_n = t0 exp((n + 1/2) pi / theta): dx/dt = 0.
    std::vector<double> position;
    /// t_n = t0 exp((n pi - atan(1/theta)) / theta): dv/dt = 0.
    std::vector<double> velocity;
};

/// Indices n in [n_min, n_max]. Requires x1 == 0.
ExtremumTimes extremum_times(const SpringConfig& config, int n_min, int n_max);

/// n log-spaced (or linear) points on [t_start, t_end]; n == 1 yields {t_start}.
std::vector<double> log_grid(double t_start, double t_end, std::size_t n);
std::vector<double> linear_grid(double t_start, double t_end, std::size_t n);

// Trajectory sweeps. The serial version is the reference; the OpenMP version
// must produce bit-identical states.
void sample_states_serial(const SpringConfig& config, std::span<const double> times,
                          std::span<SpringState> out);
void sample_states(const SpringConfig& config, std::span<const double> times,
                   std::span<SpringState> out);
std::vector<SpringState> sample_states(const SpringConfig& config, std::span<const double> times);

} // namespace logspring
