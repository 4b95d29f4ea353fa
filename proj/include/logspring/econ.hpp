#pragma once

#include "logspring/integrator.hpp"
#include "logspring/oscillator.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <variant>

namespace logspring {

/// Time-dependent slope d_o(t) or q_o(t), with an optional analytic derivative.
/// Without one, derivative() falls back to central differences with step 1e-6 t.
/// Both callables must be safe to invoke concurrently.
struct CoefficientFunction {
    std::function<double(double)> value;
    std::function<double(double)> rate;

    double operator()(double t) const { return value(t); }
    double derivative(double t) const;
    bool has_analytic_derivative() const noexcept { return static_cast<bool>(rate); }

    static CoefficientFunction constant(double c);
};

/// Closed interval on which the sign conditions d_o < 0 < q_o are declared to
/// hold. The default is (0, inf).
struct ValidityWindow {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double t) const noexcept { return t >= lo && t <= hi && t > 0.0; }
    bool bounded() const noexcept { return std::isfinite(hi); }
};

/// The unique family that realises all three mechanical correspondences at
/// once (damping 1/t, frequency theta^2/t^2):
///
///   beta_o(t) = (1 + theta^2) / (lambda t^2)
///   d_o(t)    = (gamma beta_o(t) - 1/t) / (lambda ell)
///   q_o(t)    = d_o(t) + beta_o(t)
struct LogPeriodicFamily {
    double theta;
};

struct ConstantFamily {
    double d_o;
    double q_o;
};

/// Coefficients supplied as arbitrary callables; not serialisable.
struct CustomFamily {};

using CoefficientFamily = std::variant<LogPeriodicFamily, ConstantFamily, CustomFamily>;

struct ConstructedCoefficients {
    CoefficientFunction d_o;
    CoefficientFunction q_o;
    ValidityWindow window;
};

ConstructedCoefficients construct_coefficients(double gamma, double lambda, double ell,
                                               double theta);

class EconConfig {
public:
    EconConfig(double gamma, double lambda, double ell, double ell0, double p_star,
               double d_star, CoefficientFunction d_o, CoefficientFunction q_o,
               ValidityWindow window = {}, CoefficientFamily family = CustomFamily{});

    /// Coefficients from construct_coefficients, window attached.
    static EconConfig log_periodic(double gamma, double lambda, double ell, double theta,
                                   double ell0 = 0.0, double p_star = 0.0, double d_star = 0.0);
    static EconConfig constant_slopes(double gamma, double lambda, double ell, double ell0,
                                      double p_star, double d_star, double d_o, double q_o);

    double gamma() const noexcept { return gamma_; }
    double lambda() const noexcept { return lambda_; }
    double ell() const noexcept { return ell_; }
    double ell0() const noexcept { return ell0_; }
    double p_star() const noexcept { return p_star_; }
    /// Equilibrium demand; equal to the equilibrium supply q*.
    double d_star() const noexcept { return d_star_; }
    double q_star() const noexcept { return d_star_; }
    /// S* = ell0 + ell d*.
    double equilibrium_stock() const noexcept { return ell0_ + ell_ * d_star_; }

    const ValidityWindow& window() const noexcept { return window_; }
    const CoefficientFamily& family() const noexcept { return family_; }
    const CoefficientFunction& d_o() const noexcept { return d_o_; }
    const CoefficientFunction& q_o() const noexcept { return q_o_; }

    double beta_o(double t) const { return q_o_(t) - d_o_(t); }

    /// gamma beta_o - lambda ell d_o; the analogue of 1/t.
    double damping(double t) const;
    /// gamma q_o' - (gamma + lambda ell) d_o' + lambda beta_o; the analogue of (theta/t)^2.
    double stiffness(double t) const;

private:
    double gamma_;
    double lambda_;
    double ell_;
    double ell0_;
    double p_star_;
    double d_star_;
    CoefficientFunction d_o_;
    CoefficientFunction q_o_;
    ValidityWindow window_;
    CoefficientFamily family_;
};

struct EconState {
    double t = 0.0;
    double price = 0.0;
    double stock = 0.0;
    double optimal_stock = 0.0;
    double demand = 0.0;
    double supply = 0.0;

    double excess_demand() const noexcept { return demand - supply; }
};

double demand(const EconConfig& econ, double price, double t);
double supply(const EconConfig& econ, double price, double t);
/// dS/dt = Q(P) - D(P).
double stock_rate(const EconConfig& econ, double price, double t);
double optimal_stock(const EconConfig& econ, double price, double t);
EconState econ_state(const EconConfig& econ, double t, double price, double stock);

/// Right-hand side of the (P, S) system, without window checks.
State econ_rhs(const EconConfig& econ, double t, const State& y);

/// (P, S) such that P - P* = x and dP/dt = xdot at time t.
State econ_initial_state(const EconConfig& econ, double t, double x, double xdot);

struct PriceOdeReport {
    std::size_t samples = 0;
    double max_residual = 0.0;
    double rms_residual = 0.0;
    /// max |stiffness(t) (P - P*)|, i.e. max |theta^2 (P - P*) / t^2| for the
    /// constructed family.
    double scale = 0.0;
    double scaled_max = 0.0;
    double scaled_rms = 0.0;
};

/// Residual of the second-order price equation
///   P'' + damping(t) P' + stiffness(t) (P - P*) = 0
/// with P', P'' from three-point central differences on the solution's own
/// sample grid (nonuniform spacing allowed).
PriceOdeReport verify_price_ode(const EconConfig& econ, const OdeSolution& solution);

/// Mechanics <-> economics dictionary at t_ref.
struct MechanicalMapping {
    double t_ref = 0.0;
    /// gamma beta_o - lambda ell d_o at t_ref, and the same times t_ref (1 when log-periodic).
    double damping = 0.0;
    double damping_times_t = 0.0;
    /// Frequency bracket at t_ref and theta = sqrt(t_ref^2 * bracket).
    double frequency = 0.0;
    double theta = 0.0;
    /// Equivalent spring: m0 = 1, t0 = t_ref, k0 = (theta / t_ref)^2.
    SpringConfig spring;
};

MechanicalMapping to_mechanical(const EconConfig& econ, double t_ref);

} // namespace logspring
