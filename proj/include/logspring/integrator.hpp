#pragma once

#include "logspring/oscillator.hpp"

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace logspring {

class EconConfig;

/// (position, velocity) for springs, (price, stock) for the market model.
using State = std::array<double, 2>;
using Rhs = std::function<State(double t, const State& y)>;

/// Coefficients of the Dormand-Prince continuous extension on one accepted step.
struct DenseSegment {
    double t_begin = 0.0;
    double h = 0.0;
    std::array<State, 5> coeff{};

    State eval(double t) const;
};

/// Integration result: samples on the requested output grid plus the piecewise
/// dense interpolant over every accepted step.
class OdeSolution {
public:
    OdeSolution() = default;
    /// Sample-only solution (no interpolant). Used for hand-built or perturbed series.
    OdeSolution(std::vector<double> times, std::vector<State> states, double tolerance = 0.0);
    OdeSolution(std::vector<double> times, std::vector<State> states,
                std::vector<DenseSegment> segments, std::size_t accepted, std::size_t rejected,
                double tolerance);

    std::span<const double> times() const noexcept { return times_; }
    std::span<const State> states() const noexcept { return states_; }
    std::size_t size() const noexcept { return times_.size(); }
    std::size_t accepted_steps() const noexcept { return accepted_; }
    std::size_t rejected_steps() const noexcept { return rejected_; }
    double tolerance() const noexcept { return tolerance_; }
    bool has_dense_output() const noexcept { return !segments_.empty(); }

    double t_begin() const;
    double t_end() const;

    /// Dense output at any t inside the integrated window.
    State at(double t) const;

    /// Sorted times where component crosses `level`, bracketed on the output
    /// grid and polished by bisection on the dense interpolant.
    std::vector<double> zero_crossings(std::size_t component, double level = 0.0) const;

    std::vector<double> component(std::size_t index) const;

private:
    std::vector<double> times_;
    std::vector<State> states_;
    std::vector<DenseSegment> segments_;
    std::size_t accepted_ = 0;
    std::size_t rejected_ = 0;
    double tolerance_ = 0.0;
};

/// Output grid request. Empty `times` selects the default: log-spaced with at
/// least `points_per_decade` samples per decade including both endpoints.
struct OutputGrid {
    std::vector<double> times;
    std::size_t points_per_decade = 64;
};

inline constexpr double kMinTolerance = 1e-13;
inline constexpr double kMaxTolerance = 1e-3;

/// Dormand-Prince 5(4) with PI step control. Local error per step below `tol`
/// in the mixed norm |err_i| / (tol (1 + max(|y_i|, |y_new_i|))). Steps are
/// capped at 0.1 t because every coefficient here varies on the scale of t.
OdeSolution integrate(const Rhs& rhs, const State& initial, double t_start, double t_end,
                      double tol, const OutputGrid& grid = {});

/// x' = v, v' = -v/t - (theta/t)^2 x.
OdeSolution integrate_spring_reduced(const SpringConfig& config, const State& initial,
                                     double t_start, double t_end, double tol,
                                     const OutputGrid& grid = {});

/// Mass, mass rate and stiffness as free functions of time on a window.
/// Construction checks positivity and that mass_rate is the derivative of
/// mass (central differences, 16 probes, relative error < 1e-6).
class MassStiffnessSchedule {
public:
    using Fn = std::function<double(double)>;

    MassStiffnessSchedule(Fn mass, Fn mass_rate, Fn stiffness, double t_lo, double t_hi);

    /// m = m0 t/t0, m' = m0/t0, k = k0 t0/t.
    static MassStiffnessSchedule linear_growth(const SpringConfig& config, double t_lo,
                                               double t_hi);
    static MassStiffnessSchedule constant(double mass, double stiffness, double t_lo,
                                          double t_hi);
    /// m = m0 (2 - t/t0), k = k0; positive only for t < 2 t0.
    static MassStiffnessSchedule linear_decrease(const SpringConfig& config, double t_lo,
                                                 double t_hi);

    double mass(double t) const { return mass_(t); }
    double mass_rate(double t) const { return mass_rate_(t); }
    double stiffness(double t) const { return stiffness_(t); }
    double t_lo() const noexcept { return t_lo_; }
    double t_hi() const noexcept { return t_hi_; }

private:
    Fn mass_;
    Fn mass_rate_;
    Fn stiffness_;
    double t_lo_;
    double t_hi_;
};

/// m(t) x'' + m'(t) x' = -k(t) x, the mass-variation term (dm/dx)(dx/dt)^2
/// being read through the chain rule as m'(t) v.
OdeSolution integrate_spring_general(const MassStiffnessSchedule& schedule, const State& initial,
                                     double t_start, double t_end, double tol,
                                     const OutputGrid& grid = {});

/// dS/dt = Q(P) - D(P), dP/dt = -gamma dS/dt + lambda (S_o(P) - S),
/// S_o(P) = ell0 + ell D(P). State is (P, S). The validity window of `econ` is
/// not enforced here: the equations stay well defined outside it.
OdeSolution integrate_econ(const EconConfig& econ, const State& initial, double t_start,
                           double t_end, double tol, const OutputGrid& grid = {});

} // namespace logspring
