#include "logspring/integrator.hpp"

#include "logspring/econ.hpp"
#include "logspring/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace logspring {

namespace {

// Dormand-Prince 5(4) tableau and Hairer's continuous extension.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMaxGrowth = 5.0;   // 1/fac1 with fac1 = 0.2
constexpr double kMaxShrink = 0.1;   // 1/fac2 with fac2 = 10
constexpr double kStepCap = 0.1;     // h <= 0.1 t
constexpr double kUnderflow = 1e-14; // h < 1e-14 t is a failure
constexpr std::size_t kMaxSteps = 10'000'000;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms)
{
    State out = y;
    for (std::size_t i = 0; i < out.size(); ++i) {
        double acc = 0.0;
        for (const auto& [w, k] : terms) {
            acc += w * (*k)[i];
        }
        out[i] += h * acc;
    }
    return out;
}

bool finite(const State& y) { return std::isfinite(y[0]) && std::isfinite(y[1]); }

double weighted_norm(const State& e, const State& y0, const State& y1, double tol)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double sk = tol * (1.0 + std::max(std::abs(y0[i]), std::abs(y1[i])));
        sum += (e[i] / sk) * (e[i] / sk);
    }
    return std::sqrt(sum / static_cast<double>(e.size()));
}

double initial_step(const Rhs& rhs, double t, const State& y, const State& f0, double tol,
                    double h_max)
{
    double dnf = 0.0;
    double dny = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double sk = tol * (1.0 + std::abs(y[i]));
        dnf += (f0[i] / sk) * (f0[i] / sk);
        dny += (y[i] / sk) * (y[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 * t : std::sqrt(dny / dnf) * 0.01;
    h = std::min(h, h_max);
    const State y1 = axpy(y, h, {{1.0, &f0}});
    const State f1 = rhs(t + h, y1);
    double der2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double sk = tol * (1.0 + std::abs(y[i]));
        der2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    der2 = std::sqrt(der2 / static_cast<double>(y.size())) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf / static_cast<double>(y.size())));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6 * t, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, h_max});
}

std::vector<double> default_grid(double t_start, double t_end, std::size_t per_decade)
{
    const double decades = std::log10(t_end / t_start);
    const auto n = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(static_cast<double>(per_decade) * decades)) + 1);
    return log_grid(t_start, t_end, n);
}

void validate_window(double t_start, double t_end, double tol)
{
    if (!(t_start > 0.0) || !std::isfinite(t_start) || !std::isfinite(t_end) ||
        !(t_end > t_start)) {
        throw DomainError("integration window must satisfy 0 < t_start < t_end");
    }
    if (!(tol >= kMinTolerance && tol <= kMaxTolerance)) {
        throw DomainError("tolerance must lie in [1e-13, 1e-3], got " + std::to_string(tol));
    }
}

} // namespace

State DenseSegment::eval(double t) const
{
    const double s = (t - t_begin) / h;
    const double s1 = 1.0 - s;
    State out{};
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = coeff[0][i] +
                 s * (coeff[1][i] + s1 * (coeff[2][i] + s * (coeff[3][i] + s1 * coeff[4][i])));
    }
    return out;
}

OdeSolution::OdeSolution(std::vector<double> times, std::vector<State> states, double tolerance)
    : OdeSolution(std::move(times), std::move(states), {}, 0, 0, tolerance)
{
}

OdeSolution::OdeSolution(std::vector<double> times, std::vector<State> states,
                         std::vector<DenseSegment> segments, std::size_t accepted,
                         std::size_t rejected, double tolerance)
    : times_(std::move(times)), states_(std::move(states)), segments_(std::move(segments)),
      accepted_(accepted), rejected_(rejected), tolerance_(tolerance)
{
    if (times_.size() != states_.size()) {
        throw InputError("OdeSolution: times and states differ in length");
    }
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!(times_[i] > 0.0) || (i > 0 && !(times_[i] > times_[i - 1]))) {
            throw InputError("OdeSolution: times must be positive and strictly increasing");
        }
    }
}

double OdeSolution::t_begin() const
{
    if (times_.empty()) {
        throw InsufficientDataError("OdeSolution is empty");
    }
    return segments_.empty() ? times_.front() : segments_.front().t_begin;
}

double OdeSolution::t_end() const
{
    if (times_.empty()) {
        throw InsufficientDataError("OdeSolution is empty");
    }
    return segments_.empty() ? times_.back() : segments_.back().t_begin + segments_.back().h;
}

State OdeSolution::at(double t) const
{
    if (segments_.empty()) {
        throw PreconditionError("OdeSolution::at: no dense output available");
    }
    const double lo = t_begin();
    const double hi = t_end();
    const double slack = 1e-12 * hi;
    if (t < lo - slack || t > hi + slack) {
        throw DomainError("OdeSolution::at: time outside the integrated window");
    }
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double value, const DenseSegment& seg) {
                                   return value < seg.t_begin;
                               });
    if (it != segments_.begin()) {
        --it;
    }
    return it->eval(std::clamp(t, lo, hi));
}

std::vector<double> OdeSolution::component(std::size_t index) const
{
    std::vector<double> out;
    out.reserve(states_.size());
    for (const State& s : states_) {
        out.push_back(s.at(index));
    }
    return out;
}

std::vector<double> OdeSolution::zero_crossings(std::size_t component, double level) const
{
    auto sign_of = [&](std::size_t i) {
        const double d = states_[i].at(component) - level;
        return (d > 0.0) - (d < 0.0);
    };
    std::vector<double> out;
    const std::size_t n = states_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const int s0 = sign_of(i);
        const int s1 = sign_of(i + 1);
        if (s0 == 0) {
            if (i > 0 && sign_of(i - 1) * s1 < 0) {
                out.push_back(times_[i]);
            }
            continue;
        }
        if (s0 * s1 >= 0) {
            continue;
        }
        double a = times_[i];
        double b = times_[i + 1];
        if (segments_.empty()) {
            const double ya = states_[i][component] - level;
            const double yb = states_[i + 1][component] - level;
            out.push_back(a - ya * (b - a) / (yb - ya));
            continue;
        }
        for (int iter = 0; iter < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon() * b;
             ++iter) {
            const double mid = 0.5 * (a + b);
            const double ym = at(mid)[component] - level;
            const int sm = (ym > 0.0) - (ym < 0.0);
            if (sm == 0) {
                a = b = mid;
                break;
            }
            if (sm == s0) {
                a = mid;
            } else {
                b = mid;
            }
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

OdeSolution integrate(const Rhs& rhs, const State& initial, double t_start, double t_end,
                      double tol, const OutputGrid& grid)
{
    validate_window(t_start, t_end, tol);
    if (!finite(initial)) {
        throw DomainError("integrate: initial state must be finite");
    }
    std::vector<double> out_times =
        grid.times.empty() ? default_grid(t_start, t_end, grid.points_per_decade) : grid.times;
    const double slack = 1e-12 * t_end;
    for (std::size_t i = 0; i < out_times.size(); ++i) {
        if (out_times[i] < t_start - slack || out_times[i] > t_end + slack ||
            (i > 0 && !(out_times[i] > out_times[i - 1]))) {
            throw DomainError("integrate: output grid must be increasing and inside the window");
        }
    }

    std::vector<DenseSegment> segments;
    std::size_t accepted = 0;
    std::size_t rejected = 0;

    double t = t_start;
    State y = initial;
    State k1 = rhs(t, y);
    double h = initial_step(rhs, t, y, k1, tol, kStepCap * t);
    double fac_old = 1e-4;
    bool last_rejected = false;

    while (t < t_end) {
        if (accepted + rejected >= kMaxSteps) {
            throw IntegrationError("integrate: step budget exhausted at t = " + std::to_string(t));
        }
        h = std::min(h, kStepCap * t);
        if (t + h >= t_end || t_end - (t + h) < 1e-12 * t_end) {
            h = t_end - t;
        }
        if (h < kUnderflow * t) {
            throw IntegrationError("integrate: step size underflow at t = " + std::to_string(t));
        }

        const State k2 = rhs(t + c2 * h, axpy(y, h, {{a21, &k1}}));
        const State k3 = rhs(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const State k4 = rhs(t + c4 * h, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const State k5 =
            rhs(t + c5 * h, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const State k6 = rhs(t + h, axpy(y, h,
                                         {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4},
                                          {a65, &k5}}));
        const State y_new =
            axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        const double t_new = (h == t_end - t) ? t_end : t + h;
        const State k7 = rhs(t_new, y_new);

        double err = std::numeric_limits<double>::infinity();
        if (finite(y_new) && finite(k7)) {
            const State e = axpy(State{0.0, 0.0}, h,
                                 {{e1, &k1}, {e3, &k3}, {e4, &k4}, {e5, &k5}, {e6, &k6},
                                  {e7, &k7}});
            err = weighted_norm(e, y, y_new, tol);
        }

        const double fac11 = std::isfinite(err) ? std::pow(err, kExpo) : 1.0 / kMaxShrink;
        if (err <= 1.0) {
            double fac = fac11 / std::pow(fac_old, kBeta);
            fac = std::clamp(fac / kSafety, 1.0 / kMaxGrowth, 1.0 / kMaxShrink);
            double h_new = h / fac;
            fac_old = std::max(err, 1e-4);

            DenseSegment seg;
            seg.t_begin = t;
            seg.h = h;
            for (std::size_t i = 0; i < y.size(); ++i) {
                const double diff = y_new[i] - y[i];
                const double bspl = h * k1[i] - diff;
                seg.coeff[0][i] = y[i];
                seg.coeff[1][i] = diff;
                seg.coeff[2][i] = bspl;
                seg.coeff[3][i] = diff - h * k7[i] - bspl;
                seg.coeff[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                       d6 * k6[i] + d7 * k7[i]);
            }
            segments.push_back(seg);

            ++accepted;
            t = t_new;
            y = y_new;
            k1 = k7;
            if (last_rejected) {
                h_new = std::min(h_new, h);
            }
            last_rejected = false;
            h = h_new;
        } else {
            const double shrink = std::min(1.0 / kMaxShrink, fac11 / kSafety);
            h = h / shrink;
            last_rejected = true;
            ++rejected;
        }
    }

    std::vector<State> out_states;
    out_states.reserve(out_times.size());
    std::size_t seg = 0;
    for (double& ti : out_times) {
        ti = std::clamp(ti, t_start, t_end);
        while (seg + 1 < segments.size() && ti >= segments[seg + 1].t_begin) {
            ++seg;
        }
        if (ti == t_start) {
            out_states.push_back(initial);
        } else if (ti == t_end) {
            out_states.push_back(y);
        } else {
            out_states.push_back(segments[seg].eval(ti));
        }
    }
    return OdeSolution(std::move(out_times), std::move(out_states), std::move(segments), accepted,
                       rejected, tol);
}

OdeSolution integrate_spring_reduced(const SpringConfig& config, const State& initial,
                                     double t_start, double t_end, double tol,
                                     const OutputGrid& grid)
{
    const double theta_sq = config.theta() * config.theta();
    const Rhs rhs = [theta_sq](double t, const State& y) -> State {
        return {y[1], -y[1] / t - theta_sq * y[0] / (t * t)};
    };
    return integrate(rhs, initial, t_start, t_end, tol, grid);
}

MassStiffnessSchedule::MassStiffnessSchedule(Fn mass, Fn mass_rate, Fn stiffness, double t_lo,
                                             double t_hi)
    : mass_(std::move(mass)), mass_rate_(std::move(mass_rate)), stiffness_(std::move(stiffness)),
      t_lo_(t_lo), t_hi_(t_hi)
{
    if (!mass_ || !mass_rate_ || !stiffness_) {
        throw ConstructionError("MassStiffnessSchedule: all three functions are required");
    }
    if (!(t_lo > 0.0) || !(t_hi > t_lo) || !std::isfinite(t_hi)) {
        throw DomainError("MassStiffnessSchedule: window must satisfy 0 < t_lo < t_hi");
    }
    constexpr int probes = 16;
    for (int i = 0; i < probes; ++i) {
        const double t = t_lo + (t_hi - t_lo) * (i + 0.5) / probes;
        const double m = mass_(t);
        const double k = stiffness_(t);
        if (!(m > 0.0) || !(k > 0.0)) {
            throw ScheduleError("MassStiffnessSchedule: mass and stiffness must be positive at t = " +
                                std::to_string(t));
        }
        const double h = 1e-5 * t;
        const double fd = (mass_(t + h) - mass_(t - h)) / (2.0 * h);
        const double rate = mass_rate_(t);
        const double scale = std::max(std::abs(rate), m / t);
        if (std::abs(fd - rate) > 1e-6 * scale) {
            throw ScheduleError("MassStiffnessSchedule: mass_rate is not the derivative of mass at t = " +
                                std::to_string(t));
        }
    }
}

MassStiffnessSchedule MassStiffnessSchedule::linear_growth(const SpringConfig& config,
                                                           double t_lo, double t_hi)
{
    const double m0 = config.m0();
    const double t0 = config.t0();
    const double k0 = config.k0();
    return MassStiffnessSchedule([m0, t0](double t) { return m0 * (t / t0); },
                                 [m0, t0](double) { return m0 / t0; },
                                 [k0, t0](double t) { return k0 * (t0 / t); }, t_lo, t_hi);
}

MassStiffnessSchedule MassStiffnessSchedule::constant(double mass, double stiffness, double t_lo,
                                                      double t_hi)
{
    return MassStiffnessSchedule([mass](double) { return mass; }, [](double) { return 0.0; },
                                 [stiffness](double) { return stiffness; }, t_lo, t_hi);
}

MassStiffnessSchedule MassStiffnessSchedule::linear_decrease(const SpringConfig& config,
                                                             double t_lo, double t_hi)
{
    const double m0 = config.m0();
    const double t0 = config.t0();
    const double k0 = config.k0();
    return MassStiffnessSchedule([m0, t0](double t) { return m0 * (2.0 - t / t0); },
                                 [m0, t0](double) { return -m0 / t0; },
                                 [k0](double) { return k0; }, t_lo, t_hi);
}

OdeSolution integrate_spring_general(const MassStiffnessSchedule& schedule, const State& initial,
                                     double t_start, double t_end, double tol,
                                     const OutputGrid& grid)
{
    validate_window(t_start, t_end, tol);
    const double slack = 1e-12 * schedule.t_hi();
    if (t_start < schedule.t_lo() - slack || t_end > schedule.t_hi() + slack) {
        throw DomainError("integrate_spring_general: window exceeds the schedule's window");
    }
    const Rhs rhs = [&schedule](double t, const State& y) -> State {
        const double m = schedule.mass(t);
        if (!(m > 0.0)) {
            throw ScheduleError("integrate_spring_general: mass became nonpositive at t = " +
                                std::to_string(t));
        }
        return {y[1], -(schedule.mass_rate(t) * y[1] + schedule.stiffness(t) * y[0]) / m};
    };
    return integrate(rhs, initial, t_start, t_end, tol, grid);
}

OdeSolution integrate_econ(const EconConfig& econ, const State& initial, double t_start,
                           double t_end, double tol, const OutputGrid& grid)
{
    validate_window(t_start, t_end, tol);
    const Rhs rhs = [&econ](double t, const State& y) { return econ_rhs(econ, t, y); };
    return integrate(rhs, initial, t_start, t_end, tol, grid);
}

} // namespace logspring
