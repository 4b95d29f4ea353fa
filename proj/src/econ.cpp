#include "logspring/econ.hpp"

#include "logspring/errors.hpp"

#include <cmath>
#include <string>

namespace logspring {

namespace {

void require_in_window(const EconConfig& econ, double t, const char* what)
{
    if (!econ.window().contains(t)) {
        throw WindowError(std::string(what) + ": t = " + std::to_string(t) +
                          " is outside the validity window [" + std::to_string(econ.window().lo) +
                          ", " + std::to_string(econ.window().hi) + "]");
    }
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

double CoefficientFunction::derivative(double t) const
{
    if (rate) {
        return rate(t);
    }
    const double h = 1e-6 * t;
    return (value(t + h) - value(t - h)) / (2.0 * h);
}

CoefficientFunction CoefficientFunction::constant(double c)
{
    return {[c](double) { return c; }, [](double) { return 0.0; }};
}

ConstructedCoefficients construct_coefficients(double gamma, double lambda, double ell,
                                               double theta)
{
    if (!finite_positive(gamma) || !finite_positive(lambda) || !finite_positive(ell) ||
        !finite_positive(theta)) {
        throw ConstructionError(
            "construct_coefficients: gamma, lambda, ell and theta must all be > 0 "
            "(lambda = 0 admits no log-periodic family)");
    }
    // beta_o = c / t^2 with c = (1 + theta^2) / lambda.
    const double c = (1.0 + theta * theta) / lambda;
    const double lell = lambda * ell;

    ConstructedCoefficients out;
    out.d_o.value = [=](double t) { return (gamma * c / (t * t) - 1.0 / t) / lell; };
    out.d_o.rate = [=](double t) { return (-2.0 * gamma * c / (t * t * t) + 1.0 / (t * t)) / lell; };
    out.q_o.value = [=](double t) {
        return (gamma * c / (t * t) - 1.0 / t) / lell + c / (t * t);
    };
    out.q_o.rate = [=](double t) {
        return (-2.0 * gamma * c / (t * t * t) + 1.0 / (t * t)) / lell - 2.0 * c / (t * t * t);
    };
    // d_o < 0 for t > gamma c, q_o > 0 for t < (gamma + lambda ell) c.
    out.window = ValidityWindow{gamma * c, (gamma + lell) * c};
    return out;
}

EconConfig::EconConfig(double gamma, double lambda, double ell, double ell0, double p_star,
                       double d_star, CoefficientFunction d_o, CoefficientFunction q_o,
                       ValidityWindow window, CoefficientFamily family)
    : gamma_(gamma), lambda_(lambda), ell_(ell), ell0_(ell0), p_star_(p_star), d_star_(d_star),
      d_o_(std::move(d_o)), q_o_(std::move(q_o)), window_(window), family_(family)
{
    if (!finite_positive(gamma) || !finite_positive(ell) || !(lambda >= 0.0) ||
        !std::isfinite(lambda)) {
        throw ConstructionError("EconConfig: requires gamma > 0, ell > 0, lambda >= 0");
    }
    if (!std::isfinite(ell0) || !std::isfinite(p_star) || !std::isfinite(d_star)) {
        throw ConstructionError("EconConfig: ell0, p_star and d_star must be finite");
    }
    if (!d_o_.value || !q_o_.value) {
        throw ConstructionError("EconConfig: d_o and q_o must be callable");
    }
    if (!(window.lo >= 0.0) || !(window.hi > window.lo)) {
        throw ConstructionError("EconConfig: validity window must satisfy 0 <= lo < hi");
    }
    if (window.bounded()) {
        const double lo = window.lo > 0.0 ? window.lo : 1e-3 * window.hi;
        for (int i = 0; i < 16; ++i) {
            const double t = lo + (window.hi - lo) * (i + 0.5) / 16.0;
            if (!(beta_o(t) > 0.0)) {
                throw ConstructionError("EconConfig: beta_o = q_o - d_o must be > 0 in the window");
            }
        }
    }
}

EconConfig EconConfig::log_periodic(double gamma, double lambda, double ell, double theta,
                                    double ell0, double p_star, double d_star)
{
    ConstructedCoefficients cc = construct_coefficients(gamma, lambda, ell, theta);
    return EconConfig(gamma, lambda, ell, ell0, p_star, d_star, std::move(cc.d_o),
                      std::move(cc.q_o), cc.window, LogPeriodicFamily{theta});
}

EconConfig EconConfig::constant_slopes(double gamma, double lambda, double ell, double ell0,
                                       double p_star, double d_star, double d_o, double q_o)
{
    return EconConfig(gamma, lambda, ell, ell0, p_star, d_star, CoefficientFunction::constant(d_o),
                      CoefficientFunction::constant(q_o), ValidityWindow{},
                      ConstantFamily{d_o, q_o});
}

double EconConfig::damping(double t) const
{
    return gamma_ * beta_o(t) - lambda_ * ell_ * d_o_(t);
}

double EconConfig::stiffness(double t) const
{
    return gamma_ * q_o_.derivative(t) - (gamma_ + lambda_ * ell_) * d_o_.derivative(t) +
           lambda_ * beta_o(t);
}

double demand(const EconConfig& econ, double price, double t)
{
    require_in_window(econ, t, "demand");
    return econ.d_star() + econ.d_o()(t) * (price - econ.p_star());
}

double supply(const EconConfig& econ, double price, double t)
{
    require_in_window(econ, t, "supply");
    return econ.q_star() + econ.q_o()(t) * (price - econ.p_star());
}

double stock_rate(const EconConfig& econ, double price, double t)
{
    return supply(econ, price, t) - demand(econ, price, t);
}

double optimal_stock(const EconConfig& econ, double price, double t)
{
    return econ.ell0() + econ.ell() * demand(econ, price, t);
}

EconState econ_state(const EconConfig& econ, double t, double price, double stock)
{
    EconState s;
    s.t = t;
    s.price = price;
    s.stock = stock;
    s.demand = demand(econ, price, t);
    s.supply = supply(econ, price, t);
    s.optimal_stock = econ.ell0() + econ.ell() * s.demand;
    return s;
}

State econ_rhs(const EconConfig& econ, double t, const State& y)
{
    const double x = y[0] - econ.p_star();
    const double d_o = econ.d_o()(t);
    const double beta = econ.q_o()(t) - d_o;
    const double ds = beta * x;
    const double target = econ.ell0() + econ.ell() * (econ.d_star() + d_o * x);
    const double dp = -econ.gamma() * ds + econ.lambda() * (target - y[1]);
    return {dp, ds};
}

State econ_initial_state(const EconConfig& econ, double t, double x, double xdot)
{
    if (!(t > 0.0)) {
        throw DomainError("econ_initial_state: t must be > 0");
    }
    const double price = econ.p_star() + x;
    if (econ.lambda() == 0.0) {
        // Stock does not feed back into price; any S is consistent.
        return {price, econ.equilibrium_stock()};
    }
    const double d_o = econ.d_o()(t);
    const double beta = econ.q_o()(t) - d_o;
    const double target = econ.ell0() + econ.ell() * (econ.d_star() + d_o * x);
    return {price, target - (xdot + econ.gamma() * beta * x) / econ.lambda()};
}

PriceOdeReport verify_price_ode(const EconConfig& econ, const OdeSolution& solution)
{
    const auto times = solution.times();
    const auto states = solution.states();
    if (times.size() < 5) {
        throw InsufficientDataError("verify_price_ode: need at least 5 samples");
    }
    PriceOdeReport report;
    double sum_sq = 0.0;
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
        const double h1 = times[i] - times[i - 1];
        const double h2 = times[i + 1] - times[i];
        const double pm = states[i - 1][0];
        const double p0 = states[i][0];
        const double pp = states[i + 1][0];
        const double dp = (-h2 / (h1 * (h1 + h2))) * pm + ((h2 - h1) / (h1 * h2)) * p0 +
                          (h1 / (h2 * (h1 + h2))) * pp;
        const double d2p =
            2.0 * (pm / (h1 * (h1 + h2)) - p0 / (h1 * h2) + pp / (h2 * (h1 + h2)));
        const double t = times[i];
        const double x = p0 - econ.p_star();
        const double k = econ.stiffness(t);
        const double r = d2p + econ.damping(t) * dp + k * x;
        report.max_residual = std::max(report.max_residual, std::abs(r));
        report.scale = std::max(report.scale, std::abs(k * x));
        sum_sq += r * r;
        ++report.samples;
    }
    report.rms_residual = std::sqrt(sum_sq / static_cast<double>(report.samples));
    if (report.scale > 0.0) {
        report.scaled_max = report.max_residual / report.scale;
        report.scaled_rms = report.rms_residual / report.scale;
    } else {
        report.scaled_max = report.max_residual;
        report.scaled_rms = report.rms_residual;
    }
    return report;
}

MechanicalMapping to_mechanical(const EconConfig& econ, double t_ref)
{
    if (!(t_ref > 0.0) || !std::isfinite(t_ref)) {
        throw DomainError("to_mechanical: t_ref must be > 0");
    }
    const double frequency = econ.stiffness(t_ref);
    if (!(frequency > 0.0)) {
        throw MappingError("to_mechanical: frequency coefficient " + std::to_string(frequency) +
                           " is not positive; not a log-periodic regime");
    }
    const double theta = std::sqrt(t_ref * t_ref * frequency);
    const double damping = econ.damping(t_ref);
    return MechanicalMapping{t_ref,
                             damping,
                             damping * t_ref,
                             frequency,
                             theta,
                             SpringConfig(1.0, t_ref, frequency, 1.0, 0.0)};
}

} // namespace logspring
