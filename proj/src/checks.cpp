#include "logspring/checks.hpp"

#include "logspring/econ.hpp"
#include "logspring/errors.hpp"
#include "logspring/integrator.hpp"
#include "logspring/oscillator.hpp"
#include "logspring/tsallis.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>

namespace logspring {

namespace {

constexpr std::uint64_t kSeed = 20090301;

std::string sci(const char* label, double value)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s = %.3e", label, value);
    return buf;
}

CheckResult result(const char* suite, const char* name, bool passed, std::string detail)
{
    return CheckResult{suite, name, passed, std::move(detail)};
}

double amplitude(const SpringConfig& c) { return std::hypot(c.x0(), c.x1()); }

// Closed form in binary128 so that a second difference with h = 1e-5 t is not
// swamped by double rounding (which alone gives ~1e-5 relative error).
__float128 position_quad(const SpringConfig& c, __float128 t)
{
    const __float128 theta = sqrtq(static_cast<__float128>(c.k0()) / c.m0()) * c.t0();
    const __float128 phase = theta * (logq(t) - logq(static_cast<__float128>(c.t0())));
    return c.x0() * sinq(phase) + c.x1() * cosq(phase);
}

double ode_residual_fd(const SpringConfig& c, double t)
{
    const __float128 tq = t;
    const __float128 h = tq * static_cast<__float128>(1e-5);
    const __float128 xp = position_quad(c, tq + h);
    const __float128 x0 = position_quad(c, tq);
    const __float128 xm = position_quad(c, tq - h);
    const __float128 d1 = (xp - xm) / (2 * h);
    const __float128 d2 = (xp - 2 * x0 + xm) / (h * h);
    const __float128 theta = sqrtq(static_cast<__float128>(c.k0()) / c.m0()) * c.t0();
    return static_cast<double>(tq * tq * d2 + tq * d1 + theta * theta * x0);
}

std::vector<CheckResult> spring_checks()
{
    const char* suite = "oscillator";
    std::vector<CheckResult> out;
    const SpringConfig pure(1.0, 1.0, 4.0, 1.0, 0.0);
    const SpringConfig mixed(2.0, 1.5, 9.0, 0.7, -0.4);

    {
        double worst = 0.0;
        for (const auto& c : {pure, mixed}) {
            const double target = c.k0() * c.m0();
            const double ulp = std::nextafter(target, INFINITY) - target;
            for (double t : log_grid(0.1 * c.t0(), 1000.0 * c.t0(), 1000)) {
                worst = std::max(worst,
                                 std::abs(stiffness_at(c, t) * mass_at(c, t) - target) / ulp);
            }
        }
        out.push_back(result(suite, "k*m = k0*m0 within 4 ulps", worst <= 4.0, sci("max ulps", worst)));
    }
    {
        double worst = 0.0;
        for (const auto& c : {pure, mixed}) {
            const double scale = c.theta() * c.theta() * amplitude(c);
            for (double t : log_grid(0.1 * c.t0(), 1000.0 * c.t0(), 1000)) {
                const double r = t * t * acceleration(c, t) + t * velocity(c, t) +
                                 c.theta() * c.theta() * position(c, t);
                worst = std::max(worst, std::abs(r) / scale);
            }
        }
        out.push_back(result(suite, "closed form solves reduced ODE (analytic derivatives)",
                             worst < 1e-12, sci("max scaled residual", worst)));
    }
    {
        double worst = 0.0;
        for (const auto& c : {pure, mixed}) {
            const double scale = c.theta() * c.theta() * amplitude(c);
            for (double t : log_grid(c.t0(), 100.0 * c.t0(), 200)) {
                worst = std::max(worst, std::abs(ode_residual_fd(c, t)) / scale);
            }
        }
        out.push_back(result(suite, "closed form solves reduced ODE (central differences)",
                             worst < 1e-9, sci("max scaled residual", worst)));
    }
    {
        double worst = 0.0;
        for (const auto& c : {pure, mixed}) {
            const double ref = energy(c, c.t0()) * c.t0();
            for (double t : log_grid(c.t0(), 1000.0 * c.t0(), 1000)) {
                worst = std::max(worst, std::abs(energy(c, t) * t / ref - 1.0));
            }
        }
        out.push_back(result(suite, "energy law E(t) t = E(t0) t0", worst < 1e-12,
                             sci("max relative deviation", worst)));
    }
    {
        double worst = 0.0;
        for (double t : log_grid(pure.t0(), 1e4 * pure.t0(), 1000)) {
            worst = std::max(worst, std::abs(universal_residual(pure, t)));
        }
        out.push_back(result(suite, "universal relation (x/x0)^2 + (v/(x0 w))^2 = 1",
                             worst < 1e-12, sci("max residual", worst)));
    }
    {
        double worst = 0.0;
        for (double c : {0.25, 3.0, 17.5}) {
            const SpringConfig scaled(mixed.m0(), c * mixed.t0(), mixed.k0() / (c * c), mixed.x0(),
                                      mixed.x1());
            for (double t : log_grid(0.5, 500.0, 200)) {
                worst = std::max(worst, std::abs(position(scaled, c * t) - position(mixed, t)) /
                                            amplitude(mixed));
            }
        }
        out.push_back(result(suite, "scale covariance x(c t; c t0) = x(t; t0)", worst < 1e-12,
                             sci("max relative deviation", worst)));
    }
    {
        double worst = 0.0;
        for (const auto& c : {pure, mixed}) {
            const double period = std::exp(2.0 * std::numbers::pi / c.theta());
            for (double t : log_grid(0.1, 1000.0, 500)) {
                worst = std::max(worst,
                                 std::abs(position(c, t * period) - position(c, t)) / amplitude(c));
            }
        }
        out.push_back(result(suite, "log-periodicity x(t exp(2 pi/theta)) = x(t)", worst < 1e-12,
                             sci("max relative deviation", worst)));
    }
    {
        double worst = 0.0;
        for (double th : {1.0, 2.0, 5.0}) {
            const SpringConfig c(1.0, 1.0, th * th, 1.0, 0.0);
            for (double t : log_grid(1.0, 10.0, 101)) {
                worst = std::max(worst, std::abs(mass_consistency_residual(c, t)));
            }
        }
        out.push_back(result(suite, "mass self-consistency ln(m/m0) = ln(t/t0)", worst < 1e-8,
                             sci("max residual", worst)));
    }
    {
        double worst = 0.0;
        bool ordered = true;
        for (double th : {0.7, 2.0, std::numbers::pi, 9.0}) {
            const SpringConfig c(1.0, 1.0, th * th, 1.0, 0.0);
            const ExtremumTimes ex = extremum_times(c, -2, 4);
            for (std::size_t i = 0; i < ex.position.size(); ++i) {
                const double tp = ex.position[i];
                const double tv = ex.velocity[i];
                worst = std::max(worst, std::abs(velocity(c, tp)) / (th / tp));
                worst = std::max(worst, std::abs(acceleration(c, tv)) / (th * th / (tv * tv)));
                if (i > 0) {
                    ordered = ordered && ex.position[i] > ex.position[i - 1] &&
                              ex.velocity[i] > ex.velocity[i - 1];
                }
            }
        }
        out.push_back(result(suite, "extremum times zero the derivative", ordered && worst < 1e-12,
                             sci("max scaled derivative", worst)));
    }
    {
        const SpringConfig c(1.0, 1.0, 4.0, 1.0, 0.0);
        const OdeSolution sol = integrate_spring_reduced(
            c, {position(c, 1.0), velocity(c, 1.0)}, 1.0, 100.0, 1e-10);
        double worst = 0.0;
        for (std::size_t i = 0; i < sol.size(); ++i) {
            worst = std::max(worst, std::abs(sol.states()[i][0] - position(c, sol.times()[i])));
        }
        out.push_back(result(suite, "adaptive integration matches closed form", worst < 1e-8,
                             sci("max deviation", worst)));
    }
    return out;
}

std::vector<CheckResult> market_checks()
{
    const char* suite = "econ";
    std::vector<CheckResult> out;
    std::mt19937_64 rng(kSeed);

    struct Case {
        double gamma, lambda, ell, theta;
    };
    const Case cases[] = {{1.0, 1.0, 1.0, 2.0}, {2.0, 1.0, 3.0, 0.5}, {0.5, 2.0, 0.7, 7.0}};

    {
        bool ok = true;
        double worst_root = 0.0;
        for (const Case& k : cases) {
            const EconConfig e = EconConfig::log_periodic(k.gamma, k.lambda, k.ell, k.theta);
            const ValidityWindow w = e.window();
            for (double t : log_grid(1e-3 * w.lo, 1e3 * w.hi, 400)) {
                const bool inside = t > w.lo && t < w.hi;
                const bool signs = e.d_o()(t) < 0.0 && e.q_o()(t) > 0.0;
                ok = ok && e.beta_o(t) > 0.0 && (inside == signs);
            }
            const double scale = k.gamma * e.beta_o(w.lo);
            worst_root = std::max(worst_root, std::abs(e.d_o()(w.lo)) / scale);
            worst_root = std::max(worst_root, std::abs(e.q_o()(w.hi)) / (k.gamma * e.beta_o(w.hi)));
        }
        out.push_back(result(suite, "sign window d_o < 0 < q_o exactly inside (t_lo, t_hi)",
                             ok && worst_root < 1e-14, sci("max scaled endpoint value", worst_root)));
    }
    {
        double worst_damp = 0.0;
        double worst_cond = 0.0;
        for (const Case& k : cases) {
            const EconConfig e = EconConfig::log_periodic(k.gamma, k.lambda, k.ell, k.theta);
            std::uniform_real_distribution<double> pick(e.window().lo, e.window().hi);
            const double lell = k.lambda * k.ell;
            for (int i = 0; i < 100; ++i) {
                const double t = pick(rng);
                const double b = e.beta_o(t);
                worst_damp = std::max(worst_damp, std::abs(e.damping(t) * t - 1.0));
                const double lhs1 = lell * e.d_o()(t);
                const double rhs1 = k.gamma * b - 1.0 / t;
                const double lhs2 = lell * e.q_o()(t);
                const double rhs2 = (k.gamma + lell) * b - 1.0 / t;
                worst_cond = std::max(worst_cond, std::abs(lhs1 - rhs1) / std::abs(rhs1));
                worst_cond = std::max(worst_cond, std::abs(lhs2 - rhs2) / std::abs(rhs2));
            }
        }
        out.push_back(result(suite, "damping identity gamma beta - lambda ell d_o = 1/t",
                             worst_damp < 1e-12, sci("max relative error", worst_damp)));
        out.push_back(result(suite, "log-periodicity conditions on d_o and q_o",
                             worst_cond < 1e-12, sci("max relative error", worst_cond)));
    }
    {
        const EconConfig e = EconConfig::log_periodic(1.0, 1.0, 1.0, 2.0, 3.0, 10.0, 5.0);
        const double tol = 1e-10;
        const double t0 = e.window().lo;
        const OdeSolution sol =
            integrate_econ(e, {e.p_star(), e.equilibrium_stock()}, t0, 10.0 * t0, tol);
        double drift = 0.0;
        for (const State& s : sol.states()) {
            drift = std::max({drift, std::abs(s[0] - e.p_star()),
                              std::abs(s[1] - e.equilibrium_stock())});
        }
        out.push_back(result(suite, "equilibrium (P*, S*) is a fixed point", drift < tol,
                             sci("max drift", drift)));
    }
    {
        double worst_var = 0.0;
        double worst_dev = 0.0;
        for (const Case& k : cases) {
            const EconConfig e = EconConfig::log_periodic(k.gamma, k.lambda, k.ell, k.theta);
            std::vector<double> thetas;
            for (double t : linear_grid(e.window().lo, e.window().hi, 50)) {
                thetas.push_back(to_mechanical(e, t).theta);
            }
            double mean = 0.0;
            for (double v : thetas) {
                mean += v;
            }
            mean /= static_cast<double>(thetas.size());
            double var = 0.0;
            for (double v : thetas) {
                var += (v - mean) * (v - mean);
                worst_dev = std::max(worst_dev, std::abs(v - k.theta));
            }
            worst_var = std::max(worst_var, var / static_cast<double>(thetas.size()));
        }
        out.push_back(result(suite, "dictionary theta is constant across t_ref",
                             worst_var < 1e-18 && worst_dev < 1e-10,
                             sci("max variance", worst_var) + ", " + sci("max |dtheta|", worst_dev)));
    }
    {
        double worst = 0.0;
        std::size_t ratios = 0;
        auto spacing = [&](const EconConfig& e, double theta, double t_start, double t_end) {
            const State init = econ_initial_state(e, t_start, 0.0, theta / t_start);
            const OdeSolution sol = integrate_econ(e, init, t_start, t_end, 1e-10);
            const auto zeros = sol.zero_crossings(0, e.p_star());
            const double expected = std::exp(std::numbers::pi / theta);
            for (std::size_t i = 1; i < zeros.size(); ++i) {
                worst = std::max(worst, std::abs(zeros[i] / zeros[i - 1] / expected - 1.0));
                ++ratios;
            }
        };
        spacing(EconConfig::log_periodic(1.0, 1.0, 1.0, 2.0, 0.0, 10.0, 5.0), 2.0, 1.0, 2000.0);
        const EconConfig dense = EconConfig::log_periodic(1.0, 1.0, 1.0, 20.0, 0.0, 10.0, 5.0);
        spacing(dense, 20.0, dense.window().lo, dense.window().hi);
        out.push_back(result(suite, "price zero crossings spaced by exp(pi/theta)",
                             ratios >= 5 && worst < 1e-3,
                             sci("max relative ratio error", worst) + " over " +
                                 std::to_string(ratios) + " ratios"));
    }
    {
        const EconConfig e = EconConfig::log_periodic(1.0, 1.0, 1.0, 2.0, 0.0, 10.0, 5.0);
        const double lo = e.window().lo;
        const double hi = e.window().hi;
        const State init = econ_initial_state(e, lo, 0.0, 2.0 / lo);
        OutputGrid grid;
        grid.times = linear_grid(lo, hi, 401);
        const OdeSolution sol = integrate_econ(e, init, lo, hi, 1e-12, grid);
        const PriceOdeReport rep = verify_price_ode(e, sol);
        out.push_back(result(suite, "second-order price equation residual", rep.scaled_max < 1e-4,
                             sci("scaled max residual", rep.scaled_max)));
    }
    return out;
}

std::vector<double> random_distribution(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> p(n);
    double total = 0.0;
    for (double& v : p) {
        v = u(rng);
        total += v;
    }
    for (double& v : p) {
        v /= total;
    }
    return p;
}

std::vector<CheckResult> entropy_checks()
{
    const char* suite = "tsallis";
    std::vector<CheckResult> out;
    std::mt19937_64 rng(kSeed);

    {
        double worst = 0.0;
        std::uniform_real_distribution<double> pick_c(0.2, 5.0);
        for (int trial = 0; trial < 20; ++trial) {
            const std::vector<double> p = random_distribution(rng, 6);
            std::vector<double> mu = p;
            std::vector<double> nu(p.size(), 1.0);
            const ThermoReport base = thermo(ProbabilityFactorization(mu, nu));
            const double c = pick_c(rng);
            for (std::size_t i = 0; i < p.size(); ++i) {
                mu[i] = p[i] * c;
                nu[i] = 1.0 / c;
            }
            const ThermoReport moved = thermo(ProbabilityFactorization(mu, nu));
            const double lnc = std::log(c);
            worst = std::max({worst, std::abs(moved.entropy_reduced - base.entropy_reduced),
                              std::abs(moved.helmholtz_reduced - (base.helmholtz_reduced + lnc)),
                              std::abs(moved.internal_reduced - (base.internal_reduced + lnc)),
                              std::abs(moved.helmholtz_reduced -
                                       (moved.internal_reduced - moved.entropy_reduced))});
        }
        out.push_back(result(suite, "factorization invariance and A = E - T S", worst < 1e-12,
                             sci("max deviation", worst)));
    }
    {
        const std::vector<double> p(8, 0.125);
        const double h = shannon_entropy(p);
        double worst = 0.0;
        for (double d : {1e-6, -1e-6}) {
            worst = std::max(worst, std::abs(tsallis_entropy(p, 1.0 + d) - h));
        }
        // First-order convergence: halving |q - 1| halves the error.
        const double e1 = tsallis_entropy(p, 1.0 + 1e-3) - h;
        const double e2 = tsallis_entropy(p, 1.0 + 5e-4) - h;
        const double e3 = tsallis_entropy(p, 1.0 + 2.5e-4) - h;
        const double r1 = e1 / e2;
        const double r2 = e2 / e3;
        const bool linear = std::abs(r1 - 2.0) < 0.01 && std::abs(r2 - 2.0) < 0.01;
        out.push_back(result(suite, "Shannon limit q -> 1", worst < 1e-5 && linear,
                             sci("error at |q-1| = 1e-6", worst) + ", " + sci("ratio", r2)));
    }
    {
        double worst = 0.0;
        for (double q : {0.5, 2.0, 3.0}) {
            for (int trial = 0; trial < 10; ++trial) {
                const auto p = random_distribution(rng, 3);
                const auto r = random_distribution(rng, 4);
                std::vector<double> joint;
                for (double a : p) {
                    for (double b : r) {
                        joint.push_back(a * b);
                    }
                }
                double total = 0.0;
                for (double v : joint) {
                    total += v;
                }
                for (double& v : joint) {
                    v /= total;
                }
                const double sp = tsallis_entropy(p, q);
                const double sr = tsallis_entropy(r, q);
                worst = std::max(worst, std::abs(tsallis_entropy(joint, q) -
                                                 (sp + sr + (1.0 - q) * sp * sr)));
            }
        }
        out.push_back(result(suite, "pseudo-additivity on product distributions", worst < 1e-10,
                             sci("max deviation", worst)));
    }
    {
        double worst = 0.0;
        for (double q : {2.0, 3.0, 5.0}) {
            for (int trial = 0; trial < 50; ++trial) {
                const auto p = random_distribution(rng, 7);
                worst = std::max(worst, std::abs(tsallis_entropy(p, q) -
                                                 (1.0 / (q - 1.0) - entropic_term(p, q))));
            }
        }
        const std::vector<double> uniform(4, 0.25);
        const double value = tsallis_entropy(uniform, 2.0);
        out.push_back(result(suite, "entropic-term identity and uniform W=4, q=2 value",
                             worst < 1e-12 && std::abs(value - 0.75) <= 1e-15,
                             sci("max deviation", worst) + ", " + sci("S_2(uniform 4)", value)));
    }
    {
        double worst = 0.0;
        const SpringConfig spring(1.3, 2.0, 0.9, 1.0, 0.0);
        // d* = 0 so that D - d* is formed without cancellation; near the lower
        // window edge d_o -> 0 and d* + d_o x would lose the low bits of d_o x.
        for (double theta : {0.5, 2.0, 6.0}) {
            const EconConfig e = EconConfig::log_periodic(1.5, 0.8, 1.2, theta, 1.0, 10.0, 0.0);
            for (double t : linear_grid(e.window().lo * 1.001, e.window().hi * 0.999, 25)) {
                for (double x : {-2.0, -0.3, 0.7, 1.0}) {
                    const double d = demand(e, e.p_star() + x, t);
                    const double lhs = demand_correspondence_lhs(e, spring, d, t);
                    const double k0t0x = spring.k0() * spring.t0() * x / t;
                    const double expected = -0.5 * k0t0x * k0t0x;
                    worst = std::max(worst, std::abs(lhs / expected - 1.0));
                }
            }
        }
        out.push_back(result(suite, "demand-squared correspondence reduces to -(k0 t0 x/t)^2/2",
                             worst < 1e-12, sci("max relative error", worst)));
    }
    return out;
}

} // namespace

std::vector<CheckResult> oscillator_checks() { return spring_checks(); }
std::vector<CheckResult> econ_checks() { return market_checks(); }
std::vector<CheckResult> tsallis_checks() { return entropy_checks(); }

std::vector<CheckResult> run_checks(std::string_view suite)
{
    if (suite == "oscillator") {
        return oscillator_checks();
    }
    if (suite == "econ") {
        return econ_checks();
    }
    if (suite == "tsallis") {
        return tsallis_checks();
    }
    if (suite == "all") {
        std::vector<CheckResult> all = oscillator_checks();
        for (auto& r : econ_checks()) {
            all.push_back(std::move(r));
        }
        for (auto& r : tsallis_checks()) {
            all.push_back(std::move(r));
        }
        return all;
    }
    throw InputError("unknown check suite '" + std::string(suite) +
                     "' (expected oscillator, econ, tsallis or all)");
}

} // namespace logspring
