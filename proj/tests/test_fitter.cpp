#include "logspring/errors.hpp"
#include "logspring/fitter.hpp"
#include "logspring/fitter_kernels.hpp"
#include "logspring/oscillator.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace logspring;

namespace {

TimeSeries synth(double theta, double a, double b, double c, double t_lo, double t_hi,
                 std::size_t n, double noise = 0.0, unsigned seed = 1)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> t = log_grid(t_lo, t_hi, n);
    std::vector<double> y;
    for (double ti : t) {
        const double ph = theta * std::log(ti / t_lo);
        y.push_back(c + a * std::sin(ph) + b * std::cos(ph) + noise * gauss(rng));
    }
    return TimeSeries(std::move(t), std::move(y));
}

// Same profiled problem solved with Eigen's rank-revealing QR.
kernels::LinearFit eigen_fit(std::span<const double> t, std::span<const double> y, double theta,
                             double t_ref)
{
    Eigen::MatrixXd a(t.size(), 3);
    Eigen::VectorXd rhs(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double ph = theta * std::log(t[i] / t_ref);
        a(i, 0) = 1.0;
        a(i, 1) = std::sin(ph);
        a(i, 2) = std::cos(ph);
        rhs(i) = y[i];
    }
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    const Eigen::VectorXd x = qr.solve(rhs);
    kernels::LinearFit out;
    out.offset = x(0);
    out.amp_sin = x(1);
    out.amp_cos = x(2);
    out.rss = (a * x - rhs).squaredNorm();
    out.full_rank = qr.rank() == 3;
    return out;
}

} // namespace

TEST_CASE("time series validation")
{
    CHECK_THROWS_AS(TimeSeries({1.0, 2.0}, {1.0}), InputError);
    CHECK_THROWS_AS(TimeSeries({1.0, 1.0}, {1.0, 2.0}), InputError);
    CHECK_THROWS_AS(TimeSeries({0.0, 1.0}, {1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(TimeSeries({1.0, 2.0}, {1.0, std::nan("")}), InputError);
    const TimeSeries s({1.0, 2.0}, {3.0, 4.0});
    CHECK(s.scaled(10.0).t()[1] == 2.0);
    CHECK(s.scaled(10.0).y()[1] == 40.0);
}

TEST_CASE("linear solve agrees with Eigen")
{
    const TimeSeries s = synth(2.3, 0.7, -0.4, 1.2, 1.0, 200.0, 120, 0.05, 7);
    for (double theta : {0.6, 2.3, 4.1, 9.0}) {
        const kernels::LinearFit mine = kernels::solve_linear(s.t(), s.y(), {theta, 0.0, 1.0});
        const kernels::LinearFit ref = eigen_fit(s.t(), s.y(), theta, 1.0);
        REQUIRE(mine.full_rank);
        CHECK(mine.offset == doctest::Approx(ref.offset).epsilon(1e-10));
        CHECK(mine.amp_sin == doctest::Approx(ref.amp_sin).epsilon(1e-10));
        CHECK(mine.amp_cos == doctest::Approx(ref.amp_cos).epsilon(1e-10));
        CHECK(mine.rss == doctest::Approx(ref.rss).epsilon(1e-9));
    }
}

TEST_CASE("rank deficiency is detected")
{
    // theta so small that sin is ~0 and cos ~1 over the data: columns collapse
    const std::vector<double> t = linear_grid(1.0, 1.0 + 1e-9, 10);
    const std::vector<double> y(10, 1.0);
    const kernels::LinearFit f = kernels::solve_linear(t, y, {1e-3, 0.0, 1.0});
    CHECK_FALSE(f.full_rank);
    CHECK(std::isinf(f.rss));
}

TEST_CASE("serial and parallel kernels are bit identical")
{
    const TimeSeries s = synth(3.3, 1.0, 0.5, 0.0, 1.0, 1000.0, 700, 0.2, 3);
    const std::vector<double> grid = linear_grid(0.5, 10.0, 997);
    for (Envelope env : {Envelope::constant, Envelope::inverse_time, Envelope::inverse_square_time}) {
        const kernels::ModelFrame frame{1.0, 0.3, 1.0, env};
        CHECK(kernels::scan_rss_serial(s.t(), s.y(), grid, frame) ==
              kernels::scan_rss_parallel(s.t(), s.y(), grid, frame));
        CHECK(kernels::periodogram_serial(s.t(), s.y(), grid, frame) ==
              kernels::periodogram_parallel(s.t(), s.y(), grid, frame));
    }
    FitOptions serial;
    serial.parallel = false;
    const LogPeriodicFit a = fit(s, {0.5, 10.0}, serial);
    const LogPeriodicFit b = fit(s, {0.5, 10.0});
    CHECK(a.theta == b.theta);
    CHECK(a.amp_sin == b.amp_sin);
    CHECK(a.rms_residual == b.rms_residual);
}

TEST_CASE("ties resolve to the first minimiser")
{
    const std::vector<double> rss{3.0, 1.0, 1.0 + 1e-17, 1.0, 2.0};
    CHECK(kernels::argmin_first(rss) == 1);
    const std::vector<double> inf{INFINITY, INFINITY, 5.0};
    CHECK(kernels::argmin_first(inf) == 2);
}

TEST_CASE("noiseless recovery")
{
    const TimeSeries s = synth(2.0, 1.0, 0.0, 0.0, 1.0, 100.0, 200);
    const LogPeriodicFit f = fit(s, {0.5, 10.0});
    CHECK(f.theta == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(f.amp_sin == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(f.amp_cos) < 1e-9);
    CHECK(f.rms_residual < 1e-12);
    CHECK(f.theta_grid_resolution == doctest::Approx(9.5 / 399.0));
    CHECK(f.evaluate(37.0) == doctest::Approx(std::sin(2.0 * std::log(37.0))).epsilon(1e-9));
}

TEST_CASE("recovery with noise")
{
    const TimeSeries s = synth(4.5, 0.8, 0.6, 3.0, 1.0, 500.0, 400, 0.05, 11);
    const LogPeriodicFit f = fit(s, {0.5, 10.0});
    CHECK(f.theta == doctest::Approx(4.5).epsilon(1e-2));
    CHECK(f.offset == doctest::Approx(3.0).epsilon(1e-2));
    CHECK(f.rms_residual == doctest::Approx(0.05).epsilon(0.2));
}

TEST_CASE("envelopes")
{
    std::vector<double> t = log_grid(2.0, 300.0, 300);
    std::vector<double> y1;
    std::vector<double> y2;
    for (double ti : t) {
        const double ph = 3.0 * std::log(ti / 2.0);
        y1.push_back(3.0 / ti * (0.5 * std::sin(ph) - 0.2 * std::cos(ph)));
        y2.push_back(std::pow(2.0 / ti, 2) * (0.9 * std::sin(ph) + 0.1 * std::cos(ph)));
    }
    FitOptions o;
    o.envelope = Envelope::inverse_time;
    const LogPeriodicFit f1 = fit(TimeSeries(t, y1), {0.5, 10.0}, o);
    CHECK(f1.theta == doctest::Approx(3.0).epsilon(1e-8));
    // theta/t envelope absorbs the 3/t prefactor
    CHECK(f1.amp_sin == doctest::Approx(0.5).epsilon(1e-7));
    o.envelope = Envelope::inverse_square_time;
    const LogPeriodicFit f2 = fit(TimeSeries(t, y2), {0.5, 10.0}, o);
    CHECK(f2.theta == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(f2.amp_cos == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(parse_envelope("inverse_time") == Envelope::inverse_time);
    CHECK(to_string(Envelope::inverse_square_time) == "inverse_square_time");
    CHECK_THROWS_AS(parse_envelope("gaussian"), InputError);
}

TEST_CASE("time shift")
{
    std::vector<double> t = log_grid(1.0, 400.0, 400);
    std::vector<double> y;
    for (double ti : t) {
        y.push_back(std::sin(2.5 * std::log((ti + 0.6) / 1.0)));
    }
    FitOptions o;
    o.fit_shift = true;
    const LogPeriodicFit f = fit(TimeSeries(t, y), {0.5, 10.0}, o);
    CHECK(f.t_shift == doctest::Approx(0.6).epsilon(1e-5));
    CHECK(f.theta == doctest::Approx(2.5).epsilon(1e-6));
}

TEST_CASE("rescaling time or amplitude leaves theta unchanged")
{
    const TimeSeries s = synth(3.7, 0.9, 0.3, 0.1, 1.0, 300.0, 250);
    const LogPeriodicFit base = fit(s, {0.5, 10.0});
    for (double c : {1e-3, 0.37, 12.0, 5e4}) {
        std::vector<double> t(s.t().begin(), s.t().end());
        for (double& v : t) {
            v *= c;
        }
        const TimeSeries stretched(t, std::vector<double>(s.y().begin(), s.y().end()));
        CHECK(fit(stretched, {0.5, 10.0}).theta == doctest::Approx(base.theta).epsilon(1e-10));
        const LogPeriodicFit louder = fit(s.scaled(c), {0.5, 10.0});
        CHECK(louder.theta == doctest::Approx(base.theta).epsilon(1e-10));
        CHECK(louder.amp_sin == doctest::Approx(c * base.amp_sin).epsilon(1e-9));
    }
}

TEST_CASE("periodogram of white noise stays small")
{
    std::mt19937_64 rng(20090301);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::vector<double> t = log_grid(1.0, 1000.0, 256);
    const std::vector<double> grid = linear_grid(0.5, 10.0, 400);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> y;
        for (std::size_t i = 0; i < t.size(); ++i) {
            y.push_back(gauss(rng));
        }
        for (double p : log_time_periodogram(TimeSeries(t, y), grid)) {
            worst = std::max(worst, p);
        }
    }
    CHECK(worst < 0.2);
    const TimeSeries s = synth(6.0, 1.0, 0.0, 0.0, 1.0, 1000.0, 256);
    const auto p = log_time_periodogram(s, grid);
    const auto best = std::max_element(p.begin(), p.end()) - p.begin();
    CHECK(grid[static_cast<std::size_t>(best)] == doctest::Approx(6.0).epsilon(0.01));
    CHECK(p[static_cast<std::size_t>(best)] > 0.99);
}

TEST_CASE("fit preconditions")
{
    const TimeSeries s = synth(2.0, 1.0, 0.0, 0.0, 1.0, 100.0, 50);
    CHECK_THROWS_AS(fit(s, {0.0, 3.0}), DomainError);
    CHECK_THROWS_AS(fit(s, {3.0, 2.0}), DomainError);
    const TimeSeries tiny({1.0, 2.0, 3.0}, {0.0, 1.0, 0.0});
    CHECK_THROWS_AS(fit(tiny, {0.5, 3.0}), InsufficientDataError);
    const TimeSeries flat(linear_grid(1.0, 1.0 + 1e-12, 10), std::vector<double>(10, 2.0));
    CHECK_THROWS_AS(fit(flat, {1e-3, 2e-3}), FitError);
}
