#include "oracles.hpp"

#include "logspring/errors.hpp"
#include "logspring/oscillator.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

using namespace logspring;

TEST_CASE("config validation")
{
    CHECK_THROWS_AS(SpringConfig(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(SpringConfig(1.0, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(SpringConfig(1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(SpringConfig(1.0, 1.0, std::nan("")), DomainError);
    CHECK_THROWS_AS(SpringConfig(1.0, 1.0, 1.0, std::numeric_limits<double>::infinity()),
                    DomainError);
    const SpringConfig s(2.0, 3.0, 8.0);
    CHECK(s.theta() == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(theta(s) == s.theta());
}

TEST_CASE("mass and stiffness schedule")
{
    const SpringConfig s(1.3, 2.0, 0.7);
    for (double t : {0.5, 2.0, 17.0, 1e4}) {
        CHECK(mass_at(s, t) == doctest::Approx(1.3 * t / 2.0).epsilon(1e-15));
        CHECK(stiffness_at(s, t) == doctest::Approx(0.7 * 2.0 / t).epsilon(1e-15));
        CHECK(angular_frequency_at(s, t) * t == doctest::Approx(s.theta()).epsilon(1e-15));
    }
    CHECK_THROWS_AS(mass_at(s, 0.0), DomainError);
    CHECK_THROWS_AS(position(s, -1.0), DomainError);
}

TEST_CASE("closed form against direct formula and RK4")
{
    const SpringConfig s(1.0, 1.0, 4.0);
    for (double t : oracle::geometric(1.0, 100.0, 50)) {
        CHECK(position(s, t) == doctest::Approx(oracle::spring_x(2.0, 1.0, 1.0, t)).epsilon(1e-13));
    }
    const double th = s.theta();
    const oracle::Field f = [th](double t, const oracle::Vec2& y) {
        return oracle::Vec2{y[1], -y[1] / t - th * th * y[0] / (t * t)};
    };
    const oracle::Vec2 end = oracle::rk4(f, {0.0, 2.0}, 1.0, 100.0);
    CHECK(std::abs(end[0] - position(s, 100.0)) < 1e-9);
    CHECK(std::abs(end[1] - velocity(s, 100.0)) < 1e-9);
}

TEST_CASE("general amplitudes")
{
    const SpringConfig s(1.0, 2.0, 9.0, 0.4, -1.1);
    const double t = 7.3;
    const double phi = s.theta() * std::log(t / 2.0);
    CHECK(position(s, t) == doctest::Approx(0.4 * std::sin(phi) - 1.1 * std::cos(phi)));
    CHECK(velocity(s, t) ==
          doctest::Approx(s.theta() / t * (0.4 * std::cos(phi) + 1.1 * std::sin(phi))));
    // conserved-quantity form of the energy: E t = const
    CHECK(energy(s, t) * t == doctest::Approx(energy(s, 2.0) * 2.0).epsilon(1e-13));
    CHECK_THROWS_AS(universal_residual(s, t), PreconditionError);
    CHECK_THROWS_AS(reconstructed_log_mass(s, t), PreconditionError);
}

TEST_CASE("acceleration solves the equation of motion")
{
    const SpringConfig s(0.8, 1.5, 3.0, 1.2, 0.3);
    for (double t : oracle::geometric(0.5, 500.0, 40)) {
        const double m = mass_at(s, t);
        const double lhs = m * acceleration(s, t) + (0.8 / 1.5) * velocity(s, t);
        CHECK(std::abs(lhs + stiffness_at(s, t) * position(s, t)) < 1e-12 * (1.0 + std::abs(lhs)));
    }
}

TEST_CASE("mass reconstruction against quadrature")
{
    for (double th : {1.0, 2.0, 5.0}) {
        const SpringConfig s(1.0, 1.0, th * th);
        for (double t : oracle::geometric(1.0, 10.0, 23)) {
            const double q = oracle::quadrature_log_mass(th, 1.0, 1.0, t);
            CHECK(std::abs(reconstructed_log_mass(s, t) - q) < 1e-9);
            CHECK(std::abs(q - std::log(t)) < 1e-8);
        }
    }
}

TEST_CASE("extremum times")
{
    const SpringConfig s(1.0, 1.0, 4.0);
    const ExtremumTimes e = extremum_times(s, 0, 4);
    REQUIRE(e.position.size() == 5);
    for (int n = 0; n < 5; ++n) {
        CHECK(e.position[n] == doctest::Approx(std::exp((n + 0.5) * std::numbers::pi / 2.0)));
        CHECK(std::abs(velocity(s, e.position[n])) < 1e-13);
        const double tv = e.velocity[n];
        CHECK(std::abs(acceleration(s, tv)) * tv * tv < 1e-12);
    }
}

TEST_CASE("grids")
{
    CHECK(log_grid(2.0, 5.0, 1) == std::vector<double>{2.0});
    const auto g = log_grid(1.0, 1000.0, 4);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == 1000.0);
    CHECK(g[1] == doctest::Approx(10.0));
    const auto l = linear_grid(1.0, 2.0, 3);
    CHECK(l[1] == doctest::Approx(1.5));
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), DomainError);
    CHECK_THROWS_AS(linear_grid(1.0, 2.0, 0), DomainError);
}

TEST_CASE("parallel sweep is bit identical to serial")
{
    const SpringConfig s(1.0, 1.0, 25.0, 0.7, 0.2);
    const auto t = log_grid(0.1, 1e5, 20001);
    std::vector<SpringState> a(t.size());
    std::vector<SpringState> b(t.size());
    sample_states_serial(s, t, a);
    sample_states(s, t, b);
    bool same = true;
    for (std::size_t i = 0; i < t.size(); ++i) {
        same = same && a[i].x == b[i].x && a[i].v == b[i].v && a[i].energy == b[i].energy &&
               a[i].omega == b[i].omega && a[i].m == b[i].m && a[i].k == b[i].k;
    }
    CHECK(same);
}
