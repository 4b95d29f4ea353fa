#include "logspring/tsallis.hpp"

#include "logspring/errors.hpp"

#include <cmath>
#include <string>

namespace logspring {

namespace {

bool validate_probabilities(std::span<const double> p, const char* what)
{
    if (p.empty()) {
        throw DomainError(std::string(what) + ": empty probability vector");
    }
    double total = 0.0;
    bool has_zero = false;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DomainError(std::string(what) + ": probabilities must be finite and >= 0");
        }
        has_zero = has_zero || v == 0.0;
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError(std::string(what) + ": probabilities must sum to 1");
    }
    return has_zero;
}

void validate_distribution(std::span<const double> p, double q, const char* what)
{
    if (!std::isfinite(q) || q == 1.0) {
        throw DomainError(std::string(what) +
                          ": q must be finite and != 1 (use shannon_entropy for q = 1)");
    }
    if (validate_probabilities(p, what) && q <= 0.0) {
        throw DomainError(std::string(what) + ": zero probabilities require q > 0");
    }
}

} // namespace

ProbabilityFactorization::ProbabilityFactorization(std::vector<double> mu, std::vector<double> nu)
    : mu_(std::move(mu)), nu_(std::move(nu))
{
    if (mu_.empty() || mu_.size() != nu_.size()) {
        throw DomainError("ProbabilityFactorization: mu and nu must be nonempty and equal length");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < mu_.size(); ++i) {
        if (!(mu_[i] > 0.0) || !(nu_[i] > 0.0) || !std::isfinite(mu_[i]) ||
            !std::isfinite(nu_[i])) {
            throw DomainError("ProbabilityFactorization: factors must be finite and > 0");
        }
        total += mu_[i] * nu_[i];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw DomainError("ProbabilityFactorization: sum of mu_i nu_i must equal 1");
    }
}

std::vector<double> ProbabilityFactorization::probabilities() const
{
    std::vector<double> p(mu_.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = mu_[i] * nu_[i];
    }
    return p;
}

ThermoReport thermo(const ProbabilityFactorization& pf)
{
    ThermoReport r;
    for (std::size_t i = 0; i < pf.size(); ++i) {
        const double mu = pf.mu()[i];
        const double nu = pf.nu()[i];
        const double p = mu * nu;
        const double ln_mu = std::log(mu);
        const double ln_nu = std::log(nu);
        r.helmholtz_reduced += p * ln_mu;
        r.internal_reduced -= p * ln_nu;
        r.entropy_reduced -= p * (ln_mu + ln_nu);
    }
    return r;
}

double shannon_entropy(std::span<const double> p)
{
    validate_probabilities(p, "shannon_entropy");
    double s = 0.0;
    for (double v : p) {
        if (v > 0.0) {
            s -= v * std::log(v);
        }
    }
    return s;
}

double tsallis_entropy(std::span<const double> p, double q)
{
    validate_distribution(p, q, "tsallis_entropy");
    const double qm1 = q - 1.0;
    double acc = 0.0;
    for (double v : p) {
        if (v > 0.0) {
            acc += v * std::expm1(qm1 * std::log(v));
        }
        // 0^q = 0 contributes p (p^(q-1) - 1) = 0.
    }
    return -acc / qm1;
}

double entropic_term(std::span<const double> p, double q)
{
    validate_distribution(p, q, "entropic_term");
    double acc = 0.0;
    for (double v : p) {
        if (v > 0.0) {
            acc += std::pow(v, q);
        }
    }
    return acc / (q - 1.0);
}

double force_correspondence_lhs(const SpringConfig& spring, double t, double x)
{
    return -stiffness_at(spring, t) * x;
}

double demand_correspondence_lhs(const EconConfig& econ, const SpringConfig& spring,
                                 double demand_value, double t)
{
    if (!econ.window().contains(t)) {
        throw WindowError("demand_correspondence_lhs: t outside the validity window");
    }
    const double d_o = econ.d_o()(t);
    if (d_o == 0.0) {
        throw SingularityError("demand_correspondence_lhs: d_o(t) = 0");
    }
    const double inner =
        (spring.k0() * spring.t0() / d_o) * econ.damping(t) * (demand_value - econ.d_star());
    return -0.5 * inner * inner;
}

} // namespace logspring
