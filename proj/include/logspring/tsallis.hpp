#pragma once

#include "logspring/econ.hpp"
#include "logspring/oscillator.hpp"

#include <span>
#include <vector>

namespace logspring {

/// Microstate probabilities written as products p_i = mu_i nu_i.
class ProbabilityFactorization {
public:
    /// Requires equal lengths, W >= 1, all factors > 0 and sum(mu nu) = 1 within 1e-12.
    ProbabilityFactorization(std::vector<double> mu, std::vector<double> nu);

    std::span<const double> mu() const noexcept { return mu_; }
    std::span<const double> nu() const noexcept { return nu_; }
    std::size_t size() const noexcept { return mu_.size(); }
    double probability(std::size_t i) const { return mu_.at(i) * nu_.at(i); }
    std::vector<double> probabilities() const;

private:
    std::vector<double> mu_;
    std::vector<double> nu_;
};

/// Reduced thermodynamic functionals, A = E - T S:
///   A/(kB T) =  sum mu nu ln mu
///   E/(kB T) = -sum mu nu ln nu
///   S/kB     = -sum mu nu ln(mu nu)
struct ThermoReport {
    double helmholtz_reduced = 0.0;
    double internal_reduced = 0.0;
    double entropy_reduced = 0.0;
};

ThermoReport thermo(const ProbabilityFactorization& pf);

/// -sum p ln p with 0 ln 0 = 0.
double shannon_entropy(std::span<const double> p);

/// [1 - sum p_i^q] / (q - 1). Requires q != 1; zero entries need q > 0.
/// Evaluated as -sum p (p^(q-1) - 1)/(q-1) through expm1 so that q near 1 keeps
/// full relative precision.
double tsallis_entropy(std::span<const double> p, double q);

/// sum p_i^q / (q - 1); tsallis_entropy = 1/(q-1) - entropic_term.
double entropic_term(std::span<const double> p, double q);

/// -k(t) x, the mechanical side of the force-entropy correspondence.
double force_correspondence_lhs(const SpringConfig& spring, double t, double x);

/// -1/2 [ (k0 t0 / d_o(t)) (gamma beta_o(t) - lambda ell d_o(t)) (D - d*) ]^2.
/// With the constructed coefficients this reduces to -1/2 (k0 t0 x / t)^2,
/// x = P - P* = (D - d*)/d_o.
double demand_correspondence_lhs(const EconConfig& econ, const SpringConfig& spring,
                                 double demand_value, double t);

} // namespace logspring
