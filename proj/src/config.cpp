#include "logspring/config.hpp"

#include "logspring/errors.hpp"

#include <fstream>
#include <initializer_list>
#include <string>
#include <variant>

namespace logspring {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const char* section, std::initializer_list<const char*> keys)
{
    if (!obj.is_object()) {
        throw InputError(std::string("config: '") + section + "' must be a JSON object");
    }
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (const char* k : keys) {
            known = known || key == k;
        }
        if (!known) {
            throw InputError(std::string("config: unknown key '") + key + "' in '" + section + "'");
        }
    }
}

double number_or(const json& obj, const char* key, double fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw InputError(std::string("config: '") + key + "' must be a JSON number");
    }
    return v.get<double>();
}

std::optional<double> optional_number(const json& obj, const char* key, std::optional<double> fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    return number_or(obj, key, 0.0);
}

std::string string_or(const json& obj, const char* key, const std::string& fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_string()) {
        throw InputError(std::string("config: '") + key + "' must be a JSON string");
    }
    return v.get<std::string>();
}

std::size_t count_or(const json& obj, const char* key, std::size_t fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw InputError(std::string("config: '") + key + "' must be a positive integer");
    }
    return static_cast<std::size_t>(v.get<long long>());
}

FitSection fit_from_json(const json& j, FitSection base)
{
    reject_unknown(j, "fit",
                   {"theta_min", "theta_max", "envelope", "fit_shift", "grid_points", "column",
                    "t_ref"});
    base.theta_min = number_or(j, "theta_min", base.theta_min);
    base.theta_max = number_or(j, "theta_max", base.theta_max);
    if (j.contains("envelope")) {
        base.envelope = parse_envelope(string_or(j, "envelope", ""));
    }
    if (j.contains("fit_shift")) {
        if (!j.at("fit_shift").is_boolean()) {
            throw InputError("config: 'fit_shift' must be a boolean");
        }
        base.fit_shift = j.at("fit_shift").get<bool>();
    }
    base.grid_points = count_or(j, "grid_points", base.grid_points);
    if (j.contains("column")) {
        base.column = string_or(j, "column", "");
    }
    base.t_ref = optional_number(j, "t_ref", base.t_ref);
    return base;
}

IntegrateSection integrate_from_json(const json& j, IntegrateSection base)
{
    reject_unknown(j, "integrate",
                   {"kind", "t_start", "t_end", "tol", "points", "spacing", "initial", "schedule",
                    "amplitude"});
    base.kind = string_or(j, "kind", base.kind);
    base.t_start = optional_number(j, "t_start", base.t_start);
    base.t_end = optional_number(j, "t_end", base.t_end);
    base.tol = number_or(j, "tol", base.tol);
    if (j.contains("points")) {
        base.points = count_or(j, "points", 1);
    }
    if (j.contains("spacing")) {
        base.spacing = parse_spacing(string_or(j, "spacing", ""));
    }
    if (j.contains("initial")) {
        const json& v = j.at("initial");
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw InputError("config: 'initial' must be an array of two numbers");
        }
        base.initial = std::array<double, 2>{v[0].get<double>(), v[1].get<double>()};
    }
    base.schedule = string_or(j, "schedule", base.schedule);
    base.amplitude = number_or(j, "amplitude", base.amplitude);
    return base;
}

} // namespace

Spacing parse_spacing(std::string_view name)
{
    if (name == "log") {
        return Spacing::log;
    }
    if (name == "linear") {
        return Spacing::linear;
    }
    throw InputError("unknown spacing '" + std::string(name) + "' (expected linear or log)");
}

json spring_to_json(const SpringConfig& spring)
{
    return json{{"m0", spring.m0()},
                {"t0", spring.t0()},
                {"k0", spring.k0()},
                {"x0", spring.x0()},
                {"x1", spring.x1()}};
}

SpringConfig spring_from_json(const json& j, const SpringConfig& base)
{
    reject_unknown(j, "spring", {"m0", "t0", "k0", "x0", "x1"});
    return SpringConfig(number_or(j, "m0", base.m0()), number_or(j, "t0", base.t0()),
                        number_or(j, "k0", base.k0()), number_or(j, "x0", base.x0()),
                        number_or(j, "x1", base.x1()));
}

json econ_to_json(const EconConfig& econ)
{
    json coefficients;
    if (const auto* lp = std::get_if<LogPeriodicFamily>(&econ.family())) {
        coefficients = json{{"family", "log_periodic"}, {"theta", lp->theta}};
    } else if (const auto* cf = std::get_if<ConstantFamily>(&econ.family())) {
        coefficients = json{{"family", "constant"}, {"d_o", cf->d_o}, {"q_o", cf->q_o}};
    } else {
        throw InputError("econ_to_json: custom coefficient functions cannot be serialised");
    }
    return json{{"gamma", econ.gamma()},   {"lambda", econ.lambda()}, {"ell", econ.ell()},
                {"ell0", econ.ell0()},     {"p_star", econ.p_star()}, {"d_star", econ.d_star()},
                {"coefficients", coefficients}};
}

EconConfig econ_from_json(const json& j, const EconConfig& base)
{
    reject_unknown(j, "econ", {"gamma", "lambda", "ell", "ell0", "p_star", "d_star", "coefficients"});
    const double gamma = number_or(j, "gamma", base.gamma());
    const double lambda = number_or(j, "lambda", base.lambda());
    const double ell = number_or(j, "ell", base.ell());
    const double ell0 = number_or(j, "ell0", base.ell0());
    const double p_star = number_or(j, "p_star", base.p_star());
    const double d_star = number_or(j, "d_star", base.d_star());

    CoefficientFamily family = base.family();
    if (j.contains("coefficients")) {
        const json& c = j.at("coefficients");
        if (!c.is_object()) {
            throw InputError("config: 'coefficients' must be a JSON object");
        }
        const std::string name = string_or(c, "family", "");
        if (name == "log_periodic") {
            reject_unknown(c, "coefficients", {"family", "theta"});
            if (!c.contains("theta")) {
                throw InputError("config: log_periodic coefficients need 'theta'");
            }
            family = LogPeriodicFamily{number_or(c, "theta", 0.0)};
        } else if (name == "constant") {
            reject_unknown(c, "coefficients", {"family", "d_o", "q_o"});
            if (!c.contains("d_o") || !c.contains("q_o")) {
                throw InputError("config: constant coefficients need 'd_o' and 'q_o'");
            }
            family = ConstantFamily{number_or(c, "d_o", 0.0), number_or(c, "q_o", 0.0)};
        } else {
            throw InputError("config: coefficient family must be 'log_periodic' or 'constant'");
        }
    }

    if (const auto* lp = std::get_if<LogPeriodicFamily>(&family)) {
        return EconConfig::log_periodic(gamma, lambda, ell, lp->theta, ell0, p_star, d_star);
    }
    if (const auto* cf = std::get_if<ConstantFamily>(&family)) {
        return EconConfig::constant_slopes(gamma, lambda, ell, ell0, p_star, d_star, cf->d_o,
                                           cf->q_o);
    }
    throw InputError("config: base economic configuration has no serialisable coefficients");
}

RunConfig parse_run_config(const json& doc, RunConfig base)
{
    reject_unknown(doc, "top level", {"spec_version", "spring", "econ", "fit", "integrate"});
    if (!doc.contains("spec_version")) {
        throw InputError("config: missing 'spec_version'");
    }
    const json& version = doc.at("spec_version");
    if (!version.is_number_integer() || version.get<long long>() != kConfigVersion) {
        throw InputError("config: unsupported spec_version (expected 1)");
    }
    if (doc.contains("spring")) {
        base.spring = spring_from_json(doc.at("spring"), base.spring);
    }
    if (doc.contains("econ")) {
        base.econ = econ_from_json(doc.at("econ"), base.econ);
    }
    if (doc.contains("fit")) {
        base.fit = fit_from_json(doc.at("fit"), base.fit);
    }
    if (doc.contains("integrate")) {
        base.integrate = integrate_from_json(doc.at("integrate"), base.integrate);
    }
    return base;
}

RunConfig load_run_config(const std::string& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("config: cannot open '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("config: '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(doc, std::move(base));
}

json fit_to_json(const LogPeriodicFit& fit)
{
    return json{{"theta", fit.theta},
                {"amp_sin", fit.amp_sin},
                {"amp_cos", fit.amp_cos},
                {"offset", fit.offset},
                {"t_ref", fit.t_ref},
                {"t_shift", fit.t_shift},
                {"envelope", std::string(to_string(fit.envelope))},
                {"rms_residual", fit.rms_residual},
                {"theta_grid_resolution", fit.theta_grid_resolution}};
}

} // namespace logspring
