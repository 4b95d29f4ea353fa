#include "cli.hpp"

#include "logspring/checks.hpp"
#include "logspring/config.hpp"
#include "logspring/econ.hpp"
#include "logspring/errors.hpp"
#include "logspring/fitter.hpp"
#include "logspring/integrator.hpp"
#include "logspring/oscillator.hpp"
#include "logspring/tsallis.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace logspring::cli {

namespace {

struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> output;
    std::optional<double> t_start;
    std::optional<double> t_end;
    std::optional<long long> points;
    std::optional<std::string> spacing;
    std::optional<double> tol;
    std::optional<double> theta_min;
    std::optional<double> theta_max;
    std::optional<std::string> envelope;
    bool fit_shift = false;
    std::optional<std::string> kind;
    std::optional<std::string> column;
    std::optional<double> m0, t0, k0, x0, x1;
    std::optional<double> q;
    std::string input;
    std::string suite;
};

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunConfig load_config(const Flags& f)
{
    RunConfig cfg;
    if (f.config) {
        cfg = load_run_config(*f.config);
    }
    if (f.m0 || f.t0 || f.k0 || f.x0 || f.x1) {
        const SpringConfig& s = cfg.spring;
        cfg.spring = SpringConfig(f.m0.value_or(s.m0()), f.t0.value_or(s.t0()),
                                  f.k0.value_or(s.k0()), f.x0.value_or(s.x0()),
                                  f.x1.value_or(s.x1()));
    }
    if (f.tol) {
        cfg.integrate.tol = *f.tol;
    }
    if (f.t_start) {
        cfg.integrate.t_start = *f.t_start;
    }
    if (f.t_end) {
        cfg.integrate.t_end = *f.t_end;
    }
    if (f.points) {
        if (*f.points < 1) {
            throw InputError("--points must be >= 1");
        }
        cfg.integrate.points = static_cast<std::size_t>(*f.points);
    }
    if (f.spacing) {
        cfg.integrate.spacing = parse_spacing(*f.spacing);
    }
    if (f.kind) {
        cfg.integrate.kind = *f.kind;
    }
    if (f.theta_min) {
        cfg.fit.theta_min = *f.theta_min;
    }
    if (f.theta_max) {
        cfg.fit.theta_max = *f.theta_max;
    }
    if (f.envelope) {
        cfg.fit.envelope = parse_envelope(*f.envelope);
    }
    if (f.fit_shift) {
        cfg.fit.fit_shift = true;
    }
    if (f.column) {
        cfg.fit.column = *f.column;
    }
    return cfg;
}

std::vector<double> make_grid(double t_start, double t_end, std::size_t points, Spacing spacing)
{
    if (!std::isfinite(t_start) || !(t_start > 0.0) || !std::isfinite(t_end)) {
        throw InputError("grid: t_start must be > 0 and both ends finite");
    }
    if (points > 1 ? !(t_end > t_start) : !(t_end >= t_start)) {
        throw InputError("grid: t_end must exceed t_start");
    }
    return spacing == Spacing::log ? log_grid(t_start, t_end, points)
                                   : linear_grid(t_start, t_end, points);
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

Csv read_csv(std::istream& in)
{
    Csv csv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells = split(line);
        if (csv.header.empty()) {
            csv.header = std::move(cells);
            continue;
        }
        if (cells.size() != csv.header.size()) {
            throw InputError("csv: line " + std::to_string(line_no) + " has " +
                             std::to_string(cells.size()) + " fields, header has " +
                             std::to_string(csv.header.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const std::string& c : cells) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(c, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || c.find_first_not_of(" \t", used) != std::string::npos) {
                throw InputError("csv: line " + std::to_string(line_no) + ": '" + c +
                                 "' is not a number");
            }
            row.push_back(v);
        }
        csv.rows.push_back(std::move(row));
    }
    if (csv.header.empty()) {
        throw InputError("csv: empty input (a header row is required)");
    }
    return csv;
}

Csv read_input(const std::string& path, std::istream& in)
{
    if (path.empty() || path == "-") {
        return read_csv(in);
    }
    std::ifstream file(path);
    if (!file) {
        throw InputError("cannot open '" + path + "'");
    }
    return read_csv(file);
}

void cmd_spring(const Flags& f, std::ostream& out)
{
    const RunConfig cfg = load_config(f);
    const SpringConfig& spring = cfg.spring;
    const double t_start = cfg.integrate.t_start.value_or(spring.t0());
    const double t_end = cfg.integrate.t_end.value_or(100.0 * spring.t0());
    const std::size_t points = cfg.integrate.points.value_or(200);
    const std::vector<double> grid = make_grid(t_start, t_end, points, cfg.integrate.spacing);
    const std::vector<SpringState> states = sample_states(spring, grid);

    std::string text = "t,x,v,m,k,omega,energy\n";
    for (const SpringState& s : states) {
        text += num(s.t) + ',' + num(s.x) + ',' + num(s.v) + ',' + num(s.m) + ',' + num(s.k) +
                ',' + num(s.omega) + ',' + num(s.energy) + '\n';
    }
    out << text;
}

void cmd_simulate(const Flags& f, std::ostream& out)
{
    const RunConfig cfg = load_config(f);
    const IntegrateSection& in = cfg.integrate;
    const SpringConfig& spring = cfg.spring;
    const std::string& kind = in.kind;
    if (kind != "spring-reduced" && kind != "spring-general" && kind != "econ") {
        throw InputError("unknown simulation kind '" + kind +
                         "' (expected spring-reduced, spring-general or econ)");
    }
    if (!(in.tol >= kMinTolerance && in.tol <= kMaxTolerance)) {
        throw InputError("--tol must lie in [1e-13, 1e-3]");
    }

    double t_start = spring.t0();
    double t_end = 100.0 * spring.t0();
    if (kind == "spring-general" && in.schedule == "decreasing") {
        t_end = 1.5 * spring.t0();
    }
    if (kind == "econ") {
        const ValidityWindow& w = cfg.econ.window();
        t_start = w.bounded() && w.lo > 0.0 ? w.lo : 1.0;
        t_end = w.bounded() ? w.hi : 100.0;
    }
    t_start = in.t_start.value_or(t_start);
    t_end = in.t_end.value_or(t_end);
    if (!std::isfinite(t_start) || !(t_start > 0.0) || !std::isfinite(t_end) || !(t_end > t_start)) {
        throw InputError("simulation window must satisfy 0 < t_start < t_end");
    }

    OutputGrid grid;
    if (in.points) {
        grid.times = make_grid(t_start, t_end, *in.points, in.spacing);
    }

    std::string header;
    OdeSolution sol;
    if (kind == "econ") {
        const EconConfig& econ = cfg.econ;
        State init{};
        if (in.initial) {
            init = *in.initial;
        } else if (const auto* lp = std::get_if<LogPeriodicFamily>(&econ.family())) {
            init = econ_initial_state(econ, t_start, 0.0, in.amplitude * lp->theta / t_start);
        } else {
            init = {econ.p_star() + in.amplitude, econ.equilibrium_stock()};
        }
        sol = integrate_econ(econ, init, t_start, t_end, in.tol, grid);
        header = "t,P,S\n";
    } else {
        const State init = in.initial ? *in.initial
                                      : State{position(spring, t_start), velocity(spring, t_start)};
        if (kind == "spring-reduced") {
            sol = integrate_spring_reduced(spring, init, t_start, t_end, in.tol, grid);
        } else {
            std::optional<MassStiffnessSchedule> schedule;
            if (in.schedule == "linear") {
                schedule = MassStiffnessSchedule::linear_growth(spring, t_start, t_end);
            } else if (in.schedule == "constant") {
                schedule = MassStiffnessSchedule::constant(spring.m0(), spring.k0(), t_start, t_end);
            } else if (in.schedule == "decreasing") {
                schedule = MassStiffnessSchedule::linear_decrease(spring, t_start, t_end);
            } else {
                throw InputError("unknown schedule '" + in.schedule +
                                 "' (expected linear, constant or decreasing)");
            }
            sol = integrate_spring_general(*schedule, init, t_start, t_end, in.tol, grid);
        }
        header = "t,x,v\n";
    }

    std::string text = header;
    for (std::size_t i = 0; i < sol.size(); ++i) {
        text += num(sol.times()[i]) + ',' + num(sol.states()[i][0]) + ',' +
                num(sol.states()[i][1]) + '\n';
    }
    out << text;
}

void cmd_fit(const Flags& f, std::istream& in, std::ostream& out)
{
    const RunConfig cfg = load_config(f);
    const Csv csv = read_input(f.input, in);
    if (csv.header.size() < 2) {
        throw InputError("csv: need a time column and at least one data column");
    }
    std::size_t column = 1;
    if (cfg.fit.column) {
        column = csv.header.size();
        for (std::size_t i = 1; i < csv.header.size(); ++i) {
            if (csv.header[i] == *cfg.fit.column) {
                column = i;
                break;
            }
        }
        if (column == csv.header.size()) {
            throw InputError("csv: no column named '" + *cfg.fit.column + "'");
        }
    }
    if (csv.rows.size() < kMinFitSamples) {
        throw InsufficientDataError("fit: need at least 8 rows, got " +
                                    std::to_string(csv.rows.size()));
    }
    std::vector<double> t;
    std::vector<double> y;
    for (const auto& row : csv.rows) {
        t.push_back(row[0]);
        y.push_back(row[column]);
    }
    const TimeSeries series(std::move(t), std::move(y), csv.header[column]);

    FitOptions options;
    options.envelope = cfg.fit.envelope;
    options.fit_shift = cfg.fit.fit_shift;
    options.t_ref = cfg.fit.t_ref;
    options.grid_points = cfg.fit.grid_points;
    const LogPeriodicFit result = fit(series, {cfg.fit.theta_min, cfg.fit.theta_max}, options);
    out << fit_to_json(result).dump(2) << '\n';
}

int cmd_check(const Flags& f, std::ostream& out)
{
    const std::vector<CheckResult> results = run_checks(f.suite);
    std::size_t passed = 0;
    std::string text;
    for (const CheckResult& r : results) {
        char line[512];
        std::snprintf(line, sizeof line, "%-4s  %-10s  %-58s  %s\n", r.passed ? "PASS" : "FAIL",
                      r.suite.c_str(), r.name.c_str(), r.detail.c_str());
        text += line;
        passed += r.passed ? 1 : 0;
    }
    text += std::to_string(passed) + "/" + std::to_string(results.size()) + " checks passed\n";
    out << text;
    return passed == results.size() ? kOk : kNumerical;
}

void cmd_tsallis(const Flags& f, std::istream& in, std::ostream& out)
{
    const Csv csv = read_input(f.input, in);
    if (csv.header.size() != 1) {
        throw InputError("csv: probability input must have exactly one column");
    }
    std::vector<double> p;
    for (const auto& row : csv.rows) {
        p.push_back(row[0]);
    }
    if (p.empty()) {
        throw InputError("csv: no probabilities given");
    }
    const double q = f.q.value_or(2.0);
    nlohmann::json report{{"W", p.size()},
                          {"q", q},
                          {"tsallis_entropy", tsallis_entropy(p, q)},
                          {"entropic_term", entropic_term(p, q)},
                          {"shannon_entropy", shannon_entropy(p)}};
    out << report.dump(2) << '\n';
}

void add_config_output(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--config", f.config, "JSON run configuration (flags override it)");
    cmd->add_option("--output", f.output, "Write data here instead of standard output");
}

void add_spring_params(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--m0", f.m0, "Mass at the reference time");
    cmd->add_option("--t0", f.t0, "Reference time");
    cmd->add_option("--k0", f.k0, "Spring constant at the reference time");
    cmd->add_option("--x0", f.x0, "Sine amplitude");
    cmd->add_option("--x1", f.x1, "Cosine amplitude");
}

void add_grid(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--t-start", f.t_start, "First time (> 0)");
    cmd->add_option("--t-end", f.t_end, "Last time");
    cmd->add_option("--points", f.points, "Number of output points");
    cmd->add_option("--spacing", f.spacing, "linear or log");
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err)
{
    Flags f;
    CLI::App app{"Variable-mass spring, log-periodic market dynamics and Tsallis entropy toolkit",
                 "logspring"};
    app.require_subcommand(1);

    CLI::App* spring = app.add_subcommand("spring", "Closed-form trajectory as CSV");
    add_config_output(spring, f);
    add_spring_params(spring, f);
    add_grid(spring, f);

    CLI::App* simulate = app.add_subcommand("simulate", "Adaptive numerical integration as CSV");
    add_config_output(simulate, f);
    add_spring_params(simulate, f);
    add_grid(simulate, f);
    simulate->add_option("--kind", f.kind, "spring-reduced, spring-general or econ");
    simulate->add_option("--tol", f.tol, "Local error tolerance in [1e-13, 1e-3]");

    CLI::App* fitcmd = app.add_subcommand("fit", "Fit a log-periodic model to a CSV series");
    add_config_output(fitcmd, f);
    fitcmd->add_option("input", f.input, "CSV file (default or '-': standard input)");
    fitcmd->add_option("--column", f.column, "Data column (default: second column)");
    fitcmd->add_option("--theta-min", f.theta_min, "Lower end of the theta scan (> 0)");
    fitcmd->add_option("--theta-max", f.theta_max, "Upper end of the theta scan");
    fitcmd->add_option("--envelope", f.envelope, "constant, inverse_time or inverse_square_time");
    fitcmd->add_flag("--fit-shift", f.fit_shift, "Also fit an additive time shift t_c");

    CLI::App* check = app.add_subcommand("check", "Run invariant suites");
    check->add_option("suite", f.suite, "oscillator, econ, tsallis or all")->required();
    check->add_option("--output", f.output, "Write the table here instead of standard output");

    CLI::App* tsallis = app.add_subcommand("tsallis", "Entropies of a probability vector (CSV)");
    tsallis->add_option("input", f.input, "Single-column CSV (default or '-': standard input)");
    tsallis->add_option("--q", f.q, "Entropic index q != 1 (default 2)");
    tsallis->add_option("--output", f.output, "Write the report here instead of standard output");

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "logspring: " << e.what() << '\n';
        return kUsage;
    }

    try {
        std::ostringstream buffer;
        int code = kOk;
        if (spring->parsed()) {
            cmd_spring(f, buffer);
        } else if (simulate->parsed()) {
            cmd_simulate(f, buffer);
        } else if (fitcmd->parsed()) {
            cmd_fit(f, in, buffer);
        } else if (check->parsed()) {
            code = cmd_check(f, buffer);
        } else if (tsallis->parsed()) {
            cmd_tsallis(f, in, buffer);
        }
        if (f.output) {
            std::ofstream file(*f.output, std::ios::binary);
            if (!file) {
                throw InputError("cannot write '" + *f.output + "'");
            }
            file << buffer.str();
        } else {
            out << buffer.str();
        }
        return code;
    } catch (const FitError& e) {
        err << "logspring: fit failed: " << e.what() << '\n';
        return kFitFailure;
    } catch (const InputError& e) {
        err << "logspring: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError& e) {
        err << "logspring: numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        err << "logspring: " << e.what() << '\n';
        return kNumerical;
    }
}

} // namespace logspring::cli
