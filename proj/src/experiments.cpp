// experiments.cpp: Sweep construction and evaluation for the command-line front end

#include "cavheat/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "cavheat/analytic2.hpp"
#include "cavheat/arrayn.hpp"
#include "cavheat/moments.hpp"

namespace cavheat::cli {

namespace {

constexpr std::array<std::pair<Experiment, std::string_view>, 8> kNames{{
    {Experiment::gamma_sweep, "gamma_sweep"},
    {Experiment::chi_sweep, "chi_sweep"},
    {Experiment::current_decomposition, "current_decomposition"},
    {Experiment::rectification_sweep, "rectification_sweep"},
    {Experiment::size_scan, "size_scan"},
    {Experiment::profile, "profile"},
    {Experiment::regime_table, "regime_table"},
    {Experiment::oracle_crosscheck, "oracle_crosscheck"},
}};

bool is_array(Experiment e)
{
    return e == Experiment::size_scan || e == Experiment::profile;
}

bool needs_range(Experiment e)
{
    return e != Experiment::profile && e != Experiment::regime_table && e != Experiment::oracle_crosscheck;
}

bool needs_atom(Experiment e)
{
    return e == Experiment::chi_sweep || e == Experiment::current_decomposition
           || e == Experiment::rectification_sweep || e == Experiment::regime_table;
}

// Reads one reservoir; nbar_x and temp_x are alternatives.
ReservoirSpec read_reservoir(const Config& config, const std::string& side, double omega, double default_nbar,
                             std::vector<std::string>& problems)
{
    ReservoirSpec r;
    r.rate = config.number("gamma_" + side, 0.1);
    const std::string nbar_key = "nbar_" + side;
    const std::string temp_key = "temp_" + side;
    if (config.has(nbar_key) && config.has(temp_key)) {
        problems.push_back(temp_key + ": give either " + nbar_key + " or " + temp_key + ", not both");
    }
    if (config.has(temp_key)) {
        const double T = config.number(temp_key, 0.0);
        if (!(T >= 0.0)) {
            problems.push_back(temp_key + ": temperature must be non-negative");
        } else {
            r.mean_occupation = bose_occupation(omega, T);
        }
    } else {
        r.mean_occupation = config.number(nbar_key, default_nbar);
    }
    return r;
}

std::optional<AtomSpec> read_atom(const Config& config, std::vector<std::string>& problems)
{
    const bool present = config.flag("atom", false);
    if (!present) {
        for (const char* key : {"chi", "sigma_z", "omega_0", "atom_site"}) {
            if (config.has(key)) problems.push_back(std::string(key) + ": set but atom = no");
        }
        return std::nullopt;
    }
    AtomSpec atom;
    atom.transition_frequency = config.number("omega_0", 2.0);
    atom.dispersive_strength = config.number("chi", 0.0);
    atom.sigma_z = config.number("sigma_z", -1.0);
    return atom;
}

void append(std::vector<std::string>& out, const std::vector<std::string>& more)
{
    out.insert(out.end(), more.begin(), more.end());
}

[[noreturn]] void fail_at(const SweepSpec& spec, double value, const std::exception& e, bool solver)
{
    char where[160];
    std::snprintf(where, sizeof where, "%.*s: %s = %.17g: ", static_cast<int>(to_string(spec.experiment).size()),
                  to_string(spec.experiment).data(), spec.sweep_param.c_str(), value);
    if (solver) throw SolverError(where + std::string(e.what()));
    throw ValidationError({where + std::string(e.what())});
}

// Evaluates body(value) for every sweep point, tagging failures with the point.
template <class Body>
std::vector<ResultRow> sweep(const SweepSpec& spec, const std::vector<double>& points, Execution policy, Body&& body)
{
    std::vector<ResultRow> rows(points.size());
    for_each_index(points.size(), policy, [&](std::size_t i) {
        try {
            rows[i] = body(points[i]);
        } catch (const SolverError& e) {
            fail_at(spec, points[i], e, true);
        } catch (const ValidationError& e) {
            fail_at(spec, points[i], e, false);
        } catch (const std::invalid_argument& e) {
            fail_at(spec, points[i], e, false);
        }
    });
    return rows;
}

ResultRow base_row(const SweepSpec& spec, double value)
{
    ResultRow row;
    row.experiment = std::string(to_string(spec.experiment));
    row.param = spec.sweep_param;
    row.value = value;
    return row;
}

void fill_currents(ResultRow& row, const TwoCavitySystem& system, const CurrentReport& report)
{
    if (system.atom) row.sigma_z = system.atom->sigma_z;
    row.current_left = report.left;
    row.current_right = report.right;
    row.nondiagonal = report.nondiagonal;
    row.coherence = report.coherence;
    row.alpha = report.alpha;
    if (report.regime) row.regime = std::string(to_string(*report.regime));
}

struct MomentPoint {
    CurrentReport report;
    double residual{0.0};
};

MomentPoint solve_moments(const TwoCavitySystem& system)
{
    validate(system);
    const moments::MomentVector v = moments::steady_state(system);
    return {moments::currents_from_moments(system, v),
            moments::relative_residual(moments::generator_matrix(system), v)};
}

ResultRow moment_row(const SweepSpec& spec, double value, const TwoCavitySystem& system)
{
    ResultRow row = base_row(spec, value);
    const MomentPoint p = solve_moments(system);
    fill_currents(row, system, p.report);
    row.residual = p.residual;
    return row;
}

std::vector<ResultRow> run_gamma_sweep(const SweepSpec& spec, Execution policy)
{
    return sweep(spec, spec.range->points(), policy, [&](double g) {
        TwoCavitySystem sys = spec.two_cavity;
        sys.left.rate = g;
        sys.right.rate = g;
        return moment_row(spec, g, sys);
    });
}

std::vector<ResultRow> run_chi_sweep(const SweepSpec& spec, Execution policy, bool normalize)
{
    std::optional<double> reference;
    if (normalize) {
        TwoCavitySystem free = spec.two_cavity;
        free.atom->dispersive_strength = 0.0;
        reference = solve_moments(free).report.left;
    }
    return sweep(spec, spec.range->points(), policy, [&](double chi) {
        TwoCavitySystem sys = spec.two_cavity;
        sys.atom->dispersive_strength = chi;
        ResultRow row = moment_row(spec, chi, sys);
        if (reference && *reference != 0.0) row.ratio = *row.current_left / *reference;
        return row;
    });
}

std::vector<ResultRow> run_rectification_sweep(const SweepSpec& spec, Execution policy)
{
    return sweep(spec, spec.range->points(), policy, [&](double v) {
        TwoCavitySystem sys = spec.two_cavity;
        if (spec.sweep_param == "chi") {
            sys.atom->dispersive_strength = v;
        } else {
            sys.left.rate = v;
        }
        ResultRow row = base_row(spec, v);
        const MomentPoint fwd = solve_moments(sys);
        const MomentPoint rev = solve_moments(with_swapped_reservoirs(sys));
        fill_currents(row, sys, fwd.report);
        row.forward = fwd.report.left;
        row.reverse = rev.report.left;
        const analytic::Rectification R = analytic::rectification(sys);
        if (R.divergent) {
            row.rectification_divergence = std::string("below=") + (R.sign_below > 0 ? "+" : "-") + "inf;above="
                                           + (R.sign_above > 0 ? "+" : "-") + "inf";
        } else {
            row.rectification = R.value;
        }
        row.residual = std::max(fwd.residual, rev.residual);
        return row;
    });
}

std::vector<ResultRow> run_size_scan(const SweepSpec& spec, Execution policy)
{
    const auto points = spec.range->points();
    const int n_min = static_cast<int>(std::lround(points.front()));
    const int n_max = static_cast<int>(std::lround(points.back()));
    const auto placement = spec.atom_site_fixed ? arrayn::AtomPlacement::fixed : arrayn::AtomPlacement::last_site;
    std::vector<arrayn::SizeScanRow> scan;
    try {
        scan = arrayn::size_scan(spec.array, n_min, n_max, placement, policy);
    } catch (const SolverError& e) {
        throw SolverError("size_scan: " + std::string(e.what()));
    }
    std::vector<ResultRow> rows;
    for (double p : points) {
        const auto& s = scan[static_cast<std::size_t>(std::lround(p)) - static_cast<std::size_t>(n_min)];
        ResultRow row = base_row(spec, s.sites);
        if (spec.array.atom) row.sigma_z = spec.array.atom->sigma_z;
        row.current_left = s.current;
        row.current_right = s.right_current;
        if (std::isfinite(s.ratio)) row.ratio = s.ratio;
        row.residual = s.residual;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> run_profile(const SweepSpec& spec, Execution policy)
{
    const ArraySystem& sys = spec.array;
    arrayn::MomentMatrix G;
    try {
        G = arrayn::steady_state_matrix(sys, policy);
    } catch (const SolverError& e) {
        throw SolverError("profile: N = " + std::to_string(sys.sites) + ": " + e.what());
    }
    const double left = arrayn::array_current(sys, G);
    const double right = arrayn::array_current_right(sys, G);
    const std::vector<double> n = arrayn::occupation_profile(sys, G);
    std::vector<ResultRow> rows;
    for (int j = 1; j <= sys.sites; ++j) {
        ResultRow row = base_row(spec, j);
        if (sys.atom) {
            row.sigma_z = sys.atom->sigma_z;
            if (sys.atom->host_site == j) row.label = "atom";
        }
        row.current_left = left;
        row.current_right = right;
        row.occupation = n[static_cast<std::size_t>(j - 1)];
        row.residual = G.residual;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ResultRow> run_regime_table(const SweepSpec& spec, Execution policy)
{
    const TwoCavitySystem& base = spec.two_cavity;
    std::vector<std::pair<double, double>> cells; // (alpha, sigma_z)
    for (double a : spec.alpha_values) {
        cells.emplace_back(a, 1.0);
        cells.emplace_back(a, -1.0);
    }

    std::vector<ResultRow> rows(cells.size());
    for_each_index(cells.size(), policy, [&](std::size_t i) {
        const auto [alpha, sz] = cells[i];
        TwoCavitySystem sys = base;
        sys.atom->sigma_z = sz;
        sys.right.rate = alpha * base.left.rate * (sys.chi() - sys.omega_right) / sys.omega_left;
        try {
            ResultRow row = moment_row(spec, alpha, sys);
            const analytic::RegimeClassification cls = analytic::classify_regime(sys);
            row.alpha = cls.alpha;
            row.regime = std::string(to_string(cls.regime));
            row.label = sz > 0 ? "excited" : "ground";
            rows[i] = std::move(row);
        } catch (const SolverError& e) {
            fail_at(spec, alpha, e, true);
        } catch (const std::invalid_argument& e) {
            fail_at(spec, alpha, e, false);
        }
    });
    return rows;
}

moments::MomentVector closed_form_moments(const TwoCavitySystem& system)
{
    const analytic::SteadyMoments m = analytic::steady_moments(system);
    moments::MomentVector v;
    v.sigma_z = system.sigma_z();
    v.values(moments::kNLeft) = m.n_left;
    v.values(moments::kNRight) = m.n_right;
    v.values(moments::kCoherence) = m.coherence;
    v.values(moments::kCoherenceConj) = std::conj(m.coherence);
    for (int k = 0; k < 4; ++k) v.values(k + 4) = v.sigma_z * v.values(k);
    return v;
}

PairDeviation compare(const std::string& a_name, double a, const std::string& b_name, double b, double tolerance,
                      double floor)
{
    PairDeviation d;
    d.first = a_name;
    d.second = b_name;
    d.difference = std::abs(a - b);
    const double scale = std::max(std::abs(a), std::abs(b));
    d.deviation = scale > 0.0 ? d.difference / scale : 0.0;
    d.tolerance = tolerance;
    d.floor = floor;
    d.pass = d.deviation <= tolerance || d.difference <= floor;
    return d;
}

} // namespace

std::optional<Experiment> parse_experiment(std::string_view name)
{
    for (const auto& [e, n] : kNames) {
        if (n == name) return e;
    }
    return std::nullopt;
}

std::string_view to_string(Experiment experiment)
{
    for (const auto& [e, n] : kNames) {
        if (e == experiment) return n;
    }
    return "unknown";
}

std::optional<Format> parse_format(std::string_view name)
{
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    return std::nullopt;
}

std::vector<double> Range::points() const
{
    std::vector<double> out;
    if (!(step > 0.0) || !std::isfinite(min) || !std::isfinite(max)) return out;
    // The last point may overshoot max by rounding in (max - min) / step.
    const double span = (max - min) / step;
    const auto count = static_cast<long long>(std::floor(span + 1e-9)) + 1;
    for (long long k = 0; k < count; ++k) out.push_back(min + static_cast<double>(k) * step);
    return out;
}

std::vector<std::string> violations(const Range& range)
{
    std::vector<std::string> out;
    if (!std::isfinite(range.min) || !std::isfinite(range.max)) out.emplace_back("sweep_min/sweep_max: must be finite");
    if (!(range.step > 0.0) || !std::isfinite(range.step)) out.emplace_back("sweep_step: must be positive");
    if (out.empty() && range.points().size() < 2) {
        out.emplace_back("sweep_max: range must contain at least 2 points");
    }
    return out;
}

SweepSpec make_spec(Experiment experiment, const Config& config)
{
    SweepSpec spec;
    spec.experiment = experiment;
    std::vector<std::string> problems;

    if (needs_range(experiment)) {
        for (const char* key : {"sweep_min", "sweep_max", "sweep_step"}) {
            if (!config.has(key)) problems.push_back(std::string(key) + ": required by " + std::string(to_string(experiment)));
        }
        if (problems.empty()) {
            Range r{config.number("sweep_min", 0.0), config.number("sweep_max", 0.0), config.number("sweep_step", 0.0)};
            append(problems, violations(r));
            spec.range = r;
        }
    }

    std::optional<AtomSpec> atom = read_atom(config, problems);
    if (needs_atom(experiment) && !atom) {
        problems.push_back("atom: " + std::string(to_string(experiment)) + " needs atom = yes");
    }

    if (is_array(experiment)) {
        if (config.has("omega_r")) problems.emplace_back("omega_r: array cavities share the reference frequency");
        ArraySystem& a = spec.array;
        a.omega = 1.0;
        a.coupling = config.number("coupling", 0.05);
        a.sites = config.integer("sites", 6);
        a.left = read_reservoir(config, "l", a.omega, 0.5, problems);
        a.right = read_reservoir(config, "r", a.omega, 0.0, problems);
        a.atom = atom;
        spec.atom_site_fixed = config.has("atom_site");
        if (a.atom) a.atom->host_site = config.integer("atom_site", a.sites);
        if (experiment == Experiment::size_scan && spec.range) {
            spec.sweep_param = "sites";
            const Range& r = *spec.range;
            if (r.min != std::floor(r.min) || r.step != std::floor(r.step) || r.min < 2) {
                problems.emplace_back("sweep_min/sweep_step: size_scan needs integer sizes starting at 2 or more");
            }
            if (a.atom && spec.atom_site_fixed && a.atom->host_site > static_cast<int>(r.min)) {
                problems.emplace_back("atom_site: must not exceed the smallest size in the scan");
            }
            a.sites = std::max(2, static_cast<int>(r.min));
            if (a.atom && !spec.atom_site_fixed) a.atom->host_site = a.sites;
        } else {
            spec.sweep_param = "site";
        }
        append(problems, violations(a));
    } else {
        TwoCavitySystem& s = spec.two_cavity;
        s.omega_left = 1.0;
        s.omega_right = config.number("omega_r", 1.0);
        s.coupling = config.number("coupling", 0.05);
        s.left = read_reservoir(config, "l", s.omega_left, 0.5, problems);
        s.right = read_reservoir(config, "r", s.omega_right, 0.0, problems);
        s.atom = atom;
        if (config.has("sites")) problems.emplace_back("sites: only used by array experiments");
        append(problems, violations(s));
    }

    switch (experiment) {
    case Experiment::gamma_sweep: spec.sweep_param = "gamma"; break;
    case Experiment::chi_sweep:
    case Experiment::current_decomposition: spec.sweep_param = "chi"; break;
    case Experiment::rectification_sweep: {
        spec.sweep_param = config.raw("sweep_param").value_or("gamma_l");
        if (spec.sweep_param != "gamma_l" && spec.sweep_param != "chi") {
            problems.emplace_back("sweep_param: rectification_sweep sweeps gamma_l or chi");
        }
        if (atom && atom->sigma_z != -1.0) problems.emplace_back("sigma_z: rectification_sweep needs sigma_z = -1");
        break;
    }
    case Experiment::regime_table: {
        spec.sweep_param = "alpha";
        spec.alpha_values = config.numbers("alpha_values", {0.5, 1.0, 2.0});
        for (double a : spec.alpha_values) {
            if (!(a > 0.0)) problems.emplace_back("alpha_values: entries must be positive");
        }
        if (atom && !(spec.two_cavity.chi() > spec.two_cavity.omega_right)) {
            problems.emplace_back("chi: regime_table needs chi > omega_r");
        }
        if (!(spec.two_cavity.left.mean_occupation > spec.two_cavity.right.mean_occupation)) {
            problems.emplace_back("nbar_l: regime_table needs a hotter left reservoir");
        }
        break;
    }
    case Experiment::oracle_crosscheck: spec.sweep_param = "point"; break;
    default: break;
    }
    if (experiment != Experiment::rectification_sweep && config.has("sweep_param")) {
        problems.emplace_back("sweep_param: only used by rectification_sweep");
    }

    spec.fock.n_max = config.integer("n_max", spec.fock.n_max);
    // an explicit starting truncation raises the escalation cap with it
    spec.fock.n_max_limit = std::max(spec.fock.n_max_limit, spec.fock.n_max);
    spec.fock.tail_bound = config.number("fock_tail_bound", spec.fock.tail_bound);
    append(problems, fock::violations(spec.fock));
    spec.tolerances.analytic = config.number("crosscheck_tol_analytic", spec.tolerances.analytic);
    spec.tolerances.oracle = config.number("crosscheck_tol_oracle", spec.tolerances.oracle);
    spec.tolerances.floor = config.number("crosscheck_floor", spec.tolerances.floor);
    if (!(spec.tolerances.analytic > 0.0)) problems.emplace_back("crosscheck_tol_analytic: must be positive");
    if (!(spec.tolerances.oracle > 0.0)) problems.emplace_back("crosscheck_tol_oracle: must be positive");
    if (!(spec.tolerances.floor >= 0.0)) problems.emplace_back("crosscheck_floor: must be non-negative");

    if (!problems.empty()) throw ValidationError(std::move(problems));
    return spec;
}

ExperimentResult crosscheck(const TwoCavitySystem& system, const fock::FockConfig& fock,
                            const CrosscheckTolerances& tolerances)
{
    validate(system);
    const double w2 = system.omega_left * system.omega_left;

    const moments::AffineGenerator gen = moments::generator_matrix(system);
    const CurrentReport closed = analytic::current_general(system);
    const double closed_residual = moments::relative_residual(gen, closed_form_moments(system));

    const moments::MomentVector v = moments::steady_state(system);
    const CurrentReport mom = moments::currents_from_moments(system, v);
    const double mom_residual = moments::relative_residual(gen, v);

    const fock::OracleSolution sol = fock::solve_oracle(system, fock);
    const CurrentReport orc = fock::oracle_currents(system, sol.state);

    ExperimentResult result;
    const std::array<std::tuple<const char*, const CurrentReport*, double>, 3> paths{{
        {"analytic", &closed, closed_residual},
        {"moments", &mom, mom_residual},
        {"oracle", &orc, sol.residual},
    }};
    for (const auto& [label, report, residual] : paths) {
        ResultRow row;
        row.experiment = std::string(to_string(Experiment::oracle_crosscheck));
        row.param = "point";
        row.label = label;
        fill_currents(row, system, *report);
        row.residual = residual;
        result.rows.push_back(std::move(row));
        for (const auto& w : report->warnings) result.warnings.push_back(std::string(label) + ": " + w);
    }
    for (const auto& note : sol.notes) result.warnings.push_back("oracle: " + note);

    CrosscheckReport report;
    const double analytic_floor = analytic::kInsulatingBand * w2;
    const double oracle_floor = tolerances.floor * w2;
    report.pairs.push_back(compare("analytic", closed.left, "moments", mom.left, tolerances.analytic, analytic_floor));
    report.pairs.push_back(compare("analytic", closed.left, "oracle", orc.left, tolerances.oracle, oracle_floor));
    report.pairs.push_back(compare("moments", mom.left, "oracle", orc.left, tolerances.oracle, oracle_floor));
    for (const auto& p : report.pairs) {
        report.max_deviation = std::max(report.max_deviation, p.deviation);
        report.pass = report.pass && p.pass;
    }
    result.crosscheck = report;
    return result;
}

ExperimentResult run_experiment(const SweepSpec& spec, Execution policy)
{
    ExperimentResult result;
    switch (spec.experiment) {
    case Experiment::gamma_sweep: result.rows = run_gamma_sweep(spec, policy); break;
    case Experiment::chi_sweep: result.rows = run_chi_sweep(spec, policy, true); break;
    case Experiment::current_decomposition: result.rows = run_chi_sweep(spec, policy, false); break;
    case Experiment::rectification_sweep: result.rows = run_rectification_sweep(spec, policy); break;
    case Experiment::size_scan: result.rows = run_size_scan(spec, policy); break;
    case Experiment::profile: result.rows = run_profile(spec, policy); break;
    case Experiment::regime_table: result.rows = run_regime_table(spec, policy); break;
    case Experiment::oracle_crosscheck: result = crosscheck(spec.two_cavity, spec.fock, spec.tolerances); break;
    }
    return result;
}

} // namespace cavheat::cli
