// experiments.hpp: Named parameter sweeps and their tabular results
//
// Physical inputs are ratios to the left cavity frequency (omega_L = 1); for arrays the
// common cavity frequency is the reference.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cavheat/config.hpp"
#include "cavheat/fockoracle.hpp"
#include "cavheat/model.hpp"
#include "cavheat/parallel.hpp"

namespace cavheat::cli {

enum class Experiment {
    gamma_sweep,
    chi_sweep,
    current_decomposition,
    rectification_sweep,
    size_scan,
    profile,
    regime_table,
    oracle_crosscheck,
};

std::optional<Experiment> parse_experiment(std::string_view name);
std::string_view to_string(Experiment experiment);

enum class Format { csv, json };

std::optional<Format> parse_format(std::string_view name);

struct Range {
    double min{0.0};
    double max{0.0};
    double step{0.0};

    /// min + k step for k = 0.. while the value stays within max (up to rounding).
    std::vector<double> points() const;
};

std::vector<std::string> violations(const Range& range);

struct CrosscheckTolerances {
    double analytic{1e-10}; // analytic vs moments, relative
    double oracle{1e-6};    // oracle vs either, relative
    double floor{1e-6};     // absolute band (units of omega_L^2) for oracle pairs near zero current
};

struct SweepSpec {
    Experiment experiment{Experiment::gamma_sweep};
    TwoCavitySystem two_cavity;
    ArraySystem array;
    std::optional<Range> range;
    std::string sweep_param;     // swept quantity, e.g. "gamma", "chi", "gamma_l", "sites"
    bool atom_site_fixed{false}; // size_scan: keep atom_site instead of following the last site
    std::vector<double> alpha_values;
    fock::FockConfig fock;
    CrosscheckTolerances tolerances;
};

/// Builds a validated spec from a parameter file. Throws ValidationError listing
/// every problem found.
SweepSpec make_spec(Experiment experiment, const Config& config);

struct ResultRow {
    std::string experiment;
    std::string param;
    double value{0.0};
    std::string label;
    std::optional<double> sigma_z;
    std::optional<double> current_left;
    std::optional<double> current_right;
    std::optional<double> nondiagonal;
    std::optional<double> coherence;
    std::optional<double> ratio;
    std::optional<double> forward;
    std::optional<double> reverse;
    std::optional<double> alpha;
    std::optional<double> rectification;
    std::string rectification_divergence; // "below=<sign>inf;above=<sign>inf" when R diverges
    std::string regime;
    std::optional<double> occupation;
    double residual{0.0};
};

struct PairDeviation {
    std::string first;
    std::string second;
    double deviation{0.0}; // |a - b| / max(|a|, |b|), 0 when both vanish
    double difference{0.0};
    double tolerance{0.0};
    double floor{0.0};
    bool pass{true};
};

struct CrosscheckReport {
    std::vector<PairDeviation> pairs;
    double max_deviation{0.0};
    bool pass{true};
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<std::string> warnings;
    std::optional<CrosscheckReport> crosscheck;
};

/// Rows come back in sweep order whatever the policy. A failing point is named in the
/// rethrown error's message.
ExperimentResult run_experiment(const SweepSpec& spec, Execution policy = Execution::openmp);

/// Analytic, moment and oracle currents at one two-cavity point, with pairwise deviations.
/// A pair passes when its deviation is within tolerance or |a - b| is within the floor.
ExperimentResult crosscheck(const TwoCavitySystem& system, const fock::FockConfig& fock,
                            const CrosscheckTolerances& tolerances);

const std::vector<std::string>& csv_columns();

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
void write_json(std::ostream& out, Experiment experiment, const ExperimentResult& result);

/// Writes through a temporary file and renames it into place. Throws IoError.
void write_result(const std::string& path, Format format, Experiment experiment, const ExperimentResult& result);

/// %.17g, or an empty string for a missing or non-finite value.
std::string format_number(std::optional<double> value);

} // namespace cavheat::cli
