// model.hpp: Parameter records, thermal occupation and validation for every solver path
//
// Units: hbar = k_B = 1. Frequencies, rates and couplings are angular frequencies;
// the CLI enters all of them as ratios to the reference frequency (omega_L for the
// two-cavity system, omega for the array).

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavheat {

/// Dispersively coupled two-level atom.
struct AtomSpec {
    double transition_frequency{2.0}; // omega_0
    double dispersive_strength{0.0};  // chi, shifts the host cavity by chi * <sigma_z>
    double sigma_z{-1.0};             // conserved <sigma_z>, in [-1, 1]
    int host_site{2};                 // 1-based; fixed to 2 (right cavity) for TwoCavitySystem
};

/// Thermal reservoir attached to a boundary cavity.
struct ReservoirSpec {
    double rate{0.1};            // Gamma
    double mean_occupation{0.0}; // nbar
};

struct TwoCavitySystem {
    double omega_left{1.0};
    double omega_right{1.0};
    double coupling{0.0}; // J
    ReservoirSpec left;
    ReservoirSpec right;
    std::optional<AtomSpec> atom;

    double mean_rate() const { return 0.5 * (left.rate + right.rate); } // gamma
    double detuning() const { return omega_left - omega_right; }       // Delta_c
    double chi() const { return atom ? atom->dispersive_strength : 0.0; }
    double sigma_z() const { return atom ? atom->sigma_z : 0.0; }
    double occupation_bias() const { return left.mean_occupation - right.mean_occupation; }
};

/// Uniform N-site chain; reservoirs attach to sites 1 and N.
struct ArraySystem {
    int sites{2};
    double omega{1.0};
    double coupling{0.0};
    ReservoirSpec left;
    ReservoirSpec right;
    std::optional<AtomSpec> atom;

    double chi() const { return atom ? atom->dispersive_strength : 0.0; }
    double sigma_z() const { return atom ? atom->sigma_z : 0.0; }
    int atom_site() const { return atom ? atom->host_site : 0; }
};

/// Bose-Einstein occupation 1/(exp(omega/T) - 1); zero at T = 0.
double bose_occupation(double omega, double temperature);

/// Thrown when a parameter record violates its invariants. Carries every violation.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Solver failures (singular generators, residual breaches, truncation overflow).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One "<field>: <message>" diagnostic per violated invariant; empty when valid.
std::vector<std::string> violations(const TwoCavitySystem& system);
std::vector<std::string> violations(const ArraySystem& system);

// Return the system unchanged or throw ValidationError with the full list.
const TwoCavitySystem& validate(const TwoCavitySystem& system);
const ArraySystem& validate(const ArraySystem& system);

/// Two-cavity system obtained by exchanging the reservoirs (occupations and rates).
TwoCavitySystem with_swapped_reservoirs(const TwoCavitySystem& system);

/// The N = 2 array viewed as a two-cavity system; requires the atom (if any) on site 2.
TwoCavitySystem as_two_cavity(const ArraySystem& system);

} // namespace cavheat
