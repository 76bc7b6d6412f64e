// model.cpp: Thermal occupation and parameter validation

#include "cavheat/model.hpp"

#include <cmath>

namespace cavheat {

namespace {

std::string join(const std::vector<std::string>& items)
{
    std::string out = "invalid parameters";
    for (const auto& item : items) {
        out += "; ";
        out += item;
    }
    return out;
}

void check_frequency(std::vector<std::string>& out, const char* field, double value)
{
    if (!std::isfinite(value) || value <= 0.0) {
        out.push_back(std::string(field) + ": frequency must be positive");
    }
}

void check_coupling(std::vector<std::string>& out, const char* field, double value)
{
    if (!std::isfinite(value) || value < 0.0) {
        out.push_back(std::string(field) + ": coupling must be non-negative");
    }
}

void check_reservoir(std::vector<std::string>& out, const std::string& prefix, const ReservoirSpec& r)
{
    if (!std::isfinite(r.rate) || r.rate <= 0.0) {
        out.push_back(prefix + ".rate: rate must be positive");
    }
    if (!std::isfinite(r.mean_occupation) || r.mean_occupation < 0.0) {
        out.push_back(prefix + ".mean_occupation: occupation must be non-negative");
    }
}

void check_atom(std::vector<std::string>& out, const AtomSpec& atom)
{
    check_frequency(out, "atom.transition_frequency", atom.transition_frequency);
    if (!std::isfinite(atom.dispersive_strength) || atom.dispersive_strength < 0.0) {
        out.push_back("atom.dispersive_strength: dispersive strength must be non-negative");
    }
    if (!std::isfinite(atom.sigma_z) || atom.sigma_z < -1.0 || atom.sigma_z > 1.0) {
        out.push_back("atom.sigma_z: <sigma_z> must lie in [-1, 1]");
    }
}

} // namespace

double bose_occupation(double omega, double temperature)
{
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw std::invalid_argument("bose_occupation: frequency must be positive");
    }
    if (!(temperature >= 0.0)) {
        throw std::invalid_argument("bose_occupation: temperature must be non-negative");
    }
    if (temperature == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::invalid_argument(join(violations)), violations_(std::move(violations))
{
}

std::vector<std::string> violations(const TwoCavitySystem& system)
{
    std::vector<std::string> out;
    check_frequency(out, "omega_left", system.omega_left);
    check_frequency(out, "omega_right", system.omega_right);
    check_coupling(out, "coupling", system.coupling);
    check_reservoir(out, "left_reservoir", system.left);
    check_reservoir(out, "right_reservoir", system.right);
    if (system.atom) {
        check_atom(out, *system.atom);
        if (system.atom->host_site != 2) {
            out.push_back("atom.host_site: the two-cavity atom sits in the right cavity (site 2)");
        }
    }
    return out;
}

std::vector<std::string> violations(const ArraySystem& system)
{
    std::vector<std::string> out;
    if (system.sites < 2) {
        out.push_back("sites: array needs at least 2 sites");
    }
    check_frequency(out, "omega", system.omega);
    check_coupling(out, "coupling", system.coupling);
    check_reservoir(out, "left_reservoir", system.left);
    check_reservoir(out, "right_reservoir", system.right);
    if (system.atom) {
        check_atom(out, *system.atom);
        if (system.atom->host_site < 1 || system.atom->host_site > system.sites) {
            out.push_back("atom.host_site: host index must lie in [1, N]");
        }
    }
    return out;
}

const TwoCavitySystem& validate(const TwoCavitySystem& system)
{
    auto found = violations(system);
    if (!found.empty()) throw ValidationError(std::move(found));
    return system;
}

const ArraySystem& validate(const ArraySystem& system)
{
    auto found = violations(system);
    if (!found.empty()) throw ValidationError(std::move(found));
    return system;
}

TwoCavitySystem with_swapped_reservoirs(const TwoCavitySystem& system)
{
    TwoCavitySystem swapped = system;
    std::swap(swapped.left, swapped.right);
    return swapped;
}

TwoCavitySystem as_two_cavity(const ArraySystem& system)
{
    if (system.sites != 2) {
        throw std::invalid_argument("as_two_cavity: array must have exactly 2 sites");
    }
    if (system.atom && system.atom->host_site != 2) {
        throw std::invalid_argument("as_two_cavity: atom must sit on site 2");
    }
    TwoCavitySystem out;
    out.omega_left = system.omega;
    out.omega_right = system.omega;
    out.coupling = system.coupling;
    out.left = system.left;
    out.right = system.right;
    out.atom = system.atom;
    return out;
}

} // namespace cavheat
