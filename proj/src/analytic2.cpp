// analytic2.cpp: Closed-form two-cavity steady state and currents

#include "cavheat/analytic2.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cavheat {

std::string_view to_string(Regime regime)
{
    switch (regime) {
    case Regime::conducting: return "conducting";
    case Regime::insulating: return "insulating";
    case Regime::reversed: return "reversed";
    }
    return "unknown";
}

Regime regime_from_current(double left_current, double zero_band)
{
    if (std::abs(left_current) <= zero_band) return Regime::insulating;
    return left_current > 0.0 ? Regime::conducting : Regime::reversed;
}

namespace analytic {

namespace {

struct Shared {
    double gamma;
    double detuning;
    double chi;
    double sz;
    double denominator; // (chi^2 - D^2 + g^2)^2 + 4 g^2 D^2
};

Shared shared_terms(const TwoCavitySystem& s)
{
    Shared t{};
    t.gamma = s.mean_rate();
    t.detuning = s.detuning();
    t.chi = s.chi();
    t.sz = s.sigma_z();
    const double re = t.chi * t.chi - t.detuning * t.detuning + t.gamma * t.gamma;
    t.denominator = re * re + 4.0 * t.gamma * t.gamma * t.detuning * t.detuning;
    return t;
}

double transfer_constant(const TwoCavitySystem& s, const Shared& t)
{
    const double J = s.coupling;
    const double numer = t.detuning * t.detuning + t.chi * t.chi
                         + 2.0 * t.detuning * t.chi * t.sz + t.gamma * t.gamma;
    return 2.0 * J * J * t.gamma * numer / t.denominator;
}

double steady_bias(const TwoCavitySystem& s, double C)
{
    const double gl = s.left.rate;
    const double gr = s.right.rate;
    return gl * gr * s.occupation_bias() / (C * (gl + gr) + gl * gr);
}

void require_resonant(const TwoCavitySystem& s, const char* where)
{
    if (std::abs(s.detuning()) > 1e-12 * s.omega_left) {
        throw std::invalid_argument(std::string(where) + ": requires resonant cavities (omega_L == omega_R)");
    }
}

// Current with <sigma_z> pinned to +-1, shared by current_pm and the forward/reverse pair.
double pinned_current(const TwoCavitySystem& s, int sign)
{
    TwoCavitySystem pinned = s;
    pinned.atom->sigma_z = static_cast<double>(sign);
    const Shared t = shared_terms(pinned);
    const double dN = steady_bias(pinned, transfer_constant(pinned, t));
    const double omega_mix = s.omega_left * s.right.rate + s.left.rate * (s.omega_right + sign * t.chi);
    const double shifted = t.detuning + sign * t.chi;
    const double J = s.coupling;
    return J * J * dN * omega_mix / t.denominator * (shifted * shifted + t.gamma * t.gamma);
}

} // namespace

SteadyMoments steady_moments(const TwoCavitySystem& system)
{
    const Shared t = shared_terms(system);
    const double C = transfer_constant(system, t);
    const double gl = system.left.rate;
    const double gr = system.right.rate;
    const double nl = system.left.mean_occupation;
    const double nr = system.right.mean_occupation;
    const double denom = C * (gl + gr) + gl * gr;

    SteadyMoments m;
    m.auxiliary = C;
    m.n_left = (C * (gl * nl + gr * nr) + gl * gr * nl) / denom;
    m.n_right = (C * (gl * nl + gr * nr) + gl * gr * nr) / denom;
    m.bias = gl * gr * (nl - nr) / denom;

    const std::complex<double> numer(t.chi * t.sz + t.detuning, t.gamma);
    const std::complex<double> denom_c(t.chi * t.chi - t.detuning * t.detuning + t.gamma * t.gamma,
                                       -2.0 * t.gamma * t.detuning);
    m.coherence = -system.coupling * numer / denom_c * m.bias;
    return m;
}

CurrentReport current_general(const TwoCavitySystem& system)
{
    const Shared t = shared_terms(system);
    const SteadyMoments m = steady_moments(system);
    const double J = system.coupling;
    const double gl = system.left.rate;
    const double gr = system.right.rate;
    const double wl = system.omega_left;
    const double wr = system.omega_right;
    const double D = t.detuning;
    const double chi = t.chi;
    const double g = t.gamma;

    const double numer = gl * chi * t.sz * (chi * chi - D * D + g * g)
                         + (wl * gr + wr * gl) * (D * D + g * g)
                         + chi * chi * (2.0 * wl * g + D * gl)
                         + 4.0 * D * chi * t.sz * wl * g;

    CurrentReport report;
    report.left = J * J * m.bias * numer / t.denominator;
    report.right = -report.left;
    report.nondiagonal = (system.left.mean_occupation - m.n_left) * wl;
    report.coherence = J * m.coherence.real(); // (J/2)(x + conj(x))
    if (system.atom && chi != wr) {
        report.alpha = (gr / gl) / ((chi - wr) / wl);
    }
    if (system.occupation_bias() > 0.0) {
        report.regime = regime_from_current(report.left, 1e-12 * wl * wl * system.occupation_bias());
    }
    return report;
}

double ballistic_current(double omega, double coupling, double rate_left, double rate_right,
                         double occupation_bias)
{
    const double J2 = coupling * coupling;
    return 4.0 * omega * J2 * rate_left * rate_right * occupation_bias
           / ((4.0 * J2 + rate_left * rate_right) * (rate_left + rate_right));
}

double current_resonant_no_atom(const TwoCavitySystem& system)
{
    require_resonant(system, "current_resonant_no_atom");
    if (system.atom) {
        throw std::invalid_argument("current_resonant_no_atom: system carries an atom");
    }
    return ballistic_current(system.omega_left, system.coupling, system.left.rate, system.right.rate,
                             system.occupation_bias());
}

double current_resonant_with_atom(const TwoCavitySystem& system)
{
    require_resonant(system, "current_resonant_with_atom");
    if (!system.atom) {
        throw std::invalid_argument("current_resonant_with_atom: system has no atom");
    }
    const double J = system.coupling;
    const double gl = system.left.rate;
    const double gr = system.right.rate;
    const double g = system.mean_rate();
    const double chi = system.chi();
    const double cbar = 2.0 * J * J * g / (chi * chi + g * g);
    const double theta = gl * gr / (cbar * (gl + gr) + gl * gr);
    return theta * (cbar / g) * (g * system.omega_left + 0.5 * gl * chi * system.sigma_z())
           * system.occupation_bias();
}

double peak_rate(const TwoCavitySystem& system)
{
    const double J = system.coupling;
    const double chi = system.chi();
    return std::sqrt(4.0 * J * J + chi * chi);
}

RegimeClassification classify_regime(const TwoCavitySystem& system)
{
    if (!system.atom) {
        throw std::invalid_argument("classify_regime: switching needs an atom");
    }
    const double sz = system.atom->sigma_z;
    if (sz != 1.0 && sz != -1.0) {
        throw std::invalid_argument("classify_regime: <sigma_z> must be +1 or -1");
    }
    if (!(system.occupation_bias() > 0.0)) {
        throw std::invalid_argument("classify_regime: requires nbar_L > nbar_R");
    }
    const double chi = system.atom->dispersive_strength;
    if (!(chi > system.omega_right)) {
        throw std::invalid_argument(
            "classify_regime: switching analysis assumes chi > omega_R (shifted right cavity below zero)");
    }

    RegimeClassification out;
    out.alpha = (system.right.rate / system.left.rate) / ((chi - system.omega_right) / system.omega_left);
    if (sz > 0.0) {
        out.regime = Regime::conducting;
    } else if (std::abs(out.alpha - 1.0) < kInsulatingBand) {
        out.regime = Regime::insulating;
    } else {
        out.regime = out.alpha > 1.0 ? Regime::conducting : Regime::reversed;
    }
    return out;
}

double current_pm(const TwoCavitySystem& system, int sign)
{
    if (!system.atom) {
        throw std::invalid_argument("current_pm: system has no atom");
    }
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("current_pm: sign must be +1 or -1");
    }
    return pinned_current(system, sign);
}

ForwardReverse forward_reverse_currents(const TwoCavitySystem& system)
{
    if (!system.atom) {
        throw std::invalid_argument("forward_reverse_currents: system has no atom");
    }
    if (system.atom->sigma_z != -1.0) {
        throw std::invalid_argument("forward_reverse_currents: atom must be in its ground state");
    }
    const Shared t = shared_terms(system);
    const double dN = steady_bias(system, transfer_constant(system, t));
    const double J = system.coupling;
    const double shifted = t.detuning - t.chi;
    const double common = J * J * dN / t.denominator * (shifted * shifted + t.gamma * t.gamma);
    const double wl = system.omega_left;
    const double wr = system.omega_right;

    ForwardReverse out;
    out.forward = common * (wl * system.right.rate + system.left.rate * (wr - t.chi));
    out.reverse = -common * (wl * system.left.rate + system.right.rate * (wr - t.chi));
    return out;
}

Rectification rectification(const TwoCavitySystem& system)
{
    if (!system.atom) {
        throw std::invalid_argument("rectification: system has no atom");
    }
    const double wl = system.omega_left;
    const double shifted = system.omega_right - system.chi();
    const double numer = wl * system.right.rate + system.left.rate * shifted;
    const double denom = wl * system.left.rate + system.right.rate * shifted;

    Rectification out;
    if (denom != 0.0) {
        out.value = numer / denom;
        return out;
    }
    if (numer == 0.0) {
        // Both currents vanish; only reachable with G_L == G_R, where R == 1.
        out.value = 1.0;
        return out;
    }
    // denom = omega_L (G_L - G_L*): negative below the divergence, positive above.
    const int s = numer > 0.0 ? 1 : -1;
    out.divergent = true;
    out.sign_below = -s;
    out.sign_above = s;
    out.value = std::numeric_limits<double>::infinity();
    return out;
}

} // namespace analytic
} // namespace cavheat
