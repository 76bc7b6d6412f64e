// analytic2.hpp: Closed-form steady state, heat currents, switch regimes and
// rectification for two coupled cavities with a dispersive atom in the right cavity

#pragma once

#include <complex>

#include "cavheat/current_report.hpp"
#include "cavheat/model.hpp"

namespace cavheat::analytic {

// |alpha - 1| below this is the insulating point.
inline constexpr double kInsulatingBand = 1e-12;

struct SteadyMoments {
    double n_left{0.0};
    double n_right{0.0};
    double bias{0.0};                   // deltaN = n_left - n_right
    std::complex<double> coherence{};   // <a_L^+ a_R>; <a_L a_R^+> is its conjugate
    double auxiliary{0.0};              // C, the inter-cavity transfer constant
};

SteadyMoments steady_moments(const TwoCavitySystem& system);

/// Full non-resonant current. I_nd and I_coh come from steady_moments.
CurrentReport current_general(const TwoCavitySystem& system);

/// 4 omega J^2 G_L G_R dn / ((4J^2 + G_L G_R)(G_L + G_R)): resonant cavities, no atom.
/// Also the size-independent current of an atom-free chain of any length.
double ballistic_current(double omega, double coupling, double rate_left, double rate_right,
                         double occupation_bias);

double current_resonant_no_atom(const TwoCavitySystem& system);
double current_resonant_with_atom(const TwoCavitySystem& system);

/// Equal reservoir rate that maximises the resonant current: sqrt(4J^2 + chi^2).
double peak_rate(const TwoCavitySystem& system);

struct RegimeClassification {
    double alpha{0.0};
    Regime regime{Regime::conducting};
};

/// alpha = (G_R/G_L) / ((chi - omega_R)/omega_L) and the sign of I_L for <sigma_z> = +-1.
RegimeClassification classify_regime(const TwoCavitySystem& system);

/// Current with the atom pinned to <sigma_z> = sign (sign = +1 or -1).
double current_pm(const TwoCavitySystem& system, int sign);

struct ForwardReverse {
    double forward{0.0};
    double reverse{0.0}; // reservoirs exchanged; negative for a conventional flow
};

/// Atom in the ground state. The reverse current is the left-reservoir current
/// after exchanging (nbar_L, G_L) with (nbar_R, G_R).
ForwardReverse forward_reverse_currents(const TwoCavitySystem& system);

/// R = -I_f / I_r. A vanishing denominator is returned as a tagged divergence:
/// the limit of R as G_L approaches the divergence from below and from above.
struct Rectification {
    double value{1.0};
    bool divergent{false};
    int sign_below{0};
    int sign_above{0};
};

Rectification rectification(const TwoCavitySystem& system);

} // namespace cavheat::analytic
