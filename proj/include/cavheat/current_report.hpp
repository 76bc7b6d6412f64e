// current_report.hpp: Heat-current summary shared by the analytic, moment and Fock paths

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cavheat {

enum class Regime { conducting, insulating, reversed };

std::string_view to_string(Regime regime);

struct CurrentReport {
    double left{0.0};          // I_L, energy flow from the left reservoir into the system
    double right{0.0};         // I_R
    double nondiagonal{0.0};   // I_nd = (nbar_L - <a_L^+ a_L>) omega_L
    double coherence{0.0};     // I_coh = (J/2)(<a_L^+ a_R> + <a_L a_R^+>)
    std::optional<double> alpha;
    std::optional<Regime> regime; // set only when nbar_L > nbar_R
    std::vector<std::string> warnings;
};

// Sign classification of I_L for a hot left reservoir. |I_L| <= zero_band counts as insulating.
Regime regime_from_current(double left_current, double zero_band);

} // namespace cavheat
