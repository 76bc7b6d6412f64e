// acceptance.cpp: One PASS/FAIL line per acceptance criterion; non-zero exit if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "cavheat/analytic2.hpp"
#include "cavheat/arrayn.hpp"
#include "cavheat/experiments.hpp"
#include "cavheat/fockoracle.hpp"
#include "cavheat/moments.hpp"
#include "test_common.hpp"

using namespace cavheat;
using testing::rel;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail)
{
    std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double moment_current(const TwoCavitySystem& s)
{
    return moments::currents_from_moments(s, moments::steady_state(s)).left;
}

CurrentReport oracle_report(const TwoCavitySystem& s)
{
    const auto sol = fock::solve_oracle(s);
    return fock::oracle_currents(s, sol.state);
}

cli::ExperimentResult run(cli::Experiment e, const std::string& config)
{
    return cli::run_experiment(cli::make_spec(e, cli::parse_config(config)));
}

// Index of the first row whose value changes sign relative to the previous one.
template <class F>
std::ptrdiff_t first_sign_change(const std::vector<cli::ResultRow>& rows, F value)
{
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if ((value(rows[i - 1]) > 0.0) != (value(rows[i]) > 0.0)) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
}

void criterion_1()
{
    const auto r = run(cli::Experiment::gamma_sweep, "coupling = 0.02\natom = yes\nchi = 0.05\nsigma_z = 1\n"
                                                     "nbar_l = 0.5\nnbar_r = 0\n"
                                                     "sweep_min = 0.001\nsweep_max = 0.2\nsweep_step = 0.001\n");
    const auto best = std::max_element(r.rows.begin(), r.rows.end(), [](const auto& a, const auto& b) {
        return *a.current_left < *b.current_left;
    });
    const double J = 0.02, chi = 0.05;
    const double g_peak = std::sqrt(4 * J * J + chi * chi);
    const double I_peak = J * J * (1.0 + chi / 2) * 0.5 / std::sqrt(4 * J * J + chi * chi);
    const auto s = testing::peak_point();
    const double e_an = rel(analytic::current_general(s).left, I_peak);
    const double e_mo = rel(moment_current(s), I_peak);
    const double e_or = rel(oracle_report(s).left, I_peak);
    const bool ok = std::abs(best->value - g_peak) <= 0.001 && e_an < 1e-10 && e_mo < 1e-10 && e_or < 1e-6;
    report(1, ok, "peak current at G = sqrt(4J^2 + chi^2)",
           fmt("argmax %.4f vs %.5f", best->value, g_peak) + fmt(", I_peak %.10f, rel err analytic %.1e", I_peak, e_an)
               + fmt(" moments %.1e oracle %.1e", e_mo, e_or));
}

void criterion_2()
{
    bool ok = true;
    double worst_exact = 0.0, worst_oracle = 0.0, min_excited = INFINITY;
    const std::vector<std::pair<double, double>> points{{1.0, 1.3}, {0.8, 1.1}, {1.2, 2.0}}; // (omega_R, chi)
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto [wr, chi] = points[k];
        const double gl = 0.1;
        auto s = testing::with_atom(testing::two_cavity(wr, 0.05, gl, 0.5, gl * (chi - wr), 0.0), chi, -1.0);
        worst_exact = std::max({worst_exact, std::abs(analytic::current_general(s).left), std::abs(moment_current(s))});
        if (k == 0) worst_oracle = std::abs(oracle_report(s).left);
        auto excited = s;
        excited.atom->sigma_z = 1.0;
        min_excited = std::min({min_excited, analytic::current_general(excited).left, moment_current(excited)});
        if (k == 0) min_excited = std::min(min_excited, oracle_report(excited).left);
    }
    ok = worst_exact < 1e-12 && worst_oracle < 1e-6 && min_excited > 0.0;
    report(2, ok, "thermal switch insulates at alpha = 1",
           fmt("max |I_L| analytic/moments %.1e, oracle %.1e, min I_L excited %.3e", worst_exact, worst_oracle,
               min_excited));
}

void criterion_3()
{
    const std::string base = "omega_r = 0.8\ncoupling = 0.05\ngamma_l = 0.1\ngamma_r = 0.03\nnbar_l = 0.5\nnbar_r = 0\n"
                             "atom = yes\nsweep_min = 0\nsweep_max = 3\nsweep_step = 0.01\n";
    const auto g = run(cli::Experiment::chi_sweep, base + "sigma_z = -1\n");
    const auto e = run(cli::Experiment::chi_sweep, base + "sigma_z = 1\n");
    const auto idx = first_sign_change(g.rows, [](const auto& r) { return *r.current_left; });
    const double crossing = idx > 0 ? g.rows[static_cast<std::size_t>(idx)].value : NAN;
    bool negative_beyond = true;
    for (const auto& r : g.rows) {
        if (r.value > 1.1 + 0.01 && !(*r.current_left < 0.0)) negative_beyond = false;
    }
    bool excited_positive = true;
    for (const auto& r : e.rows) excited_positive = excited_positive && *r.current_left > 0.0;
    const bool ok = std::abs(crossing - 1.1) <= 0.01 && negative_beyond && excited_positive;
    report(3, ok, "current reversal beyond chi = 1.1",
           fmt("sign change at chi = %.2f, I_L < 0 beyond: %g, excited I_L > 0 everywhere: %g", crossing,
               negative_beyond, excited_positive));
}

void criterion_4()
{
    const auto r = run(cli::Experiment::current_decomposition,
                       "omega_r = 1\ncoupling = 0.05\ngamma_l = 0.1\ngamma_r = 0.03\nnbar_l = 0.5\nnbar_r = 0\n"
                       "atom = yes\nsigma_z = -1\nsweep_min = 0\nsweep_max = 3\nsweep_step = 0.01\n");
    double worst = 0.0;
    for (const auto& row : r.rows) {
        worst = std::max(worst, std::abs(*row.current_left - 0.1 * (*row.nondiagonal - *row.coherence)));
    }
    const auto zi = first_sign_change(r.rows, [](const auto& x) { return *x.current_left; });
    const auto zd = first_sign_change(r.rows, [](const auto& x) { return *x.nondiagonal - *x.coherence; });
    const bool ok = worst < 1e-12 && zi > 0 && std::abs(zi - zd) <= 1;
    report(4, ok, "I_L = G_L (I_nd - I_coh) and the zeros coincide",
           fmt("max deviation %.1e, I_L zero at chi = %.2f, I_nd = I_coh at chi = %.2f", worst,
               zi > 0 ? r.rows[static_cast<std::size_t>(zi)].value : NAN,
               zd > 0 ? r.rows[static_cast<std::size_t>(zd)].value : NAN));
}

void criterion_5()
{
    double worst_unity = 0.0;
    // G_L = G_R
    for (double chi : {0.0, 0.4, 1.5, 2.7}) {
        const auto s = testing::with_atom(testing::two_cavity(1.0, 0.05, 0.17, 0.5, 0.17, 0.0), chi, -1.0);
        worst_unity = std::max(worst_unity, std::abs(analytic::rectification(s).value - 1.0));
    }
    // omega_L = |omega_R - chi| on both branches
    const std::vector<std::pair<double, double>> branch{{1.5, 0.5}, {1.0, 2.0}, {1.3, 2.3}}; // (omega_R, chi)
    for (const auto& [wr, chi] : branch) {
        const auto s = testing::with_atom(testing::two_cavity(wr, 0.05, 0.1, 0.5, 0.2, 0.0), chi, -1.0);
        worst_unity = std::max(worst_unity, std::abs(analytic::rectification(s).value - 1.0));
    }

    auto s = testing::with_atom(testing::two_cavity(1.0, 0.05, 0.1, 0.5, 0.2, 0.0), 1.5, -1.0);
    double min_abs = INFINITY;
    for (int k = -100; k <= 100; ++k) {
        if (k == 0) continue;
        s.left.rate = 0.1 + k * 1e-5;
        min_abs = std::min(min_abs, std::abs(analytic::rectification(s).value));
    }
    s.left.rate = 0.1 - 1e-4;
    const double below = analytic::rectification(s).value;
    s.left.rate = 0.1 + 1e-4;
    const double above = analytic::rectification(s).value;
    s.left.rate = 0.1;
    const auto at = analytic::rectification(s);
    const bool ok = worst_unity < 1e-12 && min_abs > 100.0 && below < 0.0 && above > 0.0 && at.divergent;
    report(5, ok, "rectification: R = 1 cases and divergence at G_L = 0.1",
           fmt("max |R - 1| over unity cases %.3e, min |R| in window %.1f", worst_unity, min_abs)
               + fmt(", R(0.1 -+ 1e-4) = %.1f / %.1f", below, above));
}

void criterion_6()
{
    const double I0 = analytic::ballistic_current(1.0, 0.05, 0.15, 0.15, 0.5);
    double worst = 0.0, worst_re = 0.0, worst_display = 0.0;
    for (int n = 2; n <= 10; ++n) {
        const auto a = testing::chain(n, 0.0, -1.0, 0);
        const auto G = arrayn::steady_state_matrix(a);
        const double I = arrayn::array_current(a, G);
        worst = std::max(worst, std::abs(I - I0));
        worst_display = std::max(worst_display, std::abs(I - 0.0115385));
        for (int j = 0; j + 1 < n; ++j) worst_re = std::max(worst_re, std::abs(G.G(j, j + 1).real()));
    }
    report(6, worst <= 1e-8 && worst_re < 1e-10, "atom-free array current independent of N",
           fmt("I_0 = %.13f, max |I_L(N) - I_0| %.1e, max |Re <a_j^+ a_j+1>| %.1e", I0, worst, worst_re)
               + fmt(", max distance from the 6-digit display 0.0115385: %.1e", worst_display));
}

void criterion_7()
{
    std::vector<std::vector<arrayn::SizeScanRow>> scans;
    for (double chi : {0.1, 0.15}) scans.push_back(arrayn::size_scan(testing::chain(2, chi, -1.0, 2), 2, 12));
    bool decreasing = true, shrinking = true, ordered = true;
    for (const auto& rows : scans) {
        for (int n = 3; n <= 6; ++n) decreasing = decreasing && rows[n - 2].ratio < rows[n - 3].ratio;
        for (int n = 7; n <= 12; ++n) {
            const double inc = std::abs(rows[n - 2].current - rows[n - 3].current);
            const double prev = std::abs(rows[n - 3].current - rows[n - 4].current);
            shrinking = shrinking && inc < prev;
        }
    }
    for (std::size_t i = 0; i < scans[0].size(); ++i) ordered = ordered && scans[1][i].ratio < scans[0][i].ratio;
    report(7, decreasing && shrinking && ordered, "size dependence and saturation with the atom at m = N",
           fmt("I/I0 chi=0.1: N=2 %.6f, N=6 %.6f, N=12 %.6f", scans[0][0].ratio, scans[0][4].ratio, scans[0][10].ratio)
               + fmt("; chi=0.15: N=2 %.6f, N=12 %.6f", scans[1][0].ratio, scans[1][10].ratio)
               + fmt("; decreasing %g, shrinking %g, ordered %g", decreasing, shrinking, ordered));
}

void criterion_8()
{
    auto interior = [](int n) {
        const auto a = testing::chain(n, 0.1, -1.0, n);
        const auto occ = arrayn::occupation_profile(a, arrayn::steady_state_matrix(a));
        return std::vector<double>(occ.begin() + 1, occ.end() - 1); // sites 2..N-1
    };
    const auto p6 = interior(6);
    const auto p12 = interior(12);
    bool monotone = true;
    for (std::size_t j = 1; j < p6.size(); ++j) monotone = monotone && p6[j] < p6[j - 1];
    const double drop6 = p6.front() - p6.back();
    const double drop12 = p12.front() - p12.back();
    // mid-chain gradient (sites 3..N-2), away from both boundary cavities
    const double mid6 = p6[1] - p6[p6.size() - 2];
    const double mid12 = p12[1] - p12[p12.size() - 2];
    report(8, monotone && drop6 > 10.0 * drop12, "interior occupation drop, N = 6 vs N = 12",
           fmt("drop N=6 %.6f, drop N=12 %.6f, ratio %.3f", drop6, drop12, drop6 / drop12)
               + fmt("; monotone %g; sites 3..N-2: %.2e vs %.2e", monotone, mid6, mid12));
}

void criterion_9()
{
    const auto s = testing::two_cavity(1.0, 0.05, 0.1, 0.5, 0.1, 0.5);
    fock::FockConfig cfg;
    cfg.n_max = 12;
    const auto sol = fock::solve_oracle(s, cfg);
    const auto rl = fock::reduced_left(sol.state);
    const auto rr = fock::reduced_right(sol.state);
    const double fl = fock::thermal_fidelity(rl, 0.5);
    const double fr = fock::thermal_fidelity(rr, 0.5);
    const double gl = fock::g2_zero(rl).value_or(NAN);
    const double gr = fock::g2_zero(rr).value_or(NAN);
    const bool ok = sol.state.n_max >= 12 && fl > 1.0 - 1e-6 && fr > 1.0 - 1e-6 && std::abs(gl - 2.0) < 1e-3
                    && std::abs(gr - 2.0) < 1e-3;
    report(9, ok, "equilibrium fidelity and g2",
           fmt("1 - F = %.1e / %.1e", 1.0 - fl, 1.0 - fr) + fmt(", g2 = %.6f / %.6f", gl, gr)
               + fmt(", n_max %.0f", sol.state.n_max));
}

void criterion_10()
{
    std::mt19937_64 rng(1234567);
    double worst_am = 0.0, worst_mo = 0.0, worst_sum = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto s = testing::random_point(rng);
        const auto a = analytic::current_general(s);
        const auto m = moments::currents_from_moments(s, moments::steady_state(s));
        const auto o = oracle_report(s);
        worst_am = std::max(worst_am, rel(a.left, m.left));
        worst_mo = std::max(worst_mo, rel(m.left, o.left));
        worst_sum = std::max({worst_sum, std::abs(a.left + a.right), std::abs(m.left + m.right),
                              std::abs(o.left + o.right)});
    }
    report(10, worst_am < 1e-10 && worst_mo < 1e-6 && worst_sum < 1e-10, "three-path equivalence on 50 random points",
           fmt("max rel analytic-moments %.1e, moments-oracle %.1e, max |I_L + I_R| %.1e", worst_am, worst_mo,
               worst_sum));
}

template <class F>
void guarded(int id, F f)
{
    try {
        f();
    } catch (const std::exception& e) {
        report(id, false, "raised an exception", e.what());
    }
}

} // namespace

int main()
{
    guarded(1, criterion_1);
    guarded(2, criterion_2);
    guarded(3, criterion_3);
    guarded(4, criterion_4);
    guarded(5, criterion_5);
    guarded(6, criterion_6);
    guarded(7, criterion_7);
    guarded(8, criterion_8);
    guarded(9, criterion_9);
    guarded(10, criterion_10);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
