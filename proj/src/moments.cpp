// moments.cpp: Moment generator, steady-state solve and RK4 evolution

#include "cavheat/moments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Eigenvalues>

namespace cavheat::moments {

namespace {

constexpr Complex kI{0.0, 1.0};

} // namespace

AffineGenerator generator_matrix(const TwoCavitySystem& system)
{
    const double J = system.coupling;
    const double gl = system.left.rate;
    const double gr = system.right.rate;
    const double g = system.mean_rate();
    const double D = system.detuning();
    const double chi = system.chi();
    const double sz = system.sigma_z();
    const double nl = system.left.mean_occupation;
    const double nr = system.right.mean_occupation;

    AffineGenerator gen;
    auto& A = gen.A;
    auto& b = gen.b;

    // Field sector and its sigma_z-weighted copy share the same hopping and damping;
    // chi couples the two coherence rows.
    for (int sector = 0; sector < 2; ++sector) {
        const int o = 4 * sector;
        const int partner = 4 * (1 - sector);
        const double drive = sector == 0 ? 1.0 : sz;

        A(o + kNLeft, o + kCoherenceConj) += kI * J;
        A(o + kNLeft, o + kCoherence) -= kI * J;
        A(o + kNLeft, o + kNLeft) -= gl;
        b(o + kNLeft) = gl * nl * drive;

        A(o + kNRight, o + kCoherenceConj) -= kI * J;
        A(o + kNRight, o + kCoherence) += kI * J;
        A(o + kNRight, o + kNRight) -= gr;
        b(o + kNRight) = gr * nr * drive;

        A(o + kCoherence, o + kCoherence) += kI * D - g;
        A(o + kCoherence, o + kNLeft) -= kI * J;
        A(o + kCoherence, o + kNRight) += kI * J;
        A(o + kCoherence, partner + kCoherence) -= kI * chi;

        A(o + kCoherenceConj, o + kCoherenceConj) += -kI * D - g;
        A(o + kCoherenceConj, o + kNLeft) += kI * J;
        A(o + kCoherenceConj, o + kNRight) -= kI * J;
        A(o + kCoherenceConj, partner + kCoherenceConj) += kI * chi;
    }
    return gen;
}

double relative_residual(const AffineGenerator& gen, const MomentVector& v)
{
    const double r = (gen.A * v.values + gen.b).norm();
    const double scale = gen.b.norm();
    return scale > 0.0 ? r / scale : r;
}

MomentVector steady_state(const TwoCavitySystem& system)
{
    validate(system);
    const AffineGenerator gen = generator_matrix(system);
    Eigen::FullPivLU<Matrix8> lu(gen.A);
    if (!lu.isInvertible()) {
        throw SolverError("moments::steady_state: no unique steady state (singular moment generator)");
    }
    MomentVector v;
    v.sigma_z = system.sigma_z();
    v.values = lu.solve(-gen.b);

    const double res = relative_residual(gen, v);
    if (!(res < kResidualTolerance)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "moments::steady_state: relative residual %.3e exceeds %.0e", res,
                      kResidualTolerance);
        throw SolverError(buf);
    }
    return v;
}

MomentVector vacuum(const TwoCavitySystem& system)
{
    MomentVector v;
    v.sigma_z = system.sigma_z();
    return v;
}

Trajectory evolve(const TwoCavitySystem& system, const MomentVector& initial, double t_final, double dt,
                  int record_every)
{
    if (!(dt > 0.0) || !(t_final >= dt)) {
        throw std::invalid_argument("moments::evolve: need dt > 0 and t_final >= dt");
    }
    if (record_every < 1) record_every = 1;

    const AffineGenerator gen = generator_matrix(system);
    Trajectory traj;

    const double spectral = gen.A.eigenvalues().cwiseAbs().maxCoeff();
    if (dt * spectral >= 0.1) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "step size dt*max|eig(A)| = %.3g exceeds the recommended 0.1", dt * spectral);
        traj.warnings.emplace_back(buf);
    }

    auto rhs = [&gen](const Vector8& x) -> Vector8 { return gen.A * x + gen.b; };

    const auto steps = static_cast<long long>(std::ceil(t_final / dt - 1e-9));
    Vector8 x = initial.values;
    double t = 0.0;
    traj.times.push_back(t);
    traj.states.push_back(initial);

    for (long long k = 1; k <= steps; ++k) {
        const double h = (k == steps) ? t_final - t : dt;
        const Vector8 k1 = rhs(x);
        const Vector8 k2 = rhs(x + 0.5 * h * k1);
        const Vector8 k3 = rhs(x + 0.5 * h * k2);
        const Vector8 k4 = rhs(x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = (k == steps) ? t_final : t + h;
        if (k % record_every == 0 || k == steps) {
            MomentVector state;
            state.values = x;
            state.sigma_z = initial.sigma_z;
            traj.times.push_back(t);
            traj.states.push_back(state);
        }
    }
    return traj;
}

CurrentReport currents_from_moments(const TwoCavitySystem& system, const MomentVector& v)
{
    const double J = system.coupling;
    const double chi = system.chi();
    const double sz = v.sigma_z;

    CurrentReport report;
    report.nondiagonal = (system.left.mean_occupation - v.values(kNLeft).real()) * system.omega_left;
    report.coherence = 0.5 * J * (v.values(kCoherence) + v.values(kCoherenceConj)).real();
    report.left = system.left.rate * (report.nondiagonal - report.coherence);

    // Right reservoir sees omega_R n_R + chi n_R sz; for a pure atomic state
    // <n_R sz> = sz <n_R> and this is (nbar_R - n_R)(omega_R + sz chi).
    const double nr = system.right.mean_occupation;
    report.right = system.right.rate
                   * (system.omega_right * (nr - v.values(kNRight).real())
                      + chi * (sz * nr - v.values(kNRightSz).real()))
                   - system.right.rate * report.coherence;

    if (system.atom && chi != system.omega_right) {
        report.alpha = (system.right.rate / system.left.rate) / ((chi - system.omega_right) / system.omega_left);
    }
    const double w2 = system.omega_left * system.omega_left;
    if (system.occupation_bias() > 0.0) {
        report.regime = regime_from_current(report.left, 1e-12 * w2 * system.occupation_bias());
    }

    const double imbalance = std::abs(report.left + report.right);
    if (imbalance > 1e-10 * std::max(std::abs(report.left), w2 * 1e-16)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "I_L + I_R = %.3e: moments are not a steady state", report.left + report.right);
        report.warnings.emplace_back(buf);
    }
    return report;
}

} // namespace cavheat::moments
