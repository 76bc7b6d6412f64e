// arrayn.cpp: Block generators, vectorized steady-state solve and chain observables

#include "cavheat/arrayn.hpp"

#include <cmath>
#include <limits>
#include <complex>
#include <string>

#include "cavheat/analytic2.hpp"

namespace cavheat::arrayn {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

// Column (p, q) of the operator X -> A X + X B, column-major: index q*n + p.
void assemble_column(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, Eigen::MatrixXcd& L, Eigen::Index p,
                     Eigen::Index q)
{
    const Eigen::Index n = A.rows();
    const Eigen::Index col = q * n + p;
    for (Eigen::Index r = 0; r < n; ++r) {
        const Complex a = A(r, p);
        if (a != Complex{}) L(q * n + r, col) += a;
    }
    for (Eigen::Index s = 0; s < n; ++s) {
        const Complex b = B(q, s);
        if (b != Complex{}) L(s * n + p, col) += b;
    }
}

Eigen::MatrixXcd sylvester_operator(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, Execution policy)
{
    const Eigen::Index n = A.rows();
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(n * n, n * n);
    for_each_index(static_cast<std::size_t>(n * n), policy, [&](std::size_t c) {
        const auto col = static_cast<Eigen::Index>(c);
        assemble_column(A, B, L, col % n, col / n);
    });
    return L;
}

// Solves A G + G B + drive = 0 for G.
Eigen::MatrixXcd solve_sylvester(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B,
                                 const Eigen::MatrixXcd& drive, Execution policy, double& residual)
{
    const Eigen::Index n = A.rows();
    const Eigen::MatrixXcd L = sylvester_operator(A, B, policy);
    const Eigen::VectorXcd rhs = -Eigen::Map<const Eigen::VectorXcd>(drive.data(), n * n);

    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(L);
    if (!(lu.rcond() > 1e-13)) {
        throw SolverError("arrayn: no unique steady state (singular vectorized generator)");
    }
    const Eigen::VectorXcd x = lu.solve(rhs);

    const double scale = rhs.norm();
    const double r = (L * x - rhs).norm();
    residual = scale > 0.0 ? r / scale : r;
    if (!(residual < kResidualTolerance)) {
        throw SolverError("arrayn: steady-state residual " + std::to_string(residual) + " above tolerance");
    }
    return Eigen::Map<const Eigen::MatrixXcd>(x.data(), n, n);
}

Eigen::VectorXd boundary_diagonal(int sites, double left, double right)
{
    Eigen::VectorXd d = Eigen::VectorXd::Zero(sites);
    d(0) += left;
    d(sites - 1) += right;
    return d;
}

} // namespace

BlockGenerators build_generators(const ArraySystem& system)
{
    const int N = system.sites;
    BlockGenerators g;
    g.sites = N;

    g.hopping = Eigen::MatrixXd::Zero(N, N);
    for (int j = 0; j < N; ++j) {
        g.hopping(j, j) = system.omega;
        if (j + 1 < N) {
            g.hopping(j, j + 1) = system.coupling;
            g.hopping(j + 1, j) = system.coupling;
        }
    }
    g.shift = Eigen::MatrixXd::Zero(N, N);
    if (system.atom) {
        const int m = system.atom->host_site - 1;
        g.shift(m, m) = system.atom->dispersive_strength;
    }

    const double sz = system.sigma_z();
    const Eigen::VectorXd damping = boundary_diagonal(N, -0.5 * system.left.rate, -0.5 * system.right.rate);
    const Eigen::VectorXd drive = boundary_diagonal(N, system.left.rate * system.left.mean_occupation,
                                                    system.right.rate * system.right.mean_occupation);

    const int n = 2 * N;
    g.M1 = Eigen::MatrixXcd::Zero(n, n);
    g.M2 = Eigen::MatrixXcd::Zero(n, n);
    g.M3 = Eigen::MatrixXcd::Zero(n, n);
    for (int blk = 0; blk < 2; ++blk) {
        const int o = blk * N;
        const int off = (1 - blk) * N;
        g.M1.block(o, o, N, N) = g.hopping.cast<Complex>();
        g.M1.block(o, off, N, N) = g.shift.cast<Complex>();
        g.M2.block(o, o, N, N) = damping.asDiagonal().toDenseMatrix().cast<Complex>();
        g.M3.block(o, o, N, N) = drive.asDiagonal().toDenseMatrix().cast<Complex>();
        g.M3.block(o, off, N, N) = (sz * drive).asDiagonal().toDenseMatrix().cast<Complex>();
    }
    return g;
}

Eigen::MatrixXcd vectorized_operator(const BlockGenerators& gens, Execution policy)
{
    return sylvester_operator(kI * gens.M1 + gens.M2, -kI * gens.M1 + gens.M2, policy);
}

MomentMatrix steady_state_matrix(const BlockGenerators& gens, Execution policy)
{
    MomentMatrix out;
    out.sites = gens.sites;
    out.G = solve_sylvester(kI * gens.M1 + gens.M2, -kI * gens.M1 + gens.M2, gens.M3, policy, out.residual);
    return out;
}

MomentMatrix steady_state_matrix(const ArraySystem& system, Execution policy, bool full_solve)
{
    const BlockGenerators gens = build_generators(system);
    if (full_solve || system.chi() != 0.0) {
        return steady_state_matrix(gens, policy);
    }

    const int N = gens.sites;
    const Eigen::MatrixXcd H = gens.hopping.cast<Complex>();
    const Eigen::MatrixXcd damp = gens.M2.topLeftCorner(N, N);
    const Eigen::MatrixXcd drive = gens.M3.topLeftCorner(N, N);

    MomentMatrix out;
    out.sites = N;
    const Eigen::MatrixXcd P = solve_sylvester(kI * H + damp, -kI * H + damp, drive, policy, out.residual);
    const double sz = system.sigma_z();
    out.G.resize(2 * N, 2 * N);
    out.G.topLeftCorner(N, N) = P;
    out.G.bottomRightCorner(N, N) = P;
    out.G.topRightCorner(N, N) = sz * P;
    out.G.bottomLeftCorner(N, N) = sz * P;
    return out;
}

double array_current(const ArraySystem& system, const MomentMatrix& moments)
{
    const auto& G = moments.G;
    const int N = moments.sites;
    const double J = system.coupling;
    const double nbar = system.left.mean_occupation;
    double shifted = 0.0;
    if (system.atom_site() == 1) {
        shifted = system.chi() * (system.sigma_z() * nbar - G(0, N).real());
    }
    const double coherence = 0.5 * J * (G(0, 1) + G(1, 0)).real();
    return system.left.rate * ((nbar - G(0, 0).real()) * system.omega + shifted - coherence);
}

double array_current_right(const ArraySystem& system, const MomentMatrix& moments)
{
    const auto& G = moments.G;
    const int N = moments.sites;
    const int last = N - 1;
    const double J = system.coupling;
    const double nbar = system.right.mean_occupation;
    double shifted = 0.0;
    if (system.atom_site() == N) {
        shifted = system.chi() * (system.sigma_z() * nbar - G(last, N + last).real());
    }
    const double coherence = 0.5 * J * (G(last, last - 1) + G(last - 1, last)).real();
    return system.right.rate * ((nbar - G(last, last).real()) * system.omega + shifted - coherence);
}

std::vector<double> occupation_profile(const ArraySystem& /*system*/, const MomentMatrix& moments)
{
    std::vector<double> out(static_cast<std::size_t>(moments.sites));
    for (int j = 0; j < moments.sites; ++j) out[static_cast<std::size_t>(j)] = moments.G(j, j).real();
    return out;
}

std::vector<double> bond_currents(const ArraySystem& system, const MomentMatrix& moments)
{
    std::vector<double> out;
    for (int j = 0; j + 1 < moments.sites; ++j) {
        out.push_back(-2.0 * system.coupling * moments.G(j, j + 1).imag());
    }
    return out;
}

std::vector<SizeScanRow> size_scan(const ArraySystem& base, int n_min, int n_max, AtomPlacement placement,
                                   Execution policy)
{
    if (n_min < 2 || n_max < n_min) {
        throw std::invalid_argument("size_scan: need 2 <= n_min <= n_max");
    }
    const double reference = analytic::ballistic_current(base.omega, base.coupling, base.left.rate,
                                                         base.right.rate,
                                                         base.left.mean_occupation - base.right.mean_occupation);

    std::vector<SizeScanRow> rows(static_cast<std::size_t>(n_max - n_min + 1));
    // Each N is solved serially inside; the scan itself is the parallel loop.
    for_each_index(rows.size(), policy, [&](std::size_t i) {
        ArraySystem sys = base;
        sys.sites = n_min + static_cast<int>(i);
        if (sys.atom) {
            if (placement == AtomPlacement::last_site) sys.atom->host_site = sys.sites;
            if (placement == AtomPlacement::first_site) sys.atom->host_site = 1;
        }
        SizeScanRow row;
        row.sites = sys.sites;
        try {
            validate(sys);
            const MomentMatrix G = steady_state_matrix(sys, Execution::serial);
            row.current = array_current(sys, G);
            row.right_current = array_current_right(sys, G);
            row.residual = G.residual;
        } catch (const SolverError& e) {
            throw SolverError("size_scan: N = " + std::to_string(sys.sites) + ": " + e.what());
        }
        row.ratio = reference != 0.0 ? row.current / reference : std::numeric_limits<double>::quiet_NaN();
        rows[i] = row;
    });
    return rows;
}

} // namespace cavheat::arrayn
