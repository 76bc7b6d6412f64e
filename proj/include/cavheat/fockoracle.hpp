// fockoracle.hpp: Brute-force Lindblad steady state on a truncated Fock space
//
// Hilbert space ordering is left (x) right (x) atom, with the atom index 0 = |e>
// (sigma_z = +1) and 1 = |g> (sigma_z = -1). Vectorization is column-major:
// vec(rho)[col * dim + row] = rho(row, col).

#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cavheat/current_report.hpp"
#include "cavheat/model.hpp"

namespace cavheat::fock {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

struct FockConfig {
    int n_max{12}; // Fock levels 0..n_max per cavity; starting point when escalating
    // Atomic population: +1 pure |e>, -1 pure |g>, anything in between a diagonal
    // mixture. Unset: taken from the system's atom (ground state when there is none).
    std::optional<double> atom_sigma_z;
    double tail_bound{1e-8};            // Gibbs mass above n_max at max(nbar_L, nbar_R)
    bool escalate{true};                // raise n_max until occupations settle
    double escalation_tolerance{1e-8};  // max change of <n_L>, <n_R> between truncations
    int n_max_limit{40};
    std::size_t max_dimension{20000};   // largest vectorized space the solver accepts
};

std::vector<std::string> violations(const FockConfig& cfg);

/// Operators on the truncated left (x) right (x) atom space.
struct Operators {
    int n_max{0};
    SparseMatrix a_left;
    SparseMatrix a_right;
    SparseMatrix sigma_z;
    SparseMatrix sigma_plus;
    SparseMatrix hamiltonian; // includes omega_0 sz / 2 and chi (s+ s- + a_R^+ a_R sz)
};

Operators build_operators(const TwoCavitySystem& system, int n_max);

/// Lindblad generator acting on vectorized density matrices. When `pairs` is empty the
/// representation is the full column-major vec; otherwise entry k is rho(pairs[k]).
struct Liouvillian {
    SparseMatrix op;
    int hilbert_dim{0};
    std::vector<std::pair<int, int>> pairs;

    std::size_t dimension() const { return static_cast<std::size_t>(op.rows()); }
};

/// Full generator including the atom. Refuses vectorized spaces above cfg.max_dimension.
Liouvillian build_liouvillian(const TwoCavitySystem& system, const FockConfig& cfg);

/// Generator of the field with the atom frozen in |e> (sector = +1) or |g> (sector = -1),
/// restricted to the block of rho(i, j) with equal total photon number in i and j.
/// That block is invariant and holds the steady state.
Liouvillian build_sector_liouvillian(const TwoCavitySystem& system, const FockConfig& cfg, int sector);

inline constexpr double kSteadyResidual = 1e-10;

/// Unit-trace null vector of the generator, reshaped to a density matrix. Throws
/// SolverError when the null space is degenerate or the residual exceeds kSteadyResidual.
Eigen::MatrixXcd steady_rho(const Liouvillian& liouvillian, const FockConfig& cfg);

struct DensityMatrix {
    int n_max{0};
    Eigen::MatrixXcd rho; // 2 (n_max+1)^2 square

    int levels() const { return n_max + 1; }
};

struct OracleSolution {
    DensityMatrix state;
    double residual{0.0};
    std::vector<std::string> notes;
};

/// Steady state of the system: one solve per populated atomic sector, mixed according
/// to the atomic population, with n_max raised until the Gibbs tail and occupation
/// changes are below the configured bounds.
OracleSolution solve_oracle(const TwoCavitySystem& system, const FockConfig& cfg = {});

Complex expectation(const DensityMatrix& state, const SparseMatrix& op);

/// Reduced single-cavity states (left: trace over right cavity and atom).
Eigen::MatrixXcd reduced_left(const DensityMatrix& state);
Eigen::MatrixXcd reduced_right(const DensityMatrix& state);

/// I_x = Tr[H D_x(rho)] evaluated directly, plus I_nd and I_coh from the state's moments.
CurrentReport oracle_currents(const TwoCavitySystem& system, const DensityMatrix& state);

/// Gibbs state of one mode truncated to levels 0..n_max and renormalized.
Eigen::MatrixXcd gibbs_state(double nbar, int n_max);

/// Uhlmann fidelity Tr sqrt(sqrt(rho_th) rho_x sqrt(rho_th)) against the truncated Gibbs state.
double thermal_fidelity(const Eigen::MatrixXcd& reduced, double nbar);

/// Tr(rho a^+2 a^2) / Tr(rho a^+ a)^2; empty when the mean occupation vanishes.
std::optional<double> g2_zero(const Eigen::MatrixXcd& reduced);

/// RK4 integration of d vec(rho)/dt = L vec(rho) in the full representation.
Eigen::MatrixXcd evolve_rho(const Liouvillian& liouvillian, const Eigen::MatrixXcd& rho0, double t_final, double dt);

} // namespace cavheat::fock
