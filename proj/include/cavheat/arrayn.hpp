// arrayn.hpp: Steady state of an N-cavity chain with one dispersive atom
//
// <G> = <A^+ A> over the operator row A = (a_1..a_N, a_1 sz..a_N sz) obeys
//   d<G>/dt = i[M1, <G>] + {M2, <G>} + M3,
// solved here as a dense linear system in the (2N)^2 entries of <G>.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cavheat/model.hpp"
#include "cavheat/parallel.hpp"

namespace cavheat::arrayn {

struct BlockGenerators {
    int sites{0};
    Eigen::MatrixXd hopping; // H_c: omega on the diagonal, J on the first off-diagonals
    Eigen::MatrixXd shift;   // X: chi at (m, m), zero elsewhere
    Eigen::MatrixXcd M1;     // I2 (x) H_c + sigma_x (x) X
    Eigen::MatrixXcd M2;     // I2 (x) diag(-G_L/2, 0, .., 0, -G_R/2)
    Eigen::MatrixXcd M3;     // boundary drive, sigma_z-weighted in the off-diagonal blocks
};

struct MomentMatrix {
    int sites{0};
    Eigen::MatrixXcd G;   // 2N x 2N
    double residual{0.0}; // ||L vec(G) + vec(M3)||_F / ||M3||_F

    /// <a_i^+ a_j>
    Eigen::MatrixXcd field_block() const { return G.topLeftCorner(sites, sites); }
    /// <a_i^+ a_j sz>
    Eigen::MatrixXcd weighted_block() const { return G.topRightCorner(sites, sites); }
};

inline constexpr double kResidualTolerance = 1e-10;

BlockGenerators build_generators(const ArraySystem& system);

/// Superoperator L with L vec(G) = vec(i[M1,G] + {M2,G}) in column-major vec order.
/// Columns are assembled independently; the OpenMP path matches the serial one exactly.
Eigen::MatrixXcd vectorized_operator(const BlockGenerators& gens, Execution policy = Execution::openmp);

/// Solves the full 2N-block system. Throws SolverError on a singular operator or a
/// residual above kResidualTolerance.
MomentMatrix steady_state_matrix(const BlockGenerators& gens, Execution policy = Execution::openmp);

/// As above from a system record. Without dispersive coupling the sz-weighted block
/// is sz times the field block, so only the N x N field system is solved unless
/// `full_solve` is set.
MomentMatrix steady_state_matrix(const ArraySystem& system, Execution policy = Execution::openmp,
                                 bool full_solve = false);

/// Left-boundary current G_L[(nbar_L - <n_1>)(omega + chi sz delta_{m,1}) - (J/2)(<a_1^+ a_2> + c.c.)].
/// The sz-shifted term uses <n_1 sz>, which equals sz <n_1> for a pure atomic state.
double array_current(const ArraySystem& system, const MomentMatrix& moments);

/// Mirror image at site N; equals -array_current in a steady state.
double array_current_right(const ArraySystem& system, const MomentMatrix& moments);

/// <n_j> for j = 1..N.
std::vector<double> occupation_profile(const ArraySystem& system, const MomentMatrix& moments);

/// Photon-number flow across bond (j, j+1), j = 1..N-1: -2 J Im<a_j^+ a_{j+1}>.
std::vector<double> bond_currents(const ArraySystem& system, const MomentMatrix& moments);

enum class AtomPlacement { last_site, first_site, fixed };

struct SizeScanRow {
    int sites{0};
    double current{0.0};       // I_L
    double right_current{0.0}; // I_R
    double ratio{0.0};         // I_L / I_0 with I_0 the atom-free ballistic current; NaN when I_0 = 0
    double residual{0.0};
};

/// Solves the chain for every N in [n_min, n_max]. Rows come back in N order whatever
/// the policy. A failing N is reported in the SolverError message.
std::vector<SizeScanRow> size_scan(const ArraySystem& base, int n_min, int n_max,
                                   AtomPlacement placement = AtomPlacement::last_site,
                                   Execution policy = Execution::openmp);

} // namespace cavheat::arrayn
