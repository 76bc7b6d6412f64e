// moments.hpp: Exact second-order moment dynamics of the two-cavity system
//
// The eight moments close because [sigma_z, H] = 0 and the dissipators commute with
// sigma_z, so no truncation is involved. Ordering of the state vector:
//   0 <a_L^+ a_L>       1 <a_R^+ a_R>       2 <a_L^+ a_R>       3 <a_L a_R^+>
//   4 <a_L^+ a_L sz>    5 <a_R^+ a_R sz>    6 <a_L^+ a_R sz>    7 <a_L a_R^+ sz>

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cavheat/current_report.hpp"
#include "cavheat/model.hpp"

namespace cavheat::moments {

using Complex = std::complex<double>;
using Vector8 = Eigen::Matrix<Complex, 8, 1>;
using Matrix8 = Eigen::Matrix<Complex, 8, 8>;

enum Index : int {
    kNLeft = 0,
    kNRight,
    kCoherence,
    kCoherenceConj,
    kNLeftSz,
    kNRightSz,
    kCoherenceSz,
    kCoherenceConjSz,
};

struct MomentVector {
    Vector8 values = Vector8::Zero();
    double sigma_z{0.0}; // conserved

    double n_left() const { return values(kNLeft).real(); }
    double n_right() const { return values(kNRight).real(); }
    Complex coherence() const { return values(kCoherence); }
};

/// d<v>/dt = A <v> + b
struct AffineGenerator {
    Matrix8 A = Matrix8::Zero();
    Vector8 b = Vector8::Zero();
};

AffineGenerator generator_matrix(const TwoCavitySystem& system);

/// Linear solve A v = -b. Throws SolverError when A is singular (G_L = G_R = 0)
/// or the relative residual exceeds kResidualTolerance.
MomentVector steady_state(const TwoCavitySystem& system);

inline constexpr double kResidualTolerance = 1e-12;

/// ||A v + b|| / ||b||  (||A v|| when b = 0)
double relative_residual(const AffineGenerator& gen, const MomentVector& v);

struct Trajectory {
    std::vector<double> times;
    std::vector<MomentVector> states;
    std::vector<std::string> warnings;
};

/// Fixed-step RK4 of the affine system from t = 0 to t_final. The last step is
/// shortened to land on t_final. States are recorded every `record_every` steps
/// plus the final one.
Trajectory evolve(const TwoCavitySystem& system, const MomentVector& initial, double t_final,
                  double dt, int record_every = 1);

/// Initial state used when none is given: all moments zero (both cavities in vacuum).
MomentVector vacuum(const TwoCavitySystem& system);

/// I_nd, I_coh, I_L and I_R evaluated on a moment vector. Adds a warning when the
/// input is visibly not a steady state (I_L + I_R != 0).
CurrentReport currents_from_moments(const TwoCavitySystem& system, const MomentVector& v);

} // namespace cavheat::moments
