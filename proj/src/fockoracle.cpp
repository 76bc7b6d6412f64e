// fockoracle.cpp: Truncated Fock-space Lindbladian, steady state and diagnostics

#include "cavheat/fockoracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace cavheat::fock {

namespace {

using Triplet = Eigen::Triplet<Complex>;
constexpr Complex kI{0.0, 1.0};

SparseMatrix identity(int dim)
{
    SparseMatrix I(dim, dim);
    I.setIdentity();
    return I;
}

SparseMatrix annihilation(int levels)
{
    std::vector<Triplet> t;
    for (int k = 1; k < levels; ++k) t.emplace_back(k - 1, k, std::sqrt(static_cast<double>(k)));
    SparseMatrix a(levels, levels);
    a.setFromTriplets(t.begin(), t.end());
    return a;
}

SparseMatrix kron(const SparseMatrix& A, const SparseMatrix& B)
{
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(A.nonZeros() * B.nonZeros()));
    for (int ca = 0; ca < A.outerSize(); ++ca) {
        for (SparseMatrix::InnerIterator ia(A, ca); ia; ++ia) {
            for (int cb = 0; cb < B.outerSize(); ++cb) {
                for (SparseMatrix::InnerIterator ib(B, cb); ib; ++ib) {
                    t.emplace_back(ia.row() * B.rows() + ib.row(), ia.col() * B.cols() + ib.col(),
                                   ia.value() * ib.value());
                }
            }
        }
    }
    SparseMatrix out(A.rows() * B.rows(), A.cols() * B.cols());
    out.setFromTriplets(t.begin(), t.end());
    return out;
}

struct Jump {
    SparseMatrix op;
    SparseMatrix number; // op^+ op
    double rate;
};

std::vector<Jump> reservoir_jumps(const TwoCavitySystem& system, const SparseMatrix& a_left,
                                  const SparseMatrix& a_right)
{
    std::vector<Jump> jumps;
    auto add = [&jumps](const SparseMatrix& op, double rate) {
        if (rate == 0.0) return;
        SparseMatrix number = SparseMatrix(op.adjoint()) * op;
        jumps.push_back({op, number, rate});
    };
    for (const auto& [a, r] : {std::pair{&a_left, system.left}, std::pair{&a_right, system.right}}) {
        add(*a, r.rate * (r.mean_occupation + 1.0));
        add(SparseMatrix(a->adjoint()), r.rate * r.mean_occupation);
    }
    return jumps;
}

// Generator columns L(|i><j|) for every requested (i, j). With an index table the
// target entries must stay inside the tabulated block.
SparseMatrix lindblad_superoperator(const SparseMatrix& H, const std::vector<Jump>& jumps, int dim,
                                    const std::vector<std::pair<int, int>>& pairs)
{
    const bool full = pairs.empty();
    std::vector<int> table;
    if (!full) {
        table.assign(static_cast<std::size_t>(dim) * dim, -1);
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            table[static_cast<std::size_t>(pairs[k].second) * dim + pairs[k].first] = static_cast<int>(k);
        }
    }
    const auto index = [&](int r, int s) -> int {
        const std::size_t flat = static_cast<std::size_t>(s) * dim + r;
        if (full) return static_cast<int>(flat);
        const int k = table[flat];
        if (k < 0) throw std::logic_error("fock: generator leaves the excitation-balanced block");
        return k;
    };

    const std::size_t columns = full ? static_cast<std::size_t>(dim) * dim : pairs.size();
    std::vector<Triplet> t;
    t.reserve(columns * 12);

    for (std::size_t c = 0; c < columns; ++c) {
        const int i = full ? static_cast<int>(c % dim) : pairs[c].first;
        const int j = full ? static_cast<int>(c / dim) : pairs[c].second;
        const int col = static_cast<int>(c);

        for (SparseMatrix::InnerIterator h(H, i); h; ++h) t.emplace_back(index(h.row(), j), col, -kI * h.value());
        for (SparseMatrix::InnerIterator h(H, j); h; ++h)
            t.emplace_back(index(i, h.row()), col, kI * std::conj(h.value()));

        for (const Jump& jump : jumps) {
            for (SparseMatrix::InnerIterator ci(jump.op, i); ci; ++ci) {
                for (SparseMatrix::InnerIterator cj(jump.op, j); cj; ++cj) {
                    t.emplace_back(index(ci.row(), cj.row()), col, jump.rate * ci.value() * std::conj(cj.value()));
                }
            }
            for (SparseMatrix::InnerIterator k(jump.number, i); k; ++k)
                t.emplace_back(index(k.row(), j), col, -0.5 * jump.rate * k.value());
            for (SparseMatrix::InnerIterator k(jump.number, j); k; ++k)
                t.emplace_back(index(i, k.row()), col, -0.5 * jump.rate * std::conj(k.value()));
        }
    }
    const int n = static_cast<int>(columns);
    SparseMatrix L(n, n);
    L.setFromTriplets(t.begin(), t.end());
    L.prune(Complex{0.0, 0.0});
    return L;
}

void guard_dimension(std::size_t dim, const FockConfig& cfg)
{
    if (dim > cfg.max_dimension) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "fock: vectorized dimension %zu exceeds the limit %zu", dim, cfg.max_dimension);
        throw SolverError(buf);
    }
}

struct FieldOperators {
    SparseMatrix a_left;
    SparseMatrix a_right;
};

FieldOperators field_operators(int n_max)
{
    const int levels = n_max + 1;
    const SparseMatrix a = annihilation(levels);
    const SparseMatrix I = identity(levels);
    return {kron(a, I), kron(I, a)};
}

// Replaces row `replaced` with the constraint x(pinned) = 1, solves, then rescales to unit
// trace. A single pinned entry keeps the factorization sparse where a full trace row fills in.
Eigen::VectorXcd solve_pinned(const SparseMatrix& L, const std::vector<int>& diagonal, int pinned, int replaced)
{
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(L.nonZeros()) + 1);
    for (int c = 0; c < L.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(L, c); it; ++it) {
            if (it.row() != replaced) t.emplace_back(it.row(), it.col(), it.value());
        }
    }
    t.emplace_back(replaced, pinned, 1.0);
    SparseMatrix M(L.rows(), L.cols());
    M.setFromTriplets(t.begin(), t.end());
    M.makeCompressed();

    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(M);
    lu.factorize(M);
    if (lu.info() != Eigen::Success) {
        throw SolverError("fock: no unique steady state (singular generator after trace normalization)");
    }
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(L.rows());
    rhs(replaced) = 1.0;
    Eigen::VectorXcd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !x.allFinite()) {
        throw SolverError("fock: no unique steady state (solve failed)");
    }
    Complex trace{};
    for (int d : diagonal) trace += x(d);
    if (!(std::abs(trace) > 0.0)) throw SolverError("fock: steady state has zero trace");
    return x / trace;
}

int tail_levels(double nbar, double bound)
{
    if (nbar <= 0.0) return 1;
    const double q = nbar / (1.0 + nbar);
    // smallest n with q^(n+1) <= bound
    return std::max(1, static_cast<int>(std::ceil(std::log(bound) / std::log(q))) - 1);
}

} // namespace

std::vector<std::string> violations(const FockConfig& cfg)
{
    std::vector<std::string> out;
    if (cfg.n_max < 1) out.emplace_back("n_max: truncation needs at least levels 0 and 1");
    if (cfg.atom_sigma_z && (*cfg.atom_sigma_z < -1.0 || *cfg.atom_sigma_z > 1.0)) {
        out.emplace_back("atom_sigma_z: <sigma_z> must lie in [-1, 1]");
    }
    if (!(cfg.tail_bound > 0.0 && cfg.tail_bound < 1.0)) out.emplace_back("tail_bound: must lie in (0, 1)");
    if (!(cfg.escalation_tolerance > 0.0)) out.emplace_back("escalation_tolerance: must be positive");
    if (cfg.n_max_limit < cfg.n_max) out.emplace_back("n_max_limit: must be at least n_max");
    return out;
}

Operators build_operators(const TwoCavitySystem& system, int n_max)
{
    const FieldOperators field = field_operators(n_max);
    const SparseMatrix I2 = identity(2);

    std::vector<Triplet> sz_t{{0, 0, 1.0}, {1, 1, -1.0}};
    SparseMatrix sz(2, 2);
    sz.setFromTriplets(sz_t.begin(), sz_t.end());
    std::vector<Triplet> sp_t{{0, 1, 1.0}};
    SparseMatrix sp(2, 2);
    sp.setFromTriplets(sp_t.begin(), sp_t.end());

    const int field_dim = (n_max + 1) * (n_max + 1);
    const SparseMatrix If = identity(field_dim);

    Operators ops;
    ops.n_max = n_max;
    ops.a_left = kron(field.a_left, I2);
    ops.a_right = kron(field.a_right, I2);
    ops.sigma_z = kron(If, sz);
    ops.sigma_plus = kron(If, sp);

    const SparseMatrix aLd = ops.a_left.adjoint();
    const SparseMatrix aRd = ops.a_right.adjoint();
    const SparseMatrix nL = aLd * ops.a_left;
    const SparseMatrix nR = aRd * ops.a_right;
    const SparseMatrix hop = aLd * ops.a_right;

    SparseMatrix H = system.omega_left * nL + system.omega_right * nR
                     + system.coupling * (hop + SparseMatrix(hop.adjoint()));
    if (system.atom) {
        const SparseMatrix sm = ops.sigma_plus.adjoint();
        H += 0.5 * system.atom->transition_frequency * ops.sigma_z;
        H += system.atom->dispersive_strength * (SparseMatrix(ops.sigma_plus * sm) + SparseMatrix(nR * ops.sigma_z));
    }
    H.prune(Complex{0.0, 0.0});
    ops.hamiltonian = H;
    return ops;
}

Liouvillian build_liouvillian(const TwoCavitySystem& system, const FockConfig& cfg)
{
    const int dim = 2 * (cfg.n_max + 1) * (cfg.n_max + 1);
    guard_dimension(static_cast<std::size_t>(dim) * dim, cfg);
    const Operators ops = build_operators(system, cfg.n_max);

    Liouvillian L;
    L.hilbert_dim = dim;
    L.op = lindblad_superoperator(ops.hamiltonian, reservoir_jumps(system, ops.a_left, ops.a_right), dim, {});
    return L;
}

Liouvillian build_sector_liouvillian(const TwoCavitySystem& system, const FockConfig& cfg, int sector)
{
    if (sector != 1 && sector != -1) throw std::invalid_argument("fock: sector must be +1 or -1");
    const int levels = cfg.n_max + 1;
    const int dim = levels * levels;

    Liouvillian L;
    L.hilbert_dim = dim;
    for (int col = 0; col < dim; ++col) {
        for (int row = 0; row < dim; ++row) {
            if (row / levels + row % levels == col / levels + col % levels) L.pairs.emplace_back(row, col);
        }
    }
    guard_dimension(L.pairs.size(), cfg);

    const FieldOperators f = field_operators(cfg.n_max);
    const SparseMatrix aLd = f.a_left.adjoint();
    const SparseMatrix aRd = f.a_right.adjoint();
    const SparseMatrix hop = aLd * f.a_right;
    SparseMatrix H = system.omega_left * SparseMatrix(aLd * f.a_left)
                     + system.omega_right * SparseMatrix(aRd * f.a_right)
                     + system.coupling * (hop + SparseMatrix(hop.adjoint()));
    if (system.atom) {
        // <s|H|s> for the frozen atom: omega_0 s/2 + chi ([s = e] + s n_R)
        const double s = sector;
        const double chi = system.atom->dispersive_strength;
        const double offset = 0.5 * system.atom->transition_frequency * s + (sector == 1 ? chi : 0.0);
        H += chi * s * SparseMatrix(aRd * f.a_right);
        H += offset * identity(dim);
    }
    H.prune(Complex{0.0, 0.0});

    L.op = lindblad_superoperator(H, reservoir_jumps(system, f.a_left, f.a_right), dim, L.pairs);
    return L;
}

namespace {

// Unit-trace null vector; with `verify_unique` a second solve with a different replaced
// row must agree, which fails when the null space is degenerate.
Eigen::VectorXcd steady_vector(const Liouvillian& liouvillian, bool verify_unique)
{
    const int dim = liouvillian.hilbert_dim;
    std::vector<int> diagonal;
    if (liouvillian.pairs.empty()) {
        for (int i = 0; i < dim; ++i) diagonal.push_back(i * dim + i);
    } else {
        for (std::size_t k = 0; k < liouvillian.pairs.size(); ++k) {
            if (liouvillian.pairs[k].first == liouvillian.pairs[k].second) diagonal.push_back(static_cast<int>(k));
        }
    }

    // Any diagonal row is redundant (the trace functional annihilates L).
    // The vacuum population is pinned; it is nonzero in every thermal steady state.
    const int vacuum = diagonal.front();
    const Eigen::VectorXcd x = solve_pinned(liouvillian.op, diagonal, vacuum, diagonal.front());
    if (verify_unique) {
        const Eigen::VectorXcd y = solve_pinned(liouvillian.op, diagonal, vacuum, diagonal.back());
        const double spread = (x - y).cwiseAbs().maxCoeff();
        if (!(spread <= 1e-8 * std::max(1.0, x.cwiseAbs().maxCoeff()))) {
            throw SolverError("fock: degenerate null space (more than one steady state; fix the atomic sector)");
        }
    }

    const double residual = (liouvillian.op * x).norm();
    if (!(residual < kSteadyResidual)) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "fock: steady-state residual %.3e exceeds %.0e", residual, kSteadyResidual);
        throw SolverError(buf);
    }
    return x;
}

Eigen::MatrixXcd reshape(const Liouvillian& liouvillian, const Eigen::VectorXcd& x)
{
    const int dim = liouvillian.hilbert_dim;
    if (liouvillian.pairs.empty()) return Eigen::Map<const Eigen::MatrixXcd>(x.data(), dim, dim);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t k = 0; k < liouvillian.pairs.size(); ++k) {
        rho(liouvillian.pairs[k].first, liouvillian.pairs[k].second) = x(static_cast<Eigen::Index>(k));
    }
    return rho;
}

} // namespace

Eigen::MatrixXcd steady_rho(const Liouvillian& liouvillian, const FockConfig& cfg)
{
    guard_dimension(liouvillian.dimension(), cfg);
    return reshape(liouvillian, steady_vector(liouvillian, true));
}

OracleSolution solve_oracle(const TwoCavitySystem& system, const FockConfig& cfg)
{
    validate(system);
    if (auto v = violations(cfg); !v.empty()) throw ValidationError(std::move(v));

    const double sz = cfg.atom_sigma_z.value_or(system.atom ? system.atom->sigma_z : -1.0);
    const double p_excited = 0.5 * (1.0 + sz);
    std::vector<int> sectors;
    if (p_excited > 0.0) sectors.push_back(1);
    if (p_excited < 1.0) sectors.push_back(-1);

    OracleSolution out;
    const double hottest = std::max(system.left.mean_occupation, system.right.mean_occupation);
    const int needed = tail_levels(hottest, cfg.tail_bound);
    int n = cfg.n_max;
    if (needed > n) {
        if (!cfg.escalate) {
            throw ValidationError({"n_max: Gibbs tail above n_max exceeds tail_bound (need n_max >= "
                                   + std::to_string(needed) + ")"});
        }
        out.notes.push_back("n_max raised from " + std::to_string(n) + " to " + std::to_string(needed)
                            + " for the Gibbs tail bound");
        n = needed;
    }

    struct SectorState {
        Eigen::MatrixXcd rho;
        double n_left;
        double n_right;
    };
    auto solve_at = [&](int levels_max, bool verify_unique) {
        FockConfig local = cfg;
        local.n_max = levels_max;
        const FieldOperators f = field_operators(levels_max);
        const SparseMatrix nL = SparseMatrix(f.a_left.adjoint()) * f.a_left;
        const SparseMatrix nR = SparseMatrix(f.a_right.adjoint()) * f.a_right;
        std::vector<SectorState> states;
        for (int sector : sectors) {
            SectorState st;
            const Liouvillian L = build_sector_liouvillian(system, local, sector);
            guard_dimension(L.dimension(), local);
            st.rho = reshape(L, steady_vector(L, verify_unique));
            st.n_left = (nL * st.rho).trace().real();
            st.n_right = (nR * st.rho).trace().real();
            states.push_back(std::move(st));
        }
        return states;
    };

    // Degeneracy is structural, so uniqueness is verified once at the smallest truncation.
    std::vector<SectorState> current = solve_at(n, true);
    if (cfg.escalate) {
        while (true) {
            if (n + 1 > cfg.n_max_limit) {
                throw SolverError("fock: occupations did not settle below n_max_limit = "
                                  + std::to_string(cfg.n_max_limit));
            }
            std::vector<SectorState> next = solve_at(n + 1, false);
            double change = 0.0;
            for (std::size_t k = 0; k < next.size(); ++k) {
                change = std::max({change, std::abs(next[k].n_left - current[k].n_left),
                                   std::abs(next[k].n_right - current[k].n_right)});
            }
            current = std::move(next);
            ++n;
            if (change < cfg.escalation_tolerance) break;
        }
    }

    const int field_dim = (n + 1) * (n + 1);
    DensityMatrix state;
    state.n_max = n;
    state.rho = Eigen::MatrixXcd::Zero(2 * field_dim, 2 * field_dim);
    for (std::size_t k = 0; k < sectors.size(); ++k) {
        const int atom_index = sectors[k] == 1 ? 0 : 1;
        const double weight = sectors[k] == 1 ? p_excited : 1.0 - p_excited;
        for (int c = 0; c < field_dim; ++c) {
            for (int r = 0; r < field_dim; ++r) {
                const Complex v = current[k].rho(r, c);
                if (v != Complex{}) state.rho(2 * r + atom_index, 2 * c + atom_index) = weight * v;
            }
        }
    }
    out.state = std::move(state);

    FockConfig local = cfg;
    local.n_max = n;
    local.max_dimension = std::numeric_limits<std::size_t>::max();
    // Residual of the assembled state under the sector generators it came from.
    double residual = 0.0;
    for (std::size_t k = 0; k < sectors.size(); ++k) {
        const Liouvillian L = build_sector_liouvillian(system, local, sectors[k]);
        Eigen::VectorXcd v(static_cast<Eigen::Index>(L.pairs.size()));
        for (std::size_t i = 0; i < L.pairs.size(); ++i) {
            v(static_cast<Eigen::Index>(i)) = current[k].rho(L.pairs[i].first, L.pairs[i].second);
        }
        residual = std::max(residual, (L.op * v).norm());
    }
    out.residual = residual;
    return out;
}

Complex expectation(const DensityMatrix& state, const SparseMatrix& op)
{
    Complex sum{};
    for (int c = 0; c < op.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(op, c); it; ++it) sum += it.value() * state.rho(it.col(), it.row());
    }
    return sum;
}

Eigen::MatrixXcd reduced_left(const DensityMatrix& state)
{
    const int L = state.levels();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(L, L);
    for (int a = 0; a < L; ++a) {
        for (int b = 0; b < L; ++b) {
            Complex sum{};
            for (int k = 0; k < L; ++k) {
                for (int s = 0; s < 2; ++s) sum += state.rho(2 * (a * L + k) + s, 2 * (b * L + k) + s);
            }
            out(a, b) = sum;
        }
    }
    return out;
}

Eigen::MatrixXcd reduced_right(const DensityMatrix& state)
{
    const int L = state.levels();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(L, L);
    for (int a = 0; a < L; ++a) {
        for (int b = 0; b < L; ++b) {
            Complex sum{};
            for (int k = 0; k < L; ++k) {
                for (int s = 0; s < 2; ++s) sum += state.rho(2 * (k * L + a) + s, 2 * (k * L + b) + s);
            }
            out(a, b) = sum;
        }
    }
    return out;
}

namespace {

// D(rho) for one reservoir acting on mode a.
Eigen::MatrixXcd dissipator(const SparseMatrix& a, const ReservoirSpec& r, const Eigen::MatrixXcd& rho)
{
    const SparseMatrix ad = a.adjoint();
    const SparseMatrix n = ad * a;
    const SparseMatrix m = a * ad;
    const double down = r.rate * (r.mean_occupation + 1.0);
    const double up = r.rate * r.mean_occupation;
    const Eigen::MatrixXcd a_rho = a * rho;
    const Eigen::MatrixXcd ad_rho = ad * rho;
    Eigen::MatrixXcd out = down * (Eigen::MatrixXcd(a_rho * ad) - 0.5 * (n * rho) - 0.5 * Eigen::MatrixXcd(rho * n));
    out += up * (Eigen::MatrixXcd(ad_rho * a) - 0.5 * (m * rho) - 0.5 * Eigen::MatrixXcd(rho * m));
    return out;
}

Complex trace_product(const SparseMatrix& H, const Eigen::MatrixXcd& M)
{
    Complex sum{};
    for (int c = 0; c < H.outerSize(); ++c) {
        for (SparseMatrix::InnerIterator it(H, c); it; ++it) sum += it.value() * M(it.col(), it.row());
    }
    return sum;
}

} // namespace

CurrentReport oracle_currents(const TwoCavitySystem& system, const DensityMatrix& state)
{
    const Operators ops = build_operators(system, state.n_max);
    const SparseMatrix aLd = ops.a_left.adjoint();

    CurrentReport report;
    report.left = trace_product(ops.hamiltonian, dissipator(ops.a_left, system.left, state.rho)).real();
    report.right = trace_product(ops.hamiltonian, dissipator(ops.a_right, system.right, state.rho)).real();

    const double n_left = expectation(state, SparseMatrix(aLd * ops.a_left)).real();
    const Complex x = expectation(state, SparseMatrix(aLd * ops.a_right));
    const Complex y = expectation(state, SparseMatrix(ops.a_left * SparseMatrix(ops.a_right.adjoint())));
    report.nondiagonal = (system.left.mean_occupation - n_left) * system.omega_left;
    report.coherence = 0.5 * system.coupling * (x + y).real();

    const double chi = system.chi();
    if (system.atom && chi != system.omega_right) {
        report.alpha = (system.right.rate / system.left.rate) / ((chi - system.omega_right) / system.omega_left);
    }
    const double w2 = system.omega_left * system.omega_left;
    if (system.occupation_bias() > 0.0) {
        report.regime = regime_from_current(report.left, 1e-8 * w2 * system.occupation_bias());
    }
    if (std::abs(report.left + report.right) > 1e-8 * w2) {
        report.warnings.emplace_back("I_L + I_R differs from zero by more than 1e-8");
    }
    return report;
}

Eigen::MatrixXcd gibbs_state(double nbar, int n_max)
{
    const int L = n_max + 1;
    Eigen::VectorXd p(L);
    const double q = nbar / (1.0 + nbar);
    double w = 1.0;
    for (int n = 0; n < L; ++n) {
        p(n) = w;
        w *= q;
    }
    p /= p.sum();
    return p.cast<Complex>().asDiagonal();
}

double thermal_fidelity(const Eigen::MatrixXcd& reduced, double nbar)
{
    const int n_max = static_cast<int>(reduced.rows()) - 1;
    const Eigen::VectorXd root = gibbs_state(nbar, n_max).diagonal().real().cwiseSqrt();
    const Eigen::MatrixXcd sandwich = root.cast<Complex>().asDiagonal() * reduced * root.cast<Complex>().asDiagonal();
    const Eigen::MatrixXcd herm = 0.5 * (sandwich + sandwich.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    double f = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) f += std::sqrt(std::max(es.eigenvalues()(k), 0.0));
    return f;
}

std::optional<double> g2_zero(const Eigen::MatrixXcd& reduced)
{
    double mean = 0.0;
    double pairs = 0.0;
    for (Eigen::Index n = 0; n < reduced.rows(); ++n) {
        const double p = reduced(n, n).real();
        const double nn = static_cast<double>(n);
        mean += nn * p;
        pairs += nn * (nn - 1.0) * p;
    }
    if (!(mean > 0.0)) return std::nullopt;
    return pairs / (mean * mean);
}

Eigen::MatrixXcd evolve_rho(const Liouvillian& liouvillian, const Eigen::MatrixXcd& rho0, double t_final, double dt)
{
    if (!liouvillian.pairs.empty()) {
        throw std::invalid_argument("evolve_rho: needs the full-space generator");
    }
    if (!(dt > 0.0) || !(t_final >= 0.0)) throw std::invalid_argument("evolve_rho: need dt > 0, t_final >= 0");
    const int dim = liouvillian.hilbert_dim;
    Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), static_cast<Eigen::Index>(dim) * dim);
    const auto& L = liouvillian.op;
    double t = 0.0;
    while (t < t_final) {
        const double h = std::min(dt, t_final - t);
        const Eigen::VectorXcd k1 = L * x;
        const Eigen::VectorXcd k2 = L * (x + 0.5 * h * k1);
        const Eigen::VectorXcd k3 = L * (x + 0.5 * h * k2);
        const Eigen::VectorXcd k4 = L * (x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
    }
    return Eigen::Map<const Eigen::MatrixXcd>(x.data(), dim, dim);
}

} // namespace cavheat::fock
