#include <doctest.h>

#include <cmath>

#include "cavheat/analytic2.hpp"
#include "cavheat/arrayn.hpp"
#include "cavheat/moments.hpp"
#include "oracles/oracles.hpp"
#include "test_common.hpp"

using namespace cavheat;
using testing::rel;

namespace {

oracle::Matrix chain_correlations(const ArraySystem& a, double sz)
{
    const auto c = oracle::make_chain(a.sites, a.omega, a.coupling, a.chi() * sz, a.atom_site() - 1, a.left.rate,
                                      a.left.mean_occupation, a.right.rate, a.right.mean_occupation);
    return oracle::steady_correlations(c);
}

} // namespace

TEST_CASE("array moments match the chain oracle for pure atomic states")
{
    for (int n : {2, 3, 5, 8}) {
        for (int host : {1, n / 2 + 1, n}) {
            for (double sz : {-1.0, 1.0}) {
                const auto a = testing::chain(n, 0.12, sz, host);
                CAPTURE(n);
                CAPTURE(host);
                CAPTURE(sz);
                const auto G = arrayn::steady_state_matrix(a);
                const auto C = chain_correlations(a, sz);
                CHECK((G.field_block() - C).cwiseAbs().maxCoeff() < 1e-12);
                CHECK((G.weighted_block() - sz * C).cwiseAbs().maxCoeff() < 1e-12);
                CHECK(G.residual < arrayn::kResidualTolerance);

                const auto c = oracle::make_chain(n, 1.0, 0.05, 0.12 * sz, host - 1, 0.15, 0.5, 0.15, 0.0);
                CHECK(rel(arrayn::array_current(a, G), oracle::boundary_current(c, C, 0)) < 1e-10);
                CHECK(rel(arrayn::array_current_right(a, G), oracle::boundary_current(c, C, n - 1)) < 1e-10);
            }
        }
    }
}

TEST_CASE("mixed atomic state on a chain")
{
    const auto a = testing::chain(5, 0.2, -0.4, 3);
    const double pe = 0.3;
    const auto Ce = chain_correlations(a, 1.0);
    const auto Cg = chain_correlations(a, -1.0);
    const auto G = arrayn::steady_state_matrix(a);
    CHECK((G.field_block() - (pe * Ce + (1 - pe) * Cg)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((G.weighted_block() - (pe * Ce - (1 - pe) * Cg)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(arrayn::array_current(a, G) + arrayn::array_current_right(a, G)) < 1e-14);
}

TEST_CASE("two-site array equals the two-cavity moment solution")
{
    for (double sz : {-1.0, 0.5, 1.0}) {
        const auto a = testing::chain(2, 0.3, sz, 2);
        const auto G = arrayn::steady_state_matrix(a);
        const auto s = as_two_cavity(a);
        const auto v = moments::steady_state(s);
        CHECK(rel(G.G(0, 0).real(), v.n_left()) < 1e-12);
        CHECK(rel(G.G(1, 1).real(), v.n_right()) < 1e-12);
        CHECK(std::abs(G.G(0, 1) - v.coherence()) < 1e-13);
        CHECK(rel(arrayn::array_current(a, G), moments::currents_from_moments(s, v).left) < 1e-11);
    }
}

TEST_CASE("atom-free chain is ballistic")
{
    const double I0 = analytic::ballistic_current(1.0, 0.05, 0.15, 0.15, 0.5);
    for (int n = 2; n <= 10; ++n) {
        const auto a = testing::chain(n, 0.0, -1.0, 0);
        const auto G = arrayn::steady_state_matrix(a);
        CAPTURE(n);
        CHECK(std::abs(arrayn::array_current(a, G) - I0) < 1e-13);
        for (int j = 0; j + 1 < n; ++j) CHECK(std::abs(G.G(j, j + 1).real()) < 1e-14);

        // flat interior and uniform bond flow
        const auto occ = arrayn::occupation_profile(a, G);
        for (int j = 1; j + 2 < n; ++j) CHECK(std::abs(occ[j] - occ[j + 1]) < 1e-13);
        const auto bonds = arrayn::bond_currents(a, G);
        for (double b : bonds) CHECK(std::abs(b * a.omega - I0) < 1e-13);
    }
}

TEST_CASE("chi = 0 with an atom present equals the atom-free chain")
{
    const auto with = testing::chain(6, 0.0, -1.0, 6);
    const auto without = testing::chain(6, 0.0, -1.0, 0);
    const auto G1 = arrayn::steady_state_matrix(with);
    const auto G2 = arrayn::steady_state_matrix(without);
    CHECK((G1.field_block() - G2.field_block()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("fast path and full solve agree")
{
    const auto a = testing::chain(7, 0.0, 0.6, 7);
    const auto fast = arrayn::steady_state_matrix(a, Execution::serial, false);
    const auto full = arrayn::steady_state_matrix(a, Execution::serial, true);
    CHECK((fast.G - full.G).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(full.residual < arrayn::kResidualTolerance);
}

TEST_CASE("generators")
{
    const auto a = testing::chain(4, 0.1, -1.0, 3);
    const auto g = arrayn::build_generators(a);
    CHECK(g.M1.rows() == 8);
    CHECK(g.hopping(0, 0) == 1.0);
    CHECK(g.hopping(1, 2) == 0.05);
    CHECK(g.shift(2, 2) == 0.1);
    CHECK(g.shift(0, 0) == 0.0);
    CHECK((g.M1 - g.M1.adjoint()).norm() == 0.0);
    CHECK(g.M2(0, 0).real() == -0.075);
    CHECK(g.M2(3, 3).real() == -0.075);
    CHECK(g.M2(1, 1) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("serial and OpenMP kernels are bit-identical")
{
    const auto a = testing::chain(9, 0.15, -1.0, 9);
    const auto g = arrayn::build_generators(a);
    const Eigen::MatrixXcd Ls = arrayn::vectorized_operator(g, Execution::serial);
    const Eigen::MatrixXcd Lp = arrayn::vectorized_operator(g, Execution::openmp);
    CHECK(Ls == Lp);

    const auto rs = arrayn::size_scan(a, 2, 10, arrayn::AtomPlacement::last_site, Execution::serial);
    const auto rp = arrayn::size_scan(a, 2, 10, arrayn::AtomPlacement::last_site, Execution::openmp);
    REQUIRE(rs.size() == rp.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
        CHECK(rs[i].sites == static_cast<int>(i) + 2);
        CHECK(rs[i].sites == rp[i].sites);
        CHECK(rs[i].current == rp[i].current);
        CHECK(rs[i].ratio == rp[i].ratio);
        CHECK(rs[i].residual == rp[i].residual);
    }
}

TEST_CASE("size scan places the atom and normalizes by the ballistic current")
{
    const auto base = testing::chain(2, 0.1, -1.0, 2);
    const double I0 = analytic::ballistic_current(1.0, 0.05, 0.15, 0.15, 0.5);
    const auto rows = arrayn::size_scan(base, 2, 6);
    for (const auto& r : rows) {
        const auto a = testing::chain(r.sites, 0.1, -1.0, r.sites);
        const auto G = arrayn::steady_state_matrix(a, Execution::serial);
        CHECK(r.current == arrayn::array_current(a, G));
        CHECK(r.ratio == doctest::Approx(r.current / I0).epsilon(1e-15));
        CHECK(std::abs(r.current + r.right_current) < 1e-14);
    }
    const auto first = arrayn::size_scan(base, 2, 4, arrayn::AtomPlacement::first_site);
    CHECK(first[2].current == arrayn::array_current(testing::chain(4, 0.1, -1.0, 1),
                                                    arrayn::steady_state_matrix(testing::chain(4, 0.1, -1.0, 1),
                                                                                Execution::serial)));
    CHECK_THROWS_AS(arrayn::size_scan(base, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(arrayn::size_scan(base, 5, 4), std::invalid_argument);
}

TEST_CASE("atom shrinks the current")
{
    const auto rows1 = arrayn::size_scan(testing::chain(2, 0.1, -1.0, 2), 2, 8);
    const auto rows2 = arrayn::size_scan(testing::chain(2, 0.15, -1.0, 2), 2, 8);
    for (std::size_t i = 0; i < rows1.size(); ++i) {
        CHECK(rows1[i].ratio < 1.0);
        CHECK(rows2[i].ratio < rows1[i].ratio);
    }
}
