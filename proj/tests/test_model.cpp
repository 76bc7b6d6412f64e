#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "cavheat/model.hpp"
#include "test_common.hpp"

using namespace cavheat;

namespace {

bool mentions(const std::vector<std::string>& list, const std::string& field)
{
    return std::any_of(list.begin(), list.end(), [&](const std::string& s) { return s.rfind(field, 0) == 0; });
}

} // namespace

TEST_CASE("bose occupation")
{
    CHECK(bose_occupation(1.0, 0.0) == 0.0);
    CHECK(bose_occupation(1.0, 1e-3) < 1e-300);
    CHECK(bose_occupation(std::log(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(bose_occupation(1.0, 1.0) == doctest::Approx(0.5819767068693265).epsilon(1e-14));
    // high-temperature expansion T / omega - 1/2 + omega / (12 T)
    CHECK(bose_occupation(1.0, 1e4) == doctest::Approx(1e4 - 0.5 + 1.0 / 12e4).epsilon(1e-12));
    CHECK_THROWS_AS(bose_occupation(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bose_occupation(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bose_occupation(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("two-cavity validation collects every violation")
{
    auto s = testing::two_cavity(1.0, 0.05, 0.1, 0.5, 0.1, 0.0);
    CHECK(violations(s).empty());
    CHECK_NOTHROW(validate(s));

    s.omega_right = 0.0;
    s.coupling = -0.1;
    s.left.rate = 0.0;
    s.right.mean_occupation = -1.0;
    const auto v = violations(s);
    CHECK(v.size() == 4);
    CHECK(mentions(v, "omega_right"));
    CHECK(mentions(v, "coupling"));
    CHECK(mentions(v, "left_reservoir.rate"));
    CHECK(mentions(v, "right_reservoir.mean_occupation"));
    try {
        validate(s);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.violations() == v);
    }
}

TEST_CASE("atom invariants")
{
    auto s = testing::with_atom(testing::two_cavity(1.0, 0.05, 0.1, 0.5, 0.1, 0.0), 0.1, -1.0);
    CHECK(violations(s).empty());

    SUBCASE("negative chi rejected")
    {
        s.atom->dispersive_strength = -0.01;
        CHECK(mentions(violations(s), "atom.dispersive_strength"));
    }
    SUBCASE("sigma_z outside [-1, 1]")
    {
        s.atom->sigma_z = 1.0 + 1e-12;
        CHECK(mentions(violations(s), "atom.sigma_z"));
    }
    SUBCASE("host must be the right cavity")
    {
        s.atom->host_site = 1;
        CHECK(mentions(violations(s), "atom.host_site"));
    }
    SUBCASE("non-finite inputs")
    {
        s.atom->dispersive_strength = std::numeric_limits<double>::quiet_NaN();
        CHECK(mentions(violations(s), "atom.dispersive_strength"));
    }
}

TEST_CASE("array validation")
{
    auto a = testing::chain(4, 0.1, -1.0, 4);
    CHECK(violations(a).empty());
    a.atom->host_site = 5;
    CHECK(mentions(violations(a), "atom.host_site"));
    a.atom->host_site = 0;
    CHECK(mentions(violations(a), "atom.host_site"));
    a = testing::chain(1, 0.0, -1.0, 0);
    CHECK(mentions(violations(a), "sites"));
    CHECK_THROWS_AS(validate(a), ValidationError);
}

TEST_CASE("derived quantities")
{
    const auto s = testing::with_atom(testing::two_cavity(0.8, 0.05, 0.1, 0.5, 0.03, 0.1), 1.2, -1.0);
    CHECK(s.mean_rate() == doctest::Approx(0.065));
    CHECK(s.detuning() == doctest::Approx(0.2));
    CHECK(s.chi() == 1.2);
    CHECK(s.sigma_z() == -1.0);
    CHECK(s.occupation_bias() == doctest::Approx(0.4));

    const auto bare = testing::two_cavity(1.0, 0.05, 0.1, 0.5, 0.1, 0.0);
    CHECK(bare.chi() == 0.0);
}

TEST_CASE("swapping reservoirs twice is the identity")
{
    const auto s = testing::two_cavity(0.9, 0.05, 0.1, 0.5, 0.03, 0.1);
    const auto w = with_swapped_reservoirs(s);
    CHECK(w.left.rate == s.right.rate);
    CHECK(w.left.mean_occupation == s.right.mean_occupation);
    CHECK(w.right.rate == s.left.rate);
    const auto back = with_swapped_reservoirs(w);
    CHECK(back.left.rate == s.left.rate);
    CHECK(back.right.mean_occupation == s.right.mean_occupation);
    CHECK(back.omega_right == s.omega_right);
}

TEST_CASE("two-site array as a two-cavity system")
{
    const auto a = testing::chain(2, 0.1, -1.0, 2);
    const auto s = as_two_cavity(a);
    CHECK(s.omega_left == 1.0);
    CHECK(s.omega_right == 1.0);
    CHECK(s.chi() == 0.1);
    CHECK_THROWS_AS(as_two_cavity(testing::chain(3, 0.1, -1.0, 3)), std::invalid_argument);
    CHECK_THROWS_AS(as_two_cavity(testing::chain(2, 0.1, -1.0, 1)), std::invalid_argument);
}
