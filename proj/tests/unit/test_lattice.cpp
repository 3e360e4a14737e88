#include <doctest.h>

#include <cmath>

#include "vsms/lattice.hpp"
#include "vsms/sampling.hpp"

using namespace vsms;

namespace {

LatticeElement vec2(double a, double b) {
    return LatticeSpace::vector(2).element({a, b});
}

LatticeElement random_element(const LatticeSpace& space, SampleStream& stream, double lo,
                              double hi) {
    std::vector<double> coords(space.dimension());
    for (double& c : coords) c = stream.uniform(lo, hi);
    return space.element(std::move(coords));
}

} // namespace

TEST_CASE("leq is the componentwise order") {
    CHECK(leq(vec2(0, 0), vec2(0, 0)));
    CHECK(leq(vec2(1, 1), vec2(2, 3)));
    // incomparable pair: false both ways, not an error
    CHECK_FALSE(leq(vec2(1, 3), vec2(2, 2)));
    CHECK_FALSE(leq(vec2(2, 2), vec2(1, 3)));
}

TEST_CASE("join and meet are componentwise extrema") {
    const LatticeElement j = join(vec2(1, 3), vec2(2, 2));
    CHECK(j[0] == 2.0);
    CHECK(j[1] == 3.0);
    const LatticeElement m = meet(vec2(1, 3), vec2(2, 2));
    CHECK(m[0] == 1.0);
    CHECK(m[1] == 2.0);
    const LatticeElement x = vec2(0.5, -0.25);
    CHECK(approx_equal(join(x, x), x, 0.0));
}

TEST_CASE("vector operations") {
    const LatticeElement s = add(vec2(1, 2), vec2(3, 4));
    CHECK(s[0] == 4.0);
    CHECK(s[1] == 6.0);
    const LatticeElement z = scale(0.0, vec2(5, 7));
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
    const LatticeElement d = scale(2.0, vec2(1, -1));
    CHECK(d[0] == 2.0);
    CHECK(d[1] == -2.0);
    CHECK(approx_equal(add(vec2(3, -4), LatticeSpace::vector(2).zero()), vec2(3, -4), 0.0));
}

TEST_CASE("cross-space operations are rejected") {
    const LatticeElement a = LatticeSpace::scalar().element(1.0);
    const LatticeElement b = vec2(1, 2);
    CHECK_THROWS_AS(leq(a, b), DimensionError);
    CHECK_THROWS_AS((void)add(a, b), DimensionError);
    CHECK_THROWS_AS((void)join(a, b), DimensionError);
    CHECK_THROWS_AS((void)LatticeSpace::vector(2).element({1.0}), DimensionError);
    CHECK_THROWS_AS((void)scale(std::nan(""), a), ParameterError);
}

TEST_CASE("order axioms hold on sampled triples") {
    for (const LatticeSpace space :
         {LatticeSpace::scalar(), LatticeSpace::vector(3), LatticeSpace::grid(8)}) {
        for (std::uint64_t i = 0; i < 200; ++i) {
            SampleStream stream(17, i);
            const LatticeElement x = random_element(space, stream, -5, 5);
            const LatticeElement y = random_element(space, stream, -5, 5);
            const LatticeElement z = random_element(space, stream, -5, 5);
            CHECK(leq(x, x));
            if (leq(x, y) && leq(y, x)) CHECK(approx_equal(x, y, 0.0));
            if (leq(x, y) && leq(y, z)) CHECK(leq(x, z));
            // absorption
            CHECK(approx_equal(meet(x, join(x, y)), x, 0.0));
            // join is the least upper bound among sampled candidates
            CHECK(leq(x, join(x, y)));
            CHECK(leq(y, join(x, y)));
            CHECK(leq(meet(x, y), x));
            if (leq(x, z) && leq(y, z)) CHECK(leq(join(x, y), z));
        }
    }
}

TEST_CASE("order is compatible with translation and positive scaling") {
    for (const LatticeSpace space :
         {LatticeSpace::scalar(), LatticeSpace::vector(3), LatticeSpace::grid(8)}) {
        std::size_t comparable = 0;
        for (std::uint64_t i = 0; i < 1000; ++i) {
            SampleStream stream(23, i);
            const LatticeElement x = random_element(space, stream, -5, 5);
            LatticeElement y = random_element(space, stream, -5, 5);
            if (stream.next_unit() < 0.5) y = join(x, y); // force comparability half the time
            const LatticeElement z = random_element(space, stream, -5, 5);
            const double omega = stream.uniform(1e-3, 10.0);
            if (!leq(x, y)) continue;
            ++comparable;
            CHECK(leq(add(x, z), add(y, z)));
            CHECK(leq(scale(omega, x), scale(omega, y)));
        }
        CHECK(comparable >= 400);
    }
}

TEST_CASE("archimedean probe divides through and decreases") {
    SUBCASE("unit vector, four terms") {
        const ProbeReport r = archimedean_probe(vec2(1, 1), 4);
        REQUIRE(r.terms.size() == 4);
        CHECK(r.decreasing);
        CHECK(approx_equal(r.terms[1], vec2(0.5, 0.5), 0.0));
        CHECK(approx_equal(r.terms[2], vec2(1.0 / 3.0, 1.0 / 3.0), 0.0));
        CHECK(approx_equal(r.terms[3], vec2(0.25, 0.25), 0.0));
        CHECK(r.final_gauge == doctest::Approx(0.25));
    }
    SUBCASE("zero element stays zero") {
        const ProbeReport r = archimedean_probe(LatticeSpace::vector(2).zero(), 7);
        CHECK(r.decreasing);
        CHECK(r.final_gauge == 0.0);
        for (const auto& t : r.terms) CHECK(max_abs_coordinate(t) == 0.0);
    }
    SUBCASE("final term of (2,6) at depth 3") {
        const ProbeReport r = archimedean_probe(vec2(2, 6), 3);
        CHECK(r.decreasing);
        CHECK(approx_equal(r.terms.back(), vec2(2.0 / 3.0, 2.0), 1e-15));
    }
    SUBCASE("gauges shrink monotonically") {
        const ProbeReport r = archimedean_probe(vec2(0.3, 4.2), 500);
        for (std::size_t i = 1; i < r.gauges.size(); ++i) {
            CHECK(r.gauges[i] <= r.gauges[i - 1]);
        }
    }
    SUBCASE("default depth with early exit") {
        const ProbeReport r = archimedean_probe(LatticeSpace::scalar().element(1e-9));
        CHECK(r.terms.size() < default_probe_depth); // exited once below tau
        CHECK(r.final_gauge < default_tau_eq);
        CHECK(r.decreasing);
    }
    SUBCASE("rejects elements outside the positive cone") {
        CHECK_THROWS_AS((void)archimedean_probe(vec2(1, -1), 4), DomainError);
    }
}

TEST_CASE("contraction collapse check") {
    CHECK(contraction_collapse_check(vec2(0, 0), 0.5));
    CHECK(contraction_collapse_check(vec2(1, 0), 0.5)); // premise false
    CHECK(contraction_collapse_check(vec2(3, 3), 0.9)); // 3 <= 2.7 is false
    for (std::uint64_t i = 0; i < 300; ++i) {
        SampleStream stream(31, i);
        const LatticeElement x = random_element(LatticeSpace::vector(3), stream, 0, 10);
        CHECK(contraction_collapse_check(x, stream.uniform(0.0, 0.999)));
    }
    CHECK_THROWS_AS(contraction_collapse_check(vec2(1, 1), 1.0), ParameterError);
    CHECK_THROWS_AS(contraction_collapse_check(vec2(1, 1), -0.1), ParameterError);
    CHECK_THROWS_AS(contraction_collapse_check(vec2(-1, 1), 0.5), DomainError);
}

TEST_CASE("grid spaces sample functions on the unit interval") {
    const LatticeSpace space = LatticeSpace::grid(5);
    const LatticeElement f = space.sample_function([](double t) { return 2.0 * t; });
    CHECK(f[0] == 0.0);
    CHECK(f[2] == 1.0);
    CHECK(f[4] == 2.0);
    CHECK_THROWS_AS((void)LatticeSpace::vector(3).sample_function([](double) { return 0.0; }),
                    DimensionError);
}
