#include <doctest.h>

#include <cmath>

#include "vsms/integral.hpp"

using namespace vsms;

namespace {

CarrierSpace unit_interval() { return CarrierSpace::interval(0.0, 1.0); }

MapSystem shrink_by_twelve_system() {
    return MapSystem::two_map(unit_interval(), [](double x) { return x / 12.0; },
                              [](double x) { return x / 3.0; });
}

ContractionCoefficients third_coeffs() { return ContractionCoefficients{1.0 / 3.0, 0, 0, 0, 0}; }

} // namespace

TEST_CASE("running integrals of the catalog gauges") {
    const IntegralGauge one = IntegralGauge::one();
    const IntegralGauge linear = IntegralGauge::linear();
    const IntegralGauge decay = IntegralGauge::exp_decay();

    CHECK(one.integral(2.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(one.integral(0.0) == 0.0);
    CHECK(linear.integral(0.5) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(linear.integral(0.0) == 0.0);
    CHECK(decay.integral(0.0) == 0.0);

    CHECK_THROWS_AS((void)one.integral(-0.1), DomainError);
    CHECK_THROWS_AS((void)one.density(-1.0), DomainError);
    CHECK_THROWS_AS((void)IntegralGauge::from_name("cubic"), ParameterError);
    CHECK(IntegralGauge::from_name("exp_decay").name() == "exp_decay");
}

TEST_CASE("quadrature matches the closed forms") {
    const IntegralGauge linear = IntegralGauge::linear();
    const IntegralGauge decay = IntegralGauge::exp_decay();
    for (int i = 1; i <= 20; ++i) {
        const double t = 0.1 * i;
        CHECK(std::abs(linear.integral(t) - t * t) <= 1e-12);
        CHECK(std::abs(decay.integral(t) - (1.0 - std::exp(-t))) <= 1e-8);
    }
}

TEST_CASE("running integrals are monotone and positive away from zero") {
    for (const IntegralGauge& g :
         {IntegralGauge::one(), IntegralGauge::linear(), IntegralGauge::exp_decay()}) {
        double prev = 0.0;
        for (int i = 1; i <= 40; ++i) {
            const double t = 0.05 * i;
            const double v = g.integral(t);
            CHECK(v >= prev);
            prev = v;
        }
        for (double eps = 1e-3; eps <= 1.0; eps *= 10.0) {
            CHECK(g.integral(eps) > 0.0);
        }
    }
}

TEST_CASE("integral rate formula") {
    CHECK(integral_rate(third_coeffs()).theta == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(integral_rate(ContractionCoefficients{0.1, 0.05, 0.1, 0.0, 0.05}).theta ==
          doctest::Approx(0.2 / 0.8).epsilon(1e-15));
    CHECK_THROWS_AS((void)integral_rate(ContractionCoefficients{0.5, 0, 0, 0, 0}),
                    ParameterError);
}

TEST_CASE("integral contraction bound for the example system") {
    const VectorSMetric metric = sum_abs_metric(unit_interval());
    const CarrierMap p = [](double x) { return x / 12.0; };
    const CarrierMap k = [](double x) { return x / 3.0; };

    SUBCASE("passes with slack at h1 = 1/3") {
        const InequalityReport r = check_integral_inequality(metric, p, k, third_coeffs(),
                                                             IntegralGauge::one(), 2000, 21);
        CHECK(r.passed);
    }
    SUBCASE("the squared scale keeps the ratio below a third") {
        const InequalityReport r = check_integral_inequality(metric, p, k, third_coeffs(),
                                                             IntegralGauge::linear(), 500, 21);
        CHECK(r.passed);
    }
    SUBCASE("diagonal-only carrier is trivial") {
        const CarrierSpace single = CarrierSpace::finite({0.6});
        const VectorSMetric m = sum_abs_metric(single);
        const CarrierMap id = [](double x) { return x; };
        CHECK(check_integral_inequality(m, id, id, third_coeffs(), IntegralGauge::one(), 20, 0)
                  .passed);
    }
    SUBCASE("fails below the tight threshold with a witness") {
        const InequalityReport r = check_integral_inequality(
            metric, p, k, ContractionCoefficients{0.2, 0, 0, 0, 0}, IntegralGauge::one(), 2000, 21);
        CHECK_FALSE(r.passed);
        REQUIRE(r.witness.has_value());
    }
    SUBCASE("non-scalar metrics are rejected") {
        const VectorSMetric vec = sum_abs_metric(unit_interval(), LatticeSpace::vector(2));
        CHECK_THROWS_AS((void)check_integral_inequality(vec, p, k, third_coeffs(),
                                                        IntegralGauge::one(), 10, 0),
                        UnsupportedLatticeError);
    }
}

TEST_CASE("integral iteration on the example system") {
    const VectorSMetric metric = sum_abs_metric(unit_interval());
    const MapSystem m = shrink_by_twelve_system();

    SUBCASE("converges to zero under the flat gauge") {
        const ConvergenceTrace trace =
            iterate_integral(metric, m, third_coeffs(), IntegralGauge::one(), 1.0, 100, 1e-9);
        REQUIRE(trace.verdict == Verdict::Converged);
        CHECK(std::abs(*trace.limit) < 1e-9);
        CHECK(trace.rate == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(trace.residuals[1] / trace.residuals[0] == doctest::Approx(0.25).epsilon(1e-12));
        // domination in the integral scale at ratio theta
        const double r0 = trace.residuals.front();
        for (std::size_t b = 0; b < trace.residuals.size(); ++b) {
            CHECK(trace.residuals[b] <=
                  std::pow(trace.rate, static_cast<double>(b)) * r0 + default_tau_eq);
        }
    }
    SUBCASE("fixed point start is immediate") {
        const ConvergenceTrace trace =
            iterate_integral(metric, m, third_coeffs(), IntegralGauge::one(), 0.0, 100, 1e-9);
        CHECK(trace.verdict == Verdict::Converged);
        CHECK(trace.iterations() == 1);
        CHECK(*trace.limit == 0.0);
    }
    SUBCASE("the squared scale squares the per-step ratio") {
        const ConvergenceTrace trace =
            iterate_integral(metric, m, third_coeffs(), IntegralGauge::linear(), 1.0, 100, 1e-12);
        REQUIRE(trace.verdict == Verdict::Converged);
        CHECK(trace.residuals[1] / trace.residuals[0] ==
              doctest::Approx(1.0 / 16.0).epsilon(1e-10));
    }
    SUBCASE("non-scalar metrics are rejected") {
        const VectorSMetric vec = sum_abs_metric(unit_interval(), LatticeSpace::vector(2));
        CHECK_THROWS_AS((void)iterate_integral(vec, m, third_coeffs(), IntegralGauge::one(), 1.0),
                        UnsupportedLatticeError);
    }
}

TEST_CASE("flat-gauge integral iteration equals the plain solver with q = p") {
    const VectorSMetric metric = sum_abs_metric(unit_interval());
    const MapSystem m = shrink_by_twelve_system();
    const ConvergenceTrace a =
        iterate_integral(metric, m, third_coeffs(), IntegralGauge::one(), 0.7, 200, 1e-9);
    const ConvergenceTrace b = iterate(metric, m, third_coeffs(), 0.7, Gauge::max_abs(), 200, 1e-9);
    REQUIRE(a.xi.size() == b.xi.size());
    for (std::size_t i = 0; i < a.xi.size(); ++i) {
        CHECK(a.xi[i] == b.xi[i]);
        CHECK(a.gamma[i] == b.gamma[i]);
    }
    CHECK(a.verdict == b.verdict);
}

TEST_CASE("integral uniqueness probe") {
    const VectorSMetric metric = sum_abs_metric(unit_interval());
    const MapSystem m = shrink_by_twelve_system();
    SUBCASE("three starts agree at zero") {
        const double starts[] = {0.0, 0.5, 1.0};
        const UniquenessReport r =
            uniqueness_integral(metric, m, third_coeffs(), IntegralGauge::one(), starts);
        CHECK(r.unique());
        CHECK(std::abs(*r.limit) < 1e-9);
    }
    SUBCASE("a single start is trivially consistent") {
        const double starts[] = {0.5};
        const UniquenessReport r =
            uniqueness_integral(metric, m, third_coeffs(), IntegralGauge::one(), starts);
        CHECK(r.unique());
    }
    SUBCASE("the feasibility gate rejects identity-style coefficients") {
        const double starts[] = {0.1, 0.9};
        CHECK_THROWS_AS((void)uniqueness_integral(metric, m,
                                                  ContractionCoefficients{0.5, 0, 0, 0, 0},
                                                  IntegralGauge::one(), starts),
                        ParameterError);
    }
}
