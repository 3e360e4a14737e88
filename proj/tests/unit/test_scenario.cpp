#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vsms/scenario.hpp"

using namespace vsms;

namespace {

const char* example_4_2_text = R"(
id = example_4_2
mode = solve_integral
seed = 7

[lattice]
kind = scalar

[carrier]
kind = interval
lo = 0
hi = 1

[metric]
name = sum_abs

[maps]
preset = example_4_2

[coefficients]
h1 = 0.3333333333333333
h2 = 0
h3 = 0
h4 = 0
h5 = 0

[solver]
starts = 1.0
gauge = one
tol = 1e-9
)";

std::filesystem::path temp_out_dir(const char* name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("the example scenario parses to the expected system") {
    const Scenario s = parse_scenario(example_4_2_text);
    CHECK(s.id == "example_4_2");
    CHECK(s.mode == Mode::SolveIntegral);
    CHECK(s.seed == 7);
    REQUIRE(s.map_p.has_value());
    CHECK(s.map_p->a == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(s.map_p->b == 0.0);
    REQUIRE(s.map_k.has_value());
    CHECK(s.map_k->a == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(s.metric_name == "sum_abs");
    CHECK(s.gauge_name == "one");
    REQUIRE(s.coefficients.has_value());
    CHECK(s.coefficients->h1 == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(s.starts == std::vector<double>{1.0});
}

TEST_CASE("parse diagnostics name the first offending field") {
    CHECK_THROWS_WITH_AS((void)parse_scenario(""), "missing field: mode", ParseError);
    CHECK_THROWS_WITH_AS((void)parse_scenario("mode = fly\nid = x\n"), "unknown mode: fly",
                         ParseError);
    CHECK_THROWS_WITH_AS((void)parse_scenario("mode = verify_axioms\n"), "missing field: id",
                         ParseError);

    SUBCASE("infeasible coefficients report the weighted sum") {
        std::string text = example_4_2_text;
        const auto pos = text.find("h1 = 0.3333333333333333");
        text.replace(pos, 23, "h1 = 0.5");
        CHECK_THROWS_WITH_AS((void)parse_scenario(text),
                             "infeasible coefficients: weighted sum 1 >= 1", ParseError);
    }
    SUBCASE("carrier escape is rejected before running") {
        std::string text = example_4_2_text;
        const auto pos = text.find("preset = example_4_2");
        text.replace(pos, 20, "p = affine 2 0\nk = affine 0.5 0");
        try {
            (void)parse_scenario(text);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("carrier-escape: map p") != std::string::npos);
        }
    }
    SUBCASE("unknown names are caught") {
        std::string text = example_4_2_text;
        auto pos = text.find("name = sum_abs");
        std::string bad = text;
        bad.replace(pos, 14, "name = euclid");
        CHECK_THROWS_WITH_AS((void)parse_scenario(bad), "unknown metric: euclid", ParseError);

        bad = text;
        pos = bad.find("gauge = one");
        bad.replace(pos, 11, "gauge = cubic");
        CHECK_THROWS_WITH_AS((void)parse_scenario(bad), "unknown gauge: cubic", ParseError);

        bad = text;
        pos = bad.find("preset = example_4_2");
        bad.replace(pos, 20, "p = parabola");
        try {
            (void)parse_scenario(bad);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("unknown map: parabola") != std::string::npos);
        }
    }
    SUBCASE("duplicate and unknown fields") {
        CHECK_THROWS_WITH_AS((void)parse_scenario("mode = verify_axioms\nmode = verify_axioms\n"),
                             "duplicate field: mode", ParseError);
        CHECK_THROWS_WITH_AS(
            (void)parse_scenario("mode = verify_axioms\nid = x\nfizz = buzz\n"),
            "unknown field: fizz", ParseError);
    }
}

TEST_CASE("solve_integral scenario runs to the known fixed point") {
    const Scenario s = parse_scenario(example_4_2_text);
    const auto out = temp_out_dir("vsms_test_run");
    const RunResult r = run(s, out);
    CHECK(r.verdict == "converged");
    CHECK(r.exit_code == 0);
    REQUIRE(r.limit.has_value());
    CHECK(std::abs(*r.limit) < 1e-9);
    REQUIRE(r.trace_path.has_value());
    CHECK(std::filesystem::exists(*r.trace_path));
    const std::string csv = slurp(*r.trace_path);
    CHECK(csv.rfind("iteration,xi,gamma,residual,bound,verdict\n", 0) == 0);
    CHECK(csv.find("converged") != std::string::npos);
}

TEST_CASE("identical scenario and seed reproduce payload and trace bytes") {
    const Scenario s = parse_scenario(example_4_2_text);
    const auto out_a = temp_out_dir("vsms_test_det_a");
    const auto out_b = temp_out_dir("vsms_test_det_b");
    const RunResult a = run(s, out_a);
    const RunResult b = run(s, out_b);
    CHECK(a.payload_json() == b.payload_json());
    CHECK(slurp(*a.trace_path) == slurp(*b.trace_path));
}

TEST_CASE("verify_axioms mode passes for the shipped metrics") {
    const char* text = R"(
id = axioms
mode = verify_axioms
[metric]
name = max_of
base = sum_abs
[solver]
sample_budget = 2000
)";
    const RunResult r = run(parse_scenario(text), temp_out_dir("vsms_test_axioms"));
    CHECK(r.verdict == "pass");
    CHECK(r.exit_code == 0);
}

TEST_CASE("check_contraction with identity maps fails with a witness") {
    const char* text = R"(
id = identity_check
mode = check_contraction
[maps]
preset = identity
[coefficients]
h1 = 0.25
h2 = 0
h3 = 0
h4 = 0
h5 = 0
[solver]
sample_budget = 1000
)";
    const RunResult r = run(parse_scenario(text), temp_out_dir("vsms_test_contr"));
    CHECK(r.verdict == "fail");
    CHECK(r.exit_code == 2);
    REQUIRE(r.counterexample.has_value());
    CHECK(r.counterexample->find("xi") != std::string::npos);
}

TEST_CASE("weak_compat mode flags non-commuting coincidences") {
    const char* text = R"(
id = wc_violation
mode = weak_compat
[maps]
p = affine 0.5 0
k = affine -1 1
[solver]
sample_budget = 2000
tol = 1e-9
)";
    const RunResult r = run(parse_scenario(text), temp_out_dir("vsms_test_wc"));
    CHECK(r.verdict == "violation");
    CHECK(r.exit_code == 2);
}

TEST_CASE("uniqueness mode agrees across starts") {
    const char* text = R"(
id = uniq
mode = uniqueness
[maps]
preset = example_4_2
[coefficients]
h1 = 0.3333333333333333
h2 = 0
h3 = 0
h4 = 0
h5 = 0
[solver]
starts = 0.0 0.3 1.0
)";
    const RunResult r = run(parse_scenario(text), temp_out_dir("vsms_test_uniq"));
    CHECK(r.verdict == "unique");
    CHECK(r.exit_code == 0);
    CHECK(std::abs(*r.limit) < 1e-9);
}

TEST_CASE("solve_two_map runs the two-map specialization") {
    const char* text = R"(
id = two_map
mode = solve_two_map
[maps]
p = affine 0.1 0
k = affine 0.5 0
[coefficients]
h1 = 0.3
h2 = 0
h3 = 0
h4 = 0
h5 = 0
[solver]
starts = 0.9
)";
    const RunResult r = run(parse_scenario(text), temp_out_dir("vsms_test_two"));
    CHECK(r.verdict == "converged");
    CHECK(std::abs(*r.limit) < 1e-9);
}

TEST_CASE("payload json is stable and machine readable") {
    const char* text = R"(
id = axioms2
mode = verify_axioms
[solver]
sample_budget = 500
)";
    const RunResult r = run(parse_scenario(text), temp_out_dir("vsms_test_payload"));
    const std::string payload = r.payload_json();
    CHECK(payload.find("\"id\":\"axioms2\"") != std::string::npos);
    CHECK(payload.find("\"mode\":\"verify_axioms\"") != std::string::npos);
    CHECK(payload.find("\"verdict\":\"pass\"") != std::string::npos);
    CHECK(payload.find("wall") == std::string::npos); // timing never enters the payload
}

TEST_CASE("catalog listings cover the documented names") {
    const auto metrics = metric_catalog();
    CHECK(std::find(metrics.begin(), metrics.end(), "sum_abs") != metrics.end());
    CHECK(std::find(metrics.begin(), metrics.end(), "max_of") != metrics.end());
    const auto gauges = gauge_catalog();
    CHECK(gauges == std::vector<std::string>{"one", "linear", "exp_decay"});
    CHECK(mode_catalog().size() == 7);
}
