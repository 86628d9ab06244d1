#include <ios>
#include <variant>

#include <doctest.h>

#include "rfp/scenario.hpp"

using namespace rfp;

namespace {

const char* kStructured = R"(# comment line
market.r = 0.0
market.s0 = 1.0
market.x0 = 2.0

preference.kappa = 0.4
preference.g = 0.1    # inline comment

ambiguity.kind = structured
ambiguity.mu0 = 0.02
ambiguity.sigma0_sq = 0.1
ambiguity.coupling = 0.5
ambiguity.z_lo = 0.02
ambiguity.z_hi = 0.12

simulation.horizon = 1.0
simulation.n_steps = 8
simulation.n_paths = 1000
simulation.seed = 42
)";

}  // namespace

TEST_CASE("structured scenario round trip") {
    const Scenario sc = parse_scenario_text(kStructured);
    CHECK(sc.market.risk_free_rate == 0.0);
    CHECK(sc.market.initial_wealth == 2.0);
    CHECK(sc.preference.kappa == 0.4);
    CHECK(sc.preference.g.at(100.0) == 0.1);
    CHECK_FALSE(sc.preference.has_f());

    REQUIRE(std::holds_alternative<StructuredAmbiguity>(sc.ambiguity));
    const auto& s = std::get<StructuredAmbiguity>(sc.ambiguity);
    CHECK(s.mu0 == 0.02);
    CHECK(s.sigma0_sq == 0.1);
    CHECK(s.coupling == 0.5);
    CHECK(s.z_lo == 0.02);
    CHECK(s.z_hi == 0.12);

    REQUIRE(sc.simulation.has_value());
    CHECK(sc.simulation->horizon == 1.0);
    CHECK(sc.simulation->n_steps == 8);
    CHECK(sc.simulation->n_paths == 1000);
    CHECK(sc.simulation->seed == 42);
    CHECK(sc.simulation->x0 == 2.0);  // inherited from market.x0
    CHECK(sc.simulation->s0 == 1.0);
    CHECK_FALSE(sc.f_override.has_value());
}

TEST_CASE("simulation block defaults") {
    const std::string text =
        "preference.kappa = 0.4\npreference.g = 0.1\n"
        "ambiguity.kind = volatility\nambiguity.sigma_sq_lo = 0.04\n"
        "ambiguity.sigma_sq_hi = 0.36\nambiguity.mu = 0.05\n"
        "simulation.horizon = 2.0\n";
    const Scenario sc = parse_scenario_text(text);
    REQUIRE(sc.simulation.has_value());
    CHECK(sc.simulation->n_steps == 16);
    CHECK(sc.simulation->n_paths == 100000);
    CHECK(sc.simulation->seed == 1);
    // market defaults
    CHECK(sc.market.risk_free_rate == 0.0);
    CHECK(sc.simulation->x0 == 1.0);
}

TEST_CASE("piecewise g segments") {
    const std::string text =
        "preference.kappa = 0.4\npreference.g = 0:0.1, 1:0.2, 2.5:0.05\n"
        "ambiguity.kind = mean_return\nambiguity.mu_lo = 0.0\n"
        "ambiguity.mu_hi = 0.02\nambiguity.sigma = 0.2\n";
    const Scenario sc = parse_scenario_text(text);
    CHECK(sc.preference.g.segments() == 3);
    CHECK(sc.preference.g.at(0.5) == 0.1);
    CHECK(sc.preference.g.at(1.0) == 0.2);
    CHECK(sc.preference.g.at(3.0) == 0.05);
}

TEST_CASE("overrides are parsed") {
    const std::string text =
        "preference.kappa = 0.4\npreference.g = 0.1\n"
        "ambiguity.kind = mean_return\nambiguity.mu_lo = 0.0\n"
        "ambiguity.mu_hi = 0.02\nambiguity.sigma = 0.2\n"
        "override.f = -0.01\noverride.mu_star = 0.015\n";
    const Scenario sc = parse_scenario_text(text);
    REQUIRE(sc.f_override.has_value());
    CHECK(*sc.f_override == -0.01);
    REQUIRE(sc.mu_star_override.has_value());
    CHECK(*sc.mu_star_override == 0.015);
}

TEST_CASE("diagnostics carry line and key") {
    // duplicate key
    try {
        parse_scenario_text("preference.kappa = 0.4\npreference.kappa = 0.5\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 2);
        CHECK(e.key() == "preference.kappa");
    }

    // unknown key, with everything required present
    try {
        parse_scenario_text(
            "preference.kappa = 0.4\npreference.g = 0.1\n"
            "ambiguity.kind = mean_return\nambiguity.mu_lo = 0.0\n"
            "ambiguity.mu_hi = 0.02\nambiguity.sigma = 0.2\n"
            "ambiguity.spelling_mistake = 1\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 7);
        CHECK(e.key() == "ambiguity.spelling_mistake");
    }

    // bad number
    try {
        parse_scenario_text("preference.kappa = fast\npreference.g = 0.1\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.line() == 1);
        CHECK(e.key() == "preference.kappa");
    }

    // missing required key
    try {
        parse_scenario_text("preference.kappa = 0.4\n");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(e.key() == "preference.g");
    }

    // line without '='
    CHECK_THROWS_AS(parse_scenario_text("preference.kappa 0.4\n"), ScenarioError);

    // semantic validation routed through ScenarioError
    CHECK_THROWS_AS(parse_scenario_text("preference.kappa = 1.4\npreference.g = 0.1\n"
                                        "ambiguity.kind = mean_return\nambiguity.mu_lo = 0.0\n"
                                        "ambiguity.mu_hi = 0.02\nambiguity.sigma = 0.2\n"),
                    ScenarioError);
    CHECK_THROWS_AS(parse_scenario_text("preference.kappa = 0.4\npreference.g = 0.1\n"
                                        "ambiguity.kind = mean_return\nambiguity.mu_lo = 0.3\n"
                                        "ambiguity.mu_hi = 0.02\nambiguity.sigma = 0.2\n"),
                    ScenarioError);
    CHECK_THROWS_AS(parse_scenario_text("preference.kappa = 0.4\npreference.g = 0.1\n"
                                        "ambiguity.kind = triangle\n"),
                    ScenarioError);

    // bad segment list
    CHECK_THROWS_AS(parse_scenario_text("preference.kappa = 0.4\npreference.g = 1:0.2\n"
                                        "ambiguity.kind = mean_return\nambiguity.mu_lo = 0.0\n"
                                        "ambiguity.mu_hi = 0.02\nambiguity.sigma = 0.2\n"),
                    ScenarioError);
}

TEST_CASE("missing scenario file raises an I/O error") {
    bool io_error = false;
    try {
        parse_scenario_file("/nonexistent/path/to.scn");
    } catch (const std::ios_base::failure&) {
        io_error = true;
    }
    CHECK(io_error);
}
