#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>

#include "morph/errors.hpp"
#include "morph/scenario.hpp"
#include "morph/toml.hpp"

using namespace morph;

namespace {

const char* kScenarioText = R"(
# Two-configuration adaptive scenario.
[scenario]
name = "fig3_unit"
case = "case2"
dt = 1e-3
horizon = 2.0
log_stride = 10
seed = 7

[vehicle]
mass = 1.4
configurations = 2

[vehicle.config1]
h_nominal = [0.0023, 0.0172, 0.0181, -0.0006, 0.0010, 0.0]
delta_h = [0.01, 0.01, 0.02]

[vehicle.config2]
h_nominal = [0.0014, 0.0052, 0.0053, -0.0001, 0.0005, 0.0]
delta_h = [0.01, 0.01, 0.02]

[gains]
k_r = 0.0424
k_omega = 0.0296
c = 0.15
g = [1.35, 1.5, 1.65]

[switching]
times = [1.0]
sequence = [1, 2]

[reference]
mode = "attitude"
amplitude = [0.4, 0.3, 0.2]
frequency = [0.1, 0.13, 0.07]

[initial]
attitude_axis = [0.0, 1.0, 0.0]
attitude_angle = 0.4

[output]
dir = "out/fig3_unit"
)";

}  // namespace

TEST_CASE("toml parsing covers the value kinds") {
    const auto doc = toml::Document::parse(R"(
top = 3.5
flag = true
label = "x"  # trailing comment
[a.b]
arr = [1, 2, 3]
)");
    CHECK(doc.require_number("top") == 3.5);
    CHECK(doc.get_bool("flag", false));
    CHECK(doc.require_string("label") == "x");
    CHECK(doc.require_array("a.b.arr", 3)[2] == 3.0);
    CHECK(!doc.has("missing"));
    CHECK_THROWS_AS(doc.at("missing"), ConfigInvalid);
}

TEST_CASE("toml syntax errors carry the line number") {
    CHECK_THROWS_WITH_AS(toml::Document::parse("x == 3\n"), doctest::Contains("line 1"),
                         ConfigInvalid);
    CHECK_THROWS_AS(toml::Document::parse("[broken\n"), ConfigInvalid);
    CHECK_THROWS_AS(toml::Document::parse("k = [1, 2\n"), ConfigInvalid);
    CHECK_THROWS_AS(toml::Document::parse("k = 1\nk = 2\n"), ConfigInvalid);
}

TEST_CASE("config round-trips through serialization") {
    const auto doc = toml::Document::parse(kScenarioText);
    const auto again = toml::Document::parse(doc.serialize());
    for (const auto& key : doc.keys()) {
        REQUIRE(again.has(key));
        const auto& a = doc.at(key);
        const auto& b = again.at(key);
        CHECK(a.kind == b.kind);
        CHECK(a.str == b.str);
        CHECK(a.number == b.number);
        CHECK(a.array == b.array);
    }
}

TEST_CASE("scenario mapping fills every section") {
    const ScenarioFile file = load_scenario(toml::Document::parse(kScenarioText));
    const Scenario& sc = file.scenario;
    CHECK(sc.name == "fig3_unit");
    CHECK(sc.controller == ControllerSelect::Case2);
    CHECK(sc.configs.size() == 2);
    CHECK(sc.configs[1].true_inertia.h[2] == doctest::Approx(0.0253));
    CHECK(sc.gains.k_r == 0.0424);
    CHECK(sc.switch_points.size() == 2);
    CHECK(sc.switch_points[1].time == 1.0);
    CHECK(sc.attitude_reference.amplitude.x == 0.4);
    CHECK(file.output_dir == "out/fig3_unit");
    CHECK_NOTHROW(sc.validate());
}

TEST_CASE("unknown keys are rejected by name") {
    const std::string text = std::string(kScenarioText) + "\n[gains]\nk_rr = 1.0\n";
    // Duplicate table is fine, but the misspelled key must be caught.
    CHECK_THROWS_WITH_AS(load_scenario(toml::Document::parse(text)),
                         doctest::Contains("k_rr"), ConfigInvalid);
}

TEST_CASE("environment seed override wins") {
    setenv("MORPHSIM_SEED", "1234", 1);
    const ScenarioFile file = load_scenario(toml::Document::parse(kScenarioText));
    unsetenv("MORPHSIM_SEED");
    CHECK(file.scenario.seed == 1234);
}

TEST_CASE("inadmissible gains fail scenario validation through the certificate") {
    ScenarioFile file = load_scenario(toml::Document::parse(kScenarioText));
    Scenario sc = file.scenario;
    sc.gains.c = 10.0;  // far above any admissible bound
    sc.phi_options.samples = 50000;
    sc.phi_options.verify_samples = 50000;
    CHECK_THROWS_AS(run(sc), InadmissibleC);
}
