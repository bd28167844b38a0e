#include <doctest.h>

#include <cmath>

#include "qid/errors.hpp"
#include "qid/scenario.hpp"

using namespace qid;

TEST_CASE("builtin families realize the paper sequences") {
    SUBCASE("example2 atoms") {
        ScenarioSpec spec{"example2", {}, {1, 2, 4}, 1.0, {}};
        const auto seq = realize_bv(spec);
        REQUIRE(seq.size() == 3);
        for (std::size_t j = 0; j < 3; ++j) {
            const double n = double(spec.indices[j]);
            CHECK(seq[j] == PiecewiseBV({{0.0, n}, {1.0 / (n * n), -n}}, {}));
        }
    }
    SUBCASE("example3 dyadic window") {
        ScenarioSpec spec{"example3", {}, {1, 2, 3, 4, 5, 6, 7}, 1.0, {}};
        const auto seq = realize_bv(spec);
        // n=5: k=2, a = 1/4, b = 2/4
        CHECK(seq[4] == PiecewiseBV({{0.25, 1.0}, {0.5, -1.0}}, {}));
        // n=7: k=2, a = 3/4, b = 1
        CHECK(seq[6] == PiecewiseBV({{0.75, 1.0}, {1.0, -1.0}}, {}));
        // powers of two restart the window at 0
        CHECK(seq[3] == PiecewiseBV({{0.0, 1.0}, {0.25, -1.0}}, {}));
    }
    SUBCASE("poisson helper mapping") {
        ScenarioSpec spec{"poisson", {{"lambda", 1.0}}, {1}, 1.0, {}};
        const auto pairs = realize(spec);
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0].g == PiecewiseBV::step(1.0, 0.5));
        CHECK(pairs[0].gamma == doctest::Approx(std::sin(1.0)).epsilon(1e-15));
    }
    SUBCASE("atom drift") {
        ScenarioSpec spec{"atom_drift", {}, {4}, 1.0, {}};
        const auto pairs = realize(spec);
        CHECK(pairs[0].gamma == 0.25);
        CHECK(pairs[0].g == PiecewiseBV::step(1.25, 0.5));
    }
}

TEST_CASE("parse and serialize round trip") {
    const std::string text = R"({
      "schema": 1,
      "family": "poisson",
      "params": {"lambda": 1.0},
      "indices": [1, 2, 4],
      "tau": 1.0
    })";
    const ScenarioSpec spec = parse_scenario(text);
    CHECK(spec.family == "poisson");
    CHECK(spec.indices == std::vector<long long>{1, 2, 4});
    const ScenarioSpec again = parse_scenario(serialize_scenario(spec));
    CHECK(again == spec);
}

TEST_CASE("custom scenario with explicit pairs") {
    const std::string text = R"({
      "schema": 1,
      "family": "custom",
      "indices": [1],
      "explicit": [
        {"gamma": 0.5, "tau": 2.0,
         "atoms": [[1.0, 0.5], [2.0, -0.8]],
         "segments": [[-1.0, 1.0, 0.25]]}
      ]
    })";
    const ScenarioSpec spec = parse_scenario(text);
    const auto pairs = realize(spec);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].gamma == 0.5);
    CHECK(pairs[0].tau == 2.0);
    CHECK(pairs[0].g.atoms().size() == 2);
    CHECK(pairs[0].g.segments().size() == 1);

    const ScenarioSpec again = parse_scenario(serialize_scenario(spec));
    CHECK(again == spec);
}

TEST_CASE("parse failures carry a diagnostic") {
    CHECK_THROWS_AS(parse_scenario(""), ParseError);
    CHECK_THROWS_AS(parse_scenario("{}"), ParseError);
    CHECK_THROWS_WITH_AS(parse_scenario(R"({"schema": 1, "family": "nope", "indices": [1]})"),
                         doctest::Contains("unknown family"), ParseError);
    CHECK_THROWS_WITH_AS(parse_scenario(R"({"schema": 1, "family": "poisson", "indices": [2, 1]})"),
                         doctest::Contains("strictly increasing"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"schema": 1, "family": "poisson", "indices": [1], "extra": 3})"),
        doctest::Contains("unknown field"), ParseError);
    CHECK_THROWS_WITH_AS(parse_scenario(R"({"schema": 1, "family": "custom", "indices": [1]})"),
                         doctest::Contains("explicit"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_scenario(
            R"({"schema": 1, "family": "custom", "indices": [1], "explicit": [{"atoms": [[1.0]]}]})"),
        doctest::Contains("atoms[0]"), ParseError);
    CHECK_THROWS_AS(parse_scenario(R"({"family": "poisson", "indices": [1]})"), ParseError);
}
