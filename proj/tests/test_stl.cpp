#include <doctest.h>

#include <random>

#include "helpers.hpp"

using namespace crepair;

namespace {

std::vector<Vec> ramp_trace(double start, double step, int length) {
    std::vector<Vec> trace;
    for (int t = 0; t < length; ++t) trace.push_back(Vec{{start + step * t, 0.0}});
    return trace;
}

const std::map<std::string, int> kVars{{"pos", 0}, {"vel", 1}};

} // namespace

TEST_CASE("eventually finds a witness") {
    const StlFormula f = parse_stl("(F 0 110 (>= pos 0.45))", kVars, 2);
    CHECK(stl_eval(f, ramp_trace(0.0, 0.005, 111)));      // reaches 0.45 at t = 90
    CHECK_FALSE(stl_eval(f, ramp_trace(0.0, 0.004, 111))); // caps at 0.44
}

TEST_CASE("padding: the last state persists") {
    const StlFormula f = parse_stl("(F 100 110 (>= pos 0.45))", kVars, 2);
    // trace ends at t = 50 with pos = 0.5; times past the end read it
    std::vector<Vec> trace = ramp_trace(0.0, 0.01, 51);
    CHECK(stl_eval(f, trace));
    const StlFormula g = parse_stl("(G 0 110 (<= pos 0.5))", kVars, 2);
    CHECK(stl_eval(g, trace));
}

TEST_CASE("not-F equals G-not on random traces") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::uniform_int_distribution<int> len(1, 40);
    std::uniform_int_distribution<int> bound(0, 30);
    for (int round = 0; round < 1000; ++round) {
        std::vector<Vec> trace;
        const int n = len(rng);
        for (int t = 0; t < n; ++t) trace.push_back(Vec{{val(rng), val(rng)}});
        int t1 = bound(rng);
        int t2 = bound(rng);
        if (t1 > t2) std::swap(t1, t2);
        const double threshold = val(rng);
        const StlFormula p = StlFormula::predicate(Vec{{1.0, 0.0}}, StlFormula::Cmp::geq,
                                                   threshold);
        const StlFormula lhs = StlFormula::negation(StlFormula::eventually(t1, t2, p));
        const StlFormula rhs = StlFormula::always(t1, t2, StlFormula::negation(p));
        CHECK(stl_eval(lhs, trace) == stl_eval(rhs, trace));
    }
}

TEST_CASE("connectives") {
    const StlFormula f =
        parse_stl("(and (F 0 10 (>= pos 0.3)) (G 0 10 (<= vel 0.5)))", kVars, 2);
    CHECK(stl_eval(f, ramp_trace(0.0, 0.05, 11)));
    const StlFormula g = parse_stl("(or (< pos -1) (> pos 1))", kVars, 2);
    CHECK_FALSE(stl_eval(g, ramp_trace(0.0, 0.0, 1)));
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS_AS(parse_stl("(F 0 110 (>= altitude 1))", kVars, 2), ConfigError);
    CHECK_THROWS_AS(parse_stl("(F 110 0 (>= pos 1))", kVars, 2), ContractError);
    CHECK_THROWS_AS(parse_stl("(>= pos)", kVars, 2), ConfigError);
    CHECK_THROWS_AS(parse_stl("(>= pos 0.45) trailing", kVars, 2), ConfigError);
    CHECK_THROWS_AS(parse_stl("(until 0 1 (>= pos 0))", kVars, 2), ConfigError);
}

TEST_CASE("goal predicate extraction") {
    const StlFormula f = parse_stl("(F 0 110 (>= pos 0.45))", kVars, 2);
    REQUIRE(f.goal_predicate() != nullptr);
    CHECK(f.goal_predicate()->eval_predicate(Vec{{0.5, 0.0}}));
    CHECK_FALSE(f.goal_predicate()->eval_predicate(Vec{{0.4, 0.0}}));
    const StlFormula g = parse_stl("(G 0 10 (>= pos 0.0))", kVars, 2);
    CHECK(g.goal_predicate() == nullptr);
    CHECK(f.max_time() == 110);
}

TEST_CASE("empty trace is rejected") {
    const StlFormula f = parse_stl("(>= pos 0.0)", kVars, 2);
    CHECK_THROWS_AS(stl_eval(f, std::vector<Vec>{}), ContractError);
}
