#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "crepair/neural.hpp"

using namespace crepair;
using namespace crepair::test;

namespace {

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), path);
    return nlohmann::json::parse(in);
}

const std::string kDataDir = CREPAIR_TEST_DATA_DIR;

} // namespace

TEST_CASE("zero network with identity clamp outputs zero") {
    nlohmann::json j = {
        {"layers",
         {{{"w", {{0.0, 0.0}}}, {"b", {0.0}}, {"act", "tanh"}}}},
        {"out_lo", {-1.0}},
        {"out_hi", {1.0}},
    };
    const BoxSpace in(Vec{{-1.2, -0.07}}, Vec{{0.6, 0.07}});
    const NeuralBehavior nb = NeuralBehavior::from_json(j, in);
    CHECK(eval_neural(nb, Vec{{-0.5, 0.0}})[0] == 0.0);
    CHECK(nb.kind() == BehaviorKind::neural);
}

TEST_CASE("single identity layer clamps the input") {
    nlohmann::json j = {
        {"layers", {{{"w", {{1.0}}}, {"b", {0.0}}, {"act", "id"}}}},
        {"out_lo", {-1.0}},
        {"out_hi", {1.0}},
    };
    const BoxSpace in(Vec{{-3.0}}, Vec{{3.0}});
    const NeuralBehavior nb = NeuralBehavior::from_json(j, in);
    CHECK(eval_neural(nb, Vec{{0.25}})[0] == doctest::Approx(0.25));
    CHECK(eval_neural(nb, Vec{{2.5}})[0] == 1.0);
    CHECK(eval_neural(nb, Vec{{-2.5}})[0] == -1.0);
}

TEST_CASE("shape mismatches are load-time errors") {
    const BoxSpace in(Vec{{0.0, 0.0}}, Vec{{1.0, 1.0}});
    SUBCASE("wrong input width") {
        nlohmann::json j = {
            {"layers", {{{"w", {{1.0}}}, {"b", {0.0}}, {"act", "id"}}}},
            {"out_lo", {-1.0}},
            {"out_hi", {1.0}},
        };
        CHECK_THROWS_AS(NeuralBehavior::from_json(j, in), IoError);
    }
    SUBCASE("bias size mismatch") {
        nlohmann::json j = {
            {"layers", {{{"w", {{1.0, 1.0}}}, {"b", {0.0, 0.0}}, {"act", "id"}}}},
            {"out_lo", {-1.0}},
            {"out_hi", {1.0}},
        };
        CHECK_THROWS_AS(NeuralBehavior::from_json(j, in), IoError);
    }
    SUBCASE("unknown activation") {
        nlohmann::json j = {
            {"layers", {{{"w", {{1.0, 1.0}}}, {"b", {0.0}}, {"act", "relu"}}}},
            {"out_lo", {-1.0}},
            {"out_hi", {1.0}},
        };
        CHECK_THROWS_AS(NeuralBehavior::from_json(j, in), IoError);
    }
}

TEST_CASE("reference network matches the frozen golden table") {
    const BoxSpace in(Vec{{-1.2, -0.07}}, Vec{{0.6, 0.07}});
    const NeuralBehavior nb =
        NeuralBehavior::from_json(load_json(kDataDir + "/mc_weights_reference.json"), in);
    const nlohmann::json golden = load_json(kDataDir + "/neural_golden.json");
    REQUIRE(golden.at("points").size() == 10);
    for (const auto& row : golden.at("points")) {
        const Vec x{{row.at("x")[0].get<double>(), row.at("x")[1].get<double>()}};
        const double expected = row.at("y").get<double>();
        CHECK(eval_neural(nb, x)[0] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("weights json round trip") {
    const BoxSpace in(Vec{{-1.2, -0.07}}, Vec{{0.6, 0.07}});
    const NeuralBehavior nb =
        NeuralBehavior::from_json(load_json(kDataDir + "/mc_weights_reference.json"), in);
    const NeuralBehavior back = NeuralBehavior::from_json(nb.to_json(), in);
    for (double pos : {-1.0, -0.3, 0.5}) {
        const Vec x{{pos, 0.01}};
        CHECK(back.eval(x)[0] == nb.eval(x)[0]);
    }
}
