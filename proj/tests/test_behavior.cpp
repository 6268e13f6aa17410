#include <doctest.h>

#include <random>

#include "helpers.hpp"

using namespace crepair;
using namespace crepair::test;

namespace {

/// All cell maps for m input cells and n output cells, odometer order.
std::vector<std::vector<std::int64_t>> all_maps(std::int64_t m, std::int64_t n) {
    std::vector<std::vector<std::int64_t>> maps;
    std::vector<std::int64_t> cur(static_cast<std::size_t>(m), 0);
    for (;;) {
        maps.push_back(cur);
        std::int64_t k = m - 1;
        for (; k >= 0; --k) {
            if (++cur[static_cast<std::size_t>(k)] < n) break;
            cur[static_cast<std::size_t>(k)] = 0;
        }
        if (k < 0) break;
    }
    return maps;
}

} // namespace

TEST_CASE("behavior distance basics") {
    const BoxSpace in = unit_interval();
    const BoxSpace out = control_box();
    const SamplingPlan probe = SamplingPlan::lattice(in, 9);

    const auto c1 = constant_behavior(in, out, Vec{{0.2}});
    const auto c2 = constant_behavior(in, out, Vec{{-0.3}});
    CHECK(behavior_distance(*c1, *c1, probe) == 0.0);
    CHECK(behavior_distance(*c1, *c2, probe) == doctest::Approx(0.5).epsilon(1e-12));

    SUBCASE("mismatched spaces") {
        const auto other = constant_behavior(BoxSpace(Vec{{0.0}}, Vec{{2.0}}), out, Vec{{0.0}});
        CHECK_THROWS_AS(behavior_distance(*c1, *other, probe), DimensionError);
    }
}

TEST_CASE("representative distance: one cell moved to the adjacent output cell") {
    const ToyModel toy(4, 20); // output cells of width 0.1
    RepresentativeBehavior g1 = toy.rep({3, 5, 7, 9});
    RepresentativeBehavior g2 = toy.rep({3, 5, 8, 9});
    CHECK(behavior_distance(g1, g2) == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(behavior_distance(g1, g1) == 0.0);
}

TEST_CASE("behavior order follows the two-sided condition") {
    const BoxSpace in = unit_interval();
    const BoxSpace out = control_box();
    const SamplingPlan probe = SamplingPlan::lattice(in, 5);
    const auto base = constant_behavior(in, out, Vec{{0.0}});
    const auto f1 = constant_behavior(in, out, Vec{{0.3}});
    const auto f2 = constant_behavior(in, out, Vec{{0.7}});

    CHECK(leq_behavior(*base, *f2, *base, probe)); // base is minimal
    CHECK(leq_behavior(*f1, *f1, *base, probe));   // reflexive
    CHECK(leq_behavior(*f1, *f2, *base, probe));
    CHECK_FALSE(leq_behavior(*f2, *f1, *base, probe));
}

TEST_CASE("behavior order is a partial order on small representative spaces") {
    for (const auto& [m, n] : std::vector<std::pair<std::int64_t, std::int64_t>>{{2, 3}, {3, 3}}) {
        const ToyModel toy(m, n);
        std::vector<RepresentativeBehavior> reps;
        for (auto& map : all_maps(m, n)) reps.push_back(toy.rep(map));
        const RepresentativeBehavior& base = reps.front();

        for (const auto& f1 : reps) {
            CHECK(leq_behavior(f1, f1, base)); // reflexive
            for (const auto& f2 : reps) {
                const bool le12 = leq_behavior(f1, f2, base);
                const bool le21 = leq_behavior(f2, f1, base);
                if (le12 && le21) CHECK(f1.map() == f2.map()); // antisymmetric
                if (!le12) continue;
                for (const auto& f3 : reps) { // transitive
                    if (leq_behavior(f2, f3, base)) CHECK(leq_behavior(f1, f3, base));
                }
            }
        }
    }
}

TEST_CASE("representative distance is a pseudometric") {
    const ToyModel toy(3, 5);
    std::mt19937_64 rng(11);
    auto random_rep = [&] {
        std::vector<std::int64_t> map(3);
        for (auto& c : map) c = static_cast<std::int64_t>(rng() % 5);
        return toy.rep(map);
    };
    for (int round = 0; round < 200; ++round) {
        const auto a = random_rep();
        const auto b = random_rep();
        const auto c = random_rep();
        const double ab = behavior_distance(a, b);
        const double ba = behavior_distance(b, a);
        const double ac = behavior_distance(a, c);
        const double cb = behavior_distance(c, b);
        CHECK(ab == ba);
        CHECK(behavior_distance(a, a) == 0.0);
        CHECK(ab <= ac + cb + 1e-12);
    }
}

TEST_CASE("representative behavior evaluates to output cell centers") {
    const ToyModel toy(2, 4);
    const RepresentativeBehavior g = toy.rep({0, 3});
    CHECK(g.eval(Vec{{0.1}})[0] == doctest::Approx(-0.75));
    CHECK(g.eval(Vec{{0.9}})[0] == doctest::Approx(0.75));
    CHECK(g.kind() == BehaviorKind::representative);

    const BehaviorPtr r = recon(g);
    CHECK(r->kind() == BehaviorKind::representative);
    CHECK(r->eval(Vec{{0.1}})[0] == doctest::Approx(-0.75));

    SUBCASE("total map required") {
        CHECK_THROWS_AS(toy.rep({0}), GridMismatchError);
        CHECK_THROWS_AS(toy.rep({0, 4}), IndexError);
    }
}

TEST_CASE("cell map json round trip") {
    const ToyModel toy(3, 4);
    const RepresentativeBehavior g = toy.rep({1, 0, 3});
    const RepresentativeBehavior back = representative_from_json(to_json(g));
    CHECK(back.map() == g.map());
    CHECK(back.same_grids(g));
}
