#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "semaug/errors.hpp"
#include "semaug/strategy.hpp"

using namespace semaug;

namespace {

AffinityMatrix matrix3() {
    // dog/cat close, bird loosely related to cat only
    return AffinityMatrix({"dog", "cat", "bird"},
                          {1.0, 0.5, 0.2,
                           0.5, 1.0, 0.4,
                           0.2, 0.4, 1.0});
}

ObjectAnnotation object_of(std::string category, double w, double h, std::int64_t id = 1) {
    ObjectAnnotation o;
    o.annotation_id = id;
    o.category = std::move(category);
    o.bbox = BBox{0, 0, w, h};
    o.area = w * h;
    return o;
}

}  // namespace

TEST_CASE("category score sums the affinity row, diagonal included") {
    const auto m = matrix3();
    CHECK(category_score(object_of("dog", 1, 1), m) == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(category_score(object_of("cat", 1, 1), m) == doctest::Approx(1.9).epsilon(1e-12));

    AffinityMatrix solo({"only"}, {1.0});
    CHECK(category_score(object_of("only", 1, 1), solo) == doctest::Approx(1.0));

    AffinityMatrix uncorrelated({"a", "b"}, {1.0, 0.0, 0.0, 1.0});
    CHECK(category_score(object_of("a", 1, 1), uncorrelated) == doctest::Approx(1.0));
    CHECK(category_score(object_of("b", 1, 1), uncorrelated) == doctest::Approx(1.0));

    CHECK_THROWS_AS(category_score(object_of("fish", 1, 1), m), ValidationError);
}

TEST_CASE("area score peaks at alpha * image area and falls off linearly") {
    CHECK(area_score(35.0, 100.0, 0.35) == doctest::Approx(1.0));
    // oracle: 1 - |0.5 - 0.35| = 0.85
    CHECK(area_score(50.0, 100.0, 0.35) == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(area_score(20.0, 100.0, 0.35) == doctest::Approx(0.85).epsilon(1e-12));
    // linear on both sides of the peak
    const double left = area_score(30.0, 100.0, 0.35);
    const double mid = area_score(32.5, 100.0, 0.35);
    CHECK(mid - left == doctest::Approx(area_score(35.0, 100.0, 0.35) - mid).epsilon(1e-12));

    CHECK_THROWS_AS(area_score(101.0, 100.0, 0.35), ValidationError);
    CHECK_THROWS_AS(area_score(10.0, 0.0, 0.35), ValidationError);
}

TEST_CASE("selection probabilities: trivial cases") {
    const auto m = matrix3();
    SUBCASE("single object gets probability one") {
        const auto scores =
            selection_probabilities({object_of("dog", 10, 10)}, m, 0.35, 400.0);
        REQUIRE(scores.size() == 1);
        CHECK(scores[0].probability == doctest::Approx(1.0));
    }
    SUBCASE("identical objects split evenly") {
        const auto scores = selection_probabilities(
            {object_of("dog", 10, 10, 1), object_of("dog", 10, 10, 2)}, m, 0.35, 400.0);
        CHECK(scores[0].probability == doctest::Approx(0.5));
        CHECK(scores[1].probability == doctest::Approx(0.5));
    }
    SUBCASE("empty list is the caller's bug") {
        CHECK_THROWS_AS(selection_probabilities({}, m, 0.35, 400.0), ValidationError);
    }
}

TEST_CASE("softmax of normalized sums matches a hand-computed pair") {
    // oracle: e^1.5 / (e^1.5 + e^0.5) = 0.7310585786300049
    const auto p = softmax_abs({1.5, 0.5});
    CHECK(p[0] == doctest::Approx(0.7310585786300049).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(0.2689414213699951).epsilon(1e-12));
}

TEST_CASE("probabilities are a distribution with positive mass everywhere") {
    const auto m = matrix3();
    for (int round = 0; round < 30; ++round) {
        std::vector<ObjectAnnotation> objects;
        const int count = 1 + round % 5;
        for (int i = 0; i < count; ++i) {
            const double w = 2.0 + ((round * 7 + i * 13) % 17);
            const double h = 1.0 + ((round * 5 + i * 3) % 19);
            objects.push_back(object_of(i % 2 ? "cat" : "bird", w, h, i));
        }
        const auto scores = selection_probabilities(objects, m, 0.35, 40.0 * 40.0);
        double total = 0.0;
        for (const auto& s : scores) {
            CHECK(s.probability > 0.0);
            CHECK(s.category_norm >= 0.0);
            CHECK(s.category_norm <= 1.0);
            CHECK(s.area_norm >= 0.0);
            CHECK(s.area_norm <= 1.0);
            total += s.probability;
        }
        CHECK(std::abs(total - 1.0) <= 1e-9);
    }
}

TEST_CASE("shift invariance: a constant added to every category score changes nothing") {
    const std::vector<double> c1 = {1.7, 1.9, 1.6};
    const std::vector<double> c2 = {0.85, 0.6, 0.99};
    const auto base = selection_probabilities_from_scores(c1, c2);
    for (double shift : {-3.0, 0.5, 1.0, 42.0}) {
        std::vector<double> shifted = c1;
        for (auto& v : shifted) v += shift;
        const auto moved = selection_probabilities_from_scores(shifted, c2);
        for (std::size_t i = 0; i < base.size(); ++i) {
            CHECK(std::abs(base[i].probability - moved[i].probability) <= 1e-12);
        }
    }
}

TEST_CASE("the absolute value in the exponent is a no-op after normalization") {
    const std::vector<double> c1 = {1.7, 1.9, 1.6, 2.2};
    const std::vector<double> c2 = {0.85, 0.6, 0.99, 0.2};
    const auto scores = selection_probabilities_from_scores(c1, c2);
    // plain softmax (no abs) over the same normalized sums
    const auto c1n = min_max_normalize(c1);
    const auto c2n = min_max_normalize(c2);
    double total = 0.0;
    std::vector<double> plain(c1.size());
    for (std::size_t i = 0; i < c1.size(); ++i) {
        plain[i] = std::exp(c1n[i] + c2n[i]);
        total += plain[i];
    }
    for (std::size_t i = 0; i < c1.size(); ++i) {
        CHECK(std::abs(scores[i].probability - plain[i] / total) <= 1e-12);
    }
}

TEST_CASE("degenerate min-max maps every value to zero") {
    CHECK(min_max_normalize({2.0, 2.0, 2.0}) == std::vector<double>{0.0, 0.0, 0.0});
    const auto scores = selection_probabilities_from_scores({5, 5}, {1, 2});
    CHECK(scores[0].category_norm == 0.0);
    CHECK(scores[1].category_norm == 0.0);
}

TEST_CASE("sample_object is exact for a point mass and fair for a coin") {
    std::vector<ObjectScores> point(1);
    point[0].probability = 1.0;
    RandomSource rng(7);
    for (int i = 0; i < 20; ++i) CHECK(sample_object(point, rng) == 0);

    std::vector<ObjectScores> coin(2);
    coin[0].probability = 0.5;
    coin[1].probability = 0.5;
    RandomSource rng2(42);
    int heads = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) heads += sample_object(coin, rng2) == 0 ? 1 : 0;
    // binomial: sigma = sqrt(0.25 / n) = 0.005, allow 3 sigma around 0.5
    const double frequency = static_cast<double>(heads) / draws;
    CHECK(std::abs(frequency - 0.5) <= 3.0 * 0.005);
}

TEST_CASE("identical seeds reproduce identical draws") {
    std::vector<ObjectScores> scores(3);
    scores[0].probability = 0.2;
    scores[1].probability = 0.5;
    scores[2].probability = 0.3;
    RandomSource a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(sample_object(scores, a) == sample_object(scores, b));
}

TEST_CASE("target selection falls back to regeneration") {
    const auto m = matrix3();
    RandomSource rng(5);
    SUBCASE("threshold above every affinity") {
        for (const auto& name : m.names()) {
            CHECK(choose_target_category(name, m, 1.5, 0.5, rng) == name);
        }
    }
    SUBCASE("no off-diagonal candidate above theta") {
        CHECK(choose_target_category("dog", m, 0.9, 0.5, rng) == "dog");
    }
    SUBCASE("unknown source") {
        CHECK_THROWS_AS(choose_target_category("fish", m, 0.1, 0.5, rng), ValidationError);
    }
}

TEST_CASE("target weights follow affinities, with the source downweighted") {
    // single candidate j != src with affinity 0.9 vs self 1.0, beta = 1:
    // oracle P(j) = 0.9 / 1.9 = 0.4736842105263158
    AffinityMatrix m({"a", "b"}, {1.0, 0.9, 0.9, 1.0});
    RandomSource rng(11);
    const int draws = 20000;
    int other = 0;
    for (int i = 0; i < draws; ++i) {
        if (choose_target_category("a", m, 0.0, 1.0, rng) == "b") ++other;
    }
    const double frequency = static_cast<double>(other) / draws;
    const double expected = 0.4736842105263158;
    const double sigma = std::sqrt(expected * (1 - expected) / draws);
    CHECK(std::abs(frequency - expected) <= 3.0 * sigma);
}

TEST_CASE("the candidate set shrinks monotonically in theta") {
    const auto m = matrix3();
    // count distinct targets reachable from "cat" at rising thresholds
    auto support = [&](double theta) {
        std::map<std::string, bool> seen;
        RandomSource rng(3);
        for (int i = 0; i < 2000; ++i) seen[choose_target_category("cat", m, theta, 1.0, rng)] = true;
        return seen.size();
    };
    std::size_t previous = 100;
    for (double theta : {-0.5, 0.3, 0.45, 0.9, 1.2}) {
        const auto count = support(theta);
        CHECK(count <= previous);
        previous = count;
    }
}

TEST_CASE("lowering beta makes regeneration rarer") {
    AffinityMatrix m({"a", "b"}, {1.0, 0.9, 0.9, 1.0});
    auto self_rate = [&](double beta) {
        RandomSource rng(17);
        int self = 0;
        const int draws = 20000;
        for (int i = 0; i < draws; ++i) {
            if (choose_target_category("a", m, 0.0, beta, rng) == "a") ++self;
        }
        return static_cast<double>(self) / draws;
    };
    const double high = self_rate(1.0);    // expect ~ 1/1.9
    const double low = self_rate(0.25);    // expect ~ 0.25/1.15
    CHECK(low < high);
}

TEST_CASE("plans render the prompt template and flag regeneration") {
    const auto object = object_of("dog", 3, 4, 77);
    const auto plan = make_plan(object, "cat", 123, true);
    CHECK(plan.prompt == "A picture of [cat]");
    CHECK(plan.annotation_id == 77);
    CHECK(plan.source_category == "dog");
    CHECK_FALSE(plan.is_regeneration);
    CHECK(plan.seed == 123);

    const auto regen = make_plan(object, "dog", 9, false);
    CHECK(regen.prompt == "A picture of dog");
    CHECK(regen.is_regeneration);
}
