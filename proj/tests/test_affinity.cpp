#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "semaug/affinity.hpp"
#include "semaug/embedding.hpp"
#include "semaug/errors.hpp"
#include "testutil.hpp"

using namespace semaug;

namespace {

class VectorsProvider : public EmbeddingProvider {
public:
    explicit VectorsProvider(std::vector<std::vector<double>> vectors)
        : vectors_(std::move(vectors)) {}

    std::vector<std::vector<double>> embed(const std::vector<std::string>& names) override {
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < names.size(); ++i) out.push_back(vectors_[i % vectors_.size()]);
        return out;
    }

private:
    std::vector<std::vector<double>> vectors_;
};

class FailingProvider : public EmbeddingProvider {
public:
    std::vector<std::vector<double>> embed(const std::vector<std::string>& names) override {
        for (const auto& name : names) {
            if (name == "zebra") throw BackendError("provider offline for category \"zebra\"");
        }
        return std::vector<std::vector<double>>(names.size(), {1.0, 0.0});
    }
};

// Independent oracle, written from scratch against the definition.
double cosine_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

EmbeddingTable table_of(std::vector<std::string> names,
                        std::vector<std::vector<double>> vectors) {
    EmbeddingTable t;
    t.names = std::move(names);
    t.vectors = std::move(vectors);
    t.dimension = t.vectors.front().size();
    return t;
}

}  // namespace

TEST_CASE("embed_categories keeps provider vectors verbatim, in category order") {
    auto categories = CategorySet::from_names({"a", "b", "c"});
    VectorsProvider provider({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const auto table = embed_categories(categories, provider);
    CHECK(table.dimension == 3);
    CHECK(table.names == std::vector<std::string>{"a", "b", "c"});
    CHECK(table.vectors[0] == std::vector<double>{1, 0, 0});
    CHECK(table.vectors[2] == std::vector<double>{0, 0, 1});
}

TEST_CASE("provider failure carries the category name") {
    auto categories = CategorySet::from_names({"dog", "zebra"});
    FailingProvider provider;
    CHECK_THROWS_WITH_AS(embed_categories(categories, provider), doctest::Contains("zebra"),
                         BackendError);
}

TEST_CASE("dimension mismatch across categories fails validation") {
    auto categories = CategorySet::from_names({"a", "b"});
    class Mixed : public EmbeddingProvider {
        std::vector<std::vector<double>> embed(const std::vector<std::string>&) override {
            return {{1.0, 0.0}, {1.0, 0.0, 0.0}};
        }
    } provider;
    CHECK_THROWS_AS(embed_categories(categories, provider), ValidationError);
}

TEST_CASE("file-backed provider returns the file contents") {
    const auto dir = testutil::fresh_temp_dir("emb_file");
    nlohmann::json emb;
    emb["a"] = {0.25, -0.5};
    emb["b"] = {1.0, 2.0};
    emb["c"] = {3.5, 4.25};
    emb["d"] = {-1.0, 0.125};
    emb["e"] = {0.0, 9.0};
    std::ofstream(dir / "emb.json") << emb.dump();

    FileEmbeddingProvider provider(dir / "emb.json");
    const auto out = provider.embed({"e", "a"});
    CHECK(out[0] == std::vector<double>{0.0, 9.0});
    CHECK(out[1] == std::vector<double>{0.25, -0.5});
    CHECK_THROWS_AS(provider.embed({"nope"}), BackendError);
}

TEST_CASE("cosine basics") {
    CHECK(cosine_similarity(std::vector<double>{2, 4}, std::vector<double>{2, 4}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}) ==
          doctest::Approx(0.0));
    // oracle: (1*1 + 0*1) / (1 * sqrt(2)) = 0.7071067811865475
    CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{1, 1}) ==
          doctest::Approx(0.7071067811865475).epsilon(1e-12));
    CHECK_THROWS_AS(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 1}),
                    ValidationError);
}

TEST_CASE("matrix matches the cosine oracle entrywise and holds its invariants") {
    const std::vector<std::vector<double>> vectors = {
        {0.3, -1.2, 0.5}, {2.0, 0.1, 0.1}, {-0.4, 0.4, 0.9}, {1.0, 1.0, 1.0}, {0.0, 0.1, 0.0}};
    const auto table = table_of({"c1", "c2", "c3", "c4", "c5"}, vectors);
    const auto matrix = build_affinity_matrix(table);

    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            const double expected = i == j ? 1.0 : cosine_oracle(vectors[i], vectors[j]);
            CHECK(std::abs(matrix.at(i, j) - expected) <= 1e-9);
            CHECK(std::abs(matrix.at(i, j) - matrix.at(j, i)) <= 1e-9);
            CHECK(matrix.at(i, j) >= -1.0 - 1e-9);
            CHECK(matrix.at(i, j) <= 1.0 + 1e-9);
        }
        CHECK(std::abs(matrix.at(i, i) - 1.0) <= 1e-9);
    }
}

TEST_CASE("matrix invariants hold over random embeddings") {
    std::mt19937_64 gen(1234);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int round = 0; round < 50; ++round) {
        const std::size_t n = 2 + round % 6;
        const std::size_t d = 1 + round % 7;
        std::vector<std::vector<double>> vectors;
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> v(d);
            double norm = 0.0;
            do {
                norm = 0.0;
                for (auto& x : v) {
                    x = dist(gen);
                    norm += x * x;
                }
            } while (norm == 0.0);
            vectors.push_back(v);
            names.push_back("cat" + std::to_string(i));
        }
        const auto matrix = build_affinity_matrix(table_of(names, vectors));
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(std::abs(matrix.at(i, i) - 1.0) <= 1e-9);
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(std::abs(matrix.at(i, j) - matrix.at(j, i)) <= 1e-9);
                CHECK(std::abs(matrix.at(i, j)) <= 1.0 + 1e-9);
            }
        }
    }
}

TEST_CASE("scaling any embedding by a positive scalar leaves the matrix unchanged") {
    const std::vector<std::vector<double>> vectors = {{0.3, -1.2, 0.5}, {2.0, 0.1, 0.1},
                                                      {-0.4, 0.4, 0.9}};
    auto scaled = vectors;
    for (auto& x : scaled[1]) x *= 37.5;
    const auto a = build_affinity_matrix(table_of({"x", "y", "z"}, vectors));
    const auto b = build_affinity_matrix(table_of({"x", "y", "z"}, scaled));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(a.at(i, j) - b.at(i, j)) <= 1e-9);
        }
    }
}

TEST_CASE("zero-norm embedding is rejected") {
    CHECK_THROWS_AS(build_affinity_matrix(table_of({"a", "b"}, {{0.0, 0.0}, {1.0, 0.0}})),
                    ValidationError);
}

namespace {

AffinityMatrix matrix_with_offdiag(const std::vector<double>& upper) {
    // Builds a symmetric matrix from an upper-triangle listing (row-major).
    std::size_t n = 2;
    while (n * (n - 1) / 2 < upper.size()) ++n;
    REQUIRE(n * (n - 1) / 2 == upper.size());
    std::vector<double> values(n * n, 0.0);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        values[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j, ++k) {
            values[i * n + j] = upper[k];
            values[j * n + i] = upper[k];
        }
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("c" + std::to_string(i));
    return AffinityMatrix(names, values);
}

}  // namespace

TEST_CASE("threshold on a degenerate distribution returns the common value") {
    const auto matrix = matrix_with_offdiag({0.4, 0.4, 0.4});
    CHECK(affinity_threshold(matrix, 0.01) == doctest::Approx(0.4));
    CHECK(affinity_threshold(matrix, 0.5) == doctest::Approx(0.4));
    CHECK(affinity_threshold(matrix, 1.0) == doctest::Approx(0.4));
}

TEST_CASE("threshold picks the m-th largest off-diagonal value") {
    const auto matrix = matrix_with_offdiag({0.1, 0.5, 0.9});
    CHECK(affinity_threshold(matrix, 1.0 / 3.0) == doctest::Approx(0.9));  // oracle: sort desc, take 1st
    CHECK(affinity_threshold(matrix, 2.0 / 3.0) == doctest::Approx(0.5));
    CHECK(affinity_threshold(matrix, 1.0) == doctest::Approx(0.1));
}

TEST_CASE("threshold is monotone and its admitted set shrinks with the fraction") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> upper(15);  // 6 categories
    for (auto& x : upper) x = dist(gen);
    const auto matrix = matrix_with_offdiag(upper);

    const std::vector<double> fractions = {0.05, 0.2, 0.4, 0.7, 1.0};
    double previous = -2.0;
    std::size_t previous_count = 16;
    for (auto it = fractions.rbegin(); it != fractions.rend(); ++it) {
        const double t = affinity_threshold(matrix, *it);
        CHECK(t >= previous);  // smaller fraction -> threshold can only rise
        previous = t;
        std::size_t admitted = 0;
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t j = i + 1; j < 6; ++j) {
                if (matrix.at(i, j) >= t) ++admitted;
            }
        }
        CHECK(admitted <= previous_count);  // subset relation on the admitted pairs
        previous_count = admitted;
    }
}

TEST_CASE("threshold requires at least two categories") {
    AffinityMatrix one({"solo"}, {1.0});
    CHECK_THROWS_AS(affinity_threshold(one, 0.5), ValidationError);
    const auto matrix = matrix_with_offdiag({0.5});
    CHECK_THROWS_AS(affinity_threshold(matrix, 0.0), ValidationError);
    CHECK_THROWS_AS(affinity_threshold(matrix, 1.5), ValidationError);
}
