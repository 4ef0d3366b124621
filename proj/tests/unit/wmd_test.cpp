#include <doctest.h>

#include <cmath>
#include <sitevec/errors.hpp>
#include <sitevec/rng.hpp>
#include <sitevec/wmd.hpp>

#include "lp_oracle.hpp"

using namespace sitevec;

TEST_SUITE_BEGIN("wmd");

namespace {

EmbeddingMatrix random_matrix(std::size_t n, std::size_t dim, std::uint64_t seed) {
    std::vector<std::string> words;
    for (std::size_t i = 0; i < n; ++i) words.push_back("w" + std::to_string(i));
    EmbeddingMatrix emb(std::move(words), dim);
    auto rng = make_rng(seed, "test/wmd");
    for (auto& x : emb.data()) x = static_cast<float>(uniform01(rng) * 2.0 - 1.0);
    return emb;
}

std::vector<std::uint32_t> random_doc(std::mt19937_64& rng, std::uint32_t vocab,
                                      std::size_t max_unique = 5) {
    const std::size_t len = 1 + bounded(rng, 2 * max_unique);
    std::vector<std::uint32_t> ids;
    for (std::size_t i = 0; i < len; ++i)
        ids.push_back(static_cast<std::uint32_t>(bounded(rng, std::min<std::uint64_t>(
                                                                  vocab, max_unique * 2))));
    return ids;
}

}  // namespace

TEST_CASE("nbow normalizes counts over sorted ids") {
    std::vector<std::uint32_t> ids = {7, 3, 3, 7, 7, 1};
    auto p = nbow(ids);
    REQUIRE(p.entries.size() == 3);
    CHECK(p.entries[0].id == 1);
    CHECK(p.entries[1].id == 3);
    CHECK(p.entries[2].id == 7);
    CHECK(p.entries[0].weight == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(p.entries[1].weight == doctest::Approx(2.0 / 6).epsilon(1e-15));
    CHECK(p.entries[2].weight == doctest::Approx(3.0 / 6).epsilon(1e-15));

    double sum = 0;
    for (const auto& e : p.entries) sum += e.weight;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nbow rejects empty documents") {
    CHECK_THROWS_AS(nbow(std::span<const std::uint32_t>{}), empty_document_error);

    Vocabulary v({"known"}, {5});
    CHECK_THROWS_AS(nbow({"missing", "words"}, v), empty_document_error);
    auto p = nbow({"known", "missing"}, v);
    REQUIRE(p.entries.size() == 1);
    CHECK(p.entries[0].weight == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("ground cost is the euclidean distance between rows") {
    EmbeddingMatrix emb({"a", "b"}, 2);
    emb.row(0)[0] = 0.f;
    emb.row(0)[1] = 0.f;
    emb.row(1)[0] = 3.f;
    emb.row(1)[1] = 4.f;
    CHECK(ground_cost(0, 1, emb) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(ground_cost(0, 0, emb) == 0.0);
}

TEST_CASE("word distance table agrees with ground_cost on active pairs") {
    auto emb = random_matrix(20, 6, 21);
    std::vector<std::uint32_t> active = {17, 2, 9, 2, 5};  // unsorted, one duplicate
    WordDistanceTable table(emb, active);
    CHECK(table.size() == 4);
    for (std::uint32_t i : {2u, 5u, 9u, 17u}) {
        for (std::uint32_t j : {2u, 5u, 9u, 17u}) {
            CHECK(table(i, j) ==
                  doctest::Approx(ground_cost(i, j, emb)).epsilon(1e-5));
            CHECK(table(i, j) == table(j, i));
        }
    }
    CHECK(table(2, 2) == 0.0);
}

TEST_CASE("wmd of a document with itself is zero") {
    auto emb = random_matrix(10, 4, 22);
    auto p = nbow(std::vector<std::uint32_t>{1, 2, 2, 7});
    CHECK(wmd(p, p, emb) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("single-word documents reduce to the ground distance") {
    auto emb = random_matrix(10, 4, 23);
    auto p1 = nbow(std::vector<std::uint32_t>{3, 3});
    auto p2 = nbow(std::vector<std::uint32_t>{8});
    CHECK(wmd(p1, p2, emb) == doctest::Approx(ground_cost(3, 8, emb)).epsilon(1e-9));
}

TEST_CASE("wmd matches the LP oracle on random pairs") {
    auto emb = random_matrix(10, 3, 24);
    auto rng = make_rng(42, "test/wmd-oracle");

    for (int i = 0; i < 300; ++i) {
        auto d1 = random_doc(rng, 10);
        auto d2 = random_doc(rng, 10);
        auto p1 = nbow(d1);
        auto p2 = nbow(d2);

        std::vector<double> supply, demand, cost;
        for (const auto& e : p1.entries) supply.push_back(e.weight);
        for (const auto& e : p2.entries) demand.push_back(e.weight);
        for (const auto& a : p1.entries)
            for (const auto& b : p2.entries) cost.push_back(ground_cost(a.id, b.id, emb));

        const double oracle = testutil::transport_lp_oracle(supply, demand, cost);
        const double ours = wmd(p1, p2, emb);
        CHECK(std::fabs(ours - oracle) <= 1e-8 * (1.0 + std::fabs(oracle)));
    }
}

TEST_CASE("wmd metric properties hold on random documents") {
    auto emb = random_matrix(12, 3, 25);
    auto rng = make_rng(77, "test/wmd-metric");
    const double slack = 1e-9;

    for (int i = 0; i < 300; ++i) {
        auto pa = nbow(random_doc(rng, 12));
        auto pb = nbow(random_doc(rng, 12));
        auto pc = nbow(random_doc(rng, 12));

        const double ab = wmd(pa, pb, emb);
        const double ba = wmd(pb, pa, emb);
        const double ac = wmd(pa, pc, emb);
        const double cb = wmd(pc, pb, emb);

        CHECK(ab >= 0.0);
        CHECK(std::fabs(ab - ba) <= slack);
        CHECK(ab <= ac + cb + slack);                      // triangle inequality
        CHECK(centroid_distance(pa, pb, emb) <= ab + slack);  // lower bound
    }
}

TEST_CASE("wmd via a shared distance table matches the direct path") {
    auto emb = random_matrix(15, 5, 26);
    auto rng = make_rng(31, "test/wmd-table");

    std::vector<std::uint32_t> active;
    for (std::uint32_t i = 0; i < 15; ++i) active.push_back(i);
    WordDistanceTable table(emb, active);

    for (int i = 0; i < 100; ++i) {
        auto p1 = nbow(random_doc(rng, 15, 7));
        auto p2 = nbow(random_doc(rng, 15, 7));
        const double direct = wmd(p1, p2, emb);
        const double tabled = wmd(p1, p2, emb, table);
        CHECK(std::fabs(direct - tabled) <= 1e-5 * (1.0 + direct));
    }
}

TEST_CASE("wmd_plan satisfies the transport feasibility invariants") {
    auto emb = random_matrix(10, 3, 27);
    auto rng = make_rng(53, "test/wmd-plan");
    for (int i = 0; i < 50; ++i) {
        auto p1 = nbow(random_doc(rng, 10));
        auto p2 = nbow(random_doc(rng, 10));
        auto plan = wmd_plan(p1, p2, emb);

        std::vector<double> out(p1.entries.size(), 0.0), in(p2.entries.size(), 0.0);
        for (const auto& arc : plan.flows) {
            REQUIRE(arc.from < p1.entries.size());
            REQUIRE(arc.to < p2.entries.size());
            CHECK(arc.mass > 0.0);
            out[arc.from] += arc.mass;
            in[arc.to] += arc.mass;
        }
        for (std::size_t k = 0; k < out.size(); ++k)
            CHECK(std::fabs(out[k] - p1.entries[k].weight) <= 1e-9);
        for (std::size_t k = 0; k < in.size(); ++k)
            CHECK(std::fabs(in[k] - p2.entries[k].weight) <= 1e-9);
        CHECK(plan.objective == doctest::Approx(wmd(p1, p2, emb)).epsilon(1e-12));
    }
}

TEST_CASE("bow distance on raw counts") {
    // Distinct single words: counts (1,0) vs (0,1) -> sqrt(2).
    std::vector<std::uint32_t> a = {0}, b = {1};
    CHECK(bow_euclidean(a, b) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // Same word, different multiplicity: counts differ by 1.
    std::vector<std::uint32_t> aa = {0, 0};
    CHECK(bow_euclidean(aa, a) == doctest::Approx(1.0).epsilon(1e-12));

    // Raw counts, not normalized frequencies: doubling a document moves it.
    std::vector<std::uint32_t> a4 = {0, 0, 0, 0};
    CHECK(bow_euclidean(a4, a) == doctest::Approx(3.0).epsilon(1e-12));

    CHECK(bow_euclidean(a, a) == 0.0);
    CHECK(bow_euclidean({}, {}) == 0.0);
    CHECK(bow_euclidean({}, a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("distance_matrix covers both metrics") {
    auto emb = random_matrix(8, 3, 28);
    std::vector<std::vector<std::uint32_t>> rows = {{0, 1}, {2}};
    std::vector<std::vector<std::uint32_t>> cols = {{0, 1}, {3, 3}, {5}};

    auto wmd_m = distance_matrix(rows, cols, &emb, DocMetric::wmd);
    REQUIRE(wmd_m.size() == 6);
    CHECK(wmd_m[0] == doctest::Approx(0.0).epsilon(1e-12));  // identical docs
    const double direct = wmd(nbow(rows[1]), nbow(cols[2]), emb);
    CHECK(wmd_m[5] == doctest::Approx(direct).epsilon(1e-6));

    auto bow_m = distance_matrix(rows, cols, nullptr, DocMetric::bow_euclidean);
    REQUIRE(bow_m.size() == 6);
    CHECK(bow_m[0] == 0.0);
    CHECK(bow_m[2] == doctest::Approx(bow_euclidean(rows[0], cols[2])).epsilon(1e-12));
}

TEST_SUITE_END();
