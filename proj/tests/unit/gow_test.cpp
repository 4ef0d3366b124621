#include <doctest.h>

#include <sitevec/gow.hpp>
#include <sitevec/rng.hpp>

#include "oracles.hpp"

using namespace sitevec;

TEST_SUITE_BEGIN("gow");

namespace {

using Graph = BasicGraphOfWords<std::string>;

std::uint32_t node_of(const Graph& g, const std::string& w) {
    for (std::uint32_t i = 0; i < g.node_count(); ++i)
        if (g.nodes()[i].word == w) return i;
    REQUIRE(false);
    return 0;
}

std::uint64_t weight_of(const Graph& g, const std::string& a, const std::string& b) {
    return g.edge_weight(node_of(g, a), node_of(g, b));
}

}  // namespace

TEST_CASE("two tokens in a wide window share one placement edge") {
    auto g = build_graph<std::string>({"a", "b"}, 8);
    REQUIRE(g.node_count() == 2);
    CHECK(weight_of(g, "a", "b") == 1);
}

TEST_CASE("repeated word accumulates one increment per placement") {
    auto g = build_graph<std::string>({"a", "b", "a"}, 3);
    REQUIRE(g.node_count() == 2);
    // Placements: [a b a] -> {a,b} once; [b a] -> once; [a] -> nothing.
    CHECK(weight_of(g, "a", "b") == 2);
    CHECK(g.nodes()[node_of(g, "a")].frequency == 2);
    CHECK(g.nodes()[node_of(g, "a")].first_position == 0);
}

TEST_CASE("per-occurrence scheme counts every token pairing") {
    // [a b b], window 3: occurrences (a,b) at j=1 and j=2 -> weight 2;
    // per-placement counts the distinct pair once for the full window, and
    // nothing for the [b b] suffix.
    auto occ = build_graph<std::string>({"a", "b", "b"}, 3, WindowScheme::per_occurrence);
    CHECK(weight_of(occ, "a", "b") == 2);

    auto plc = build_graph<std::string>({"a", "b", "b"}, 3, WindowScheme::per_placement);
    CHECK(weight_of(plc, "a", "b") == 1);
}

TEST_CASE("self loops are never created") {
    for (auto scheme : {WindowScheme::per_placement, WindowScheme::per_occurrence}) {
        auto g = build_graph<std::string>({"a", "a", "a", "b"}, 4, scheme);
        CHECK(g.edge_weight(node_of(g, "a"), node_of(g, "a")) == 0);
    }
}

TEST_CASE("window below two is rejected") {
    CHECK_THROWS_AS(build_graph<std::string>({"a", "b"}, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_graph<std::string>({"a", "b"}, 0), std::invalid_argument);
}

TEST_CASE("triangle graph has uniform core two and corerank four") {
    auto g = build_graph<std::string>({"a", "b", "c"}, 3);
    auto cores = core_decomposition(g);
    REQUIRE(cores.size() == 3);
    for (auto c : cores) CHECK(c == 2);
    auto scores = corerank(g, cores);
    for (auto s : scores) CHECK(s == 4);
}

TEST_CASE("star graph: all cores one, hub corerank equals leaf count") {
    // h a h b h c with window 2 links the hub to each leaf and nothing else.
    auto g = build_graph<std::string>({"h", "a", "h", "b", "h", "c"}, 2);
    REQUIRE(g.node_count() == 4);
    auto cores = core_decomposition(g);
    for (auto c : cores) CHECK(c == 1);
    auto scores = corerank(g, cores);
    CHECK(scores[node_of(g, "h")] == 3);
    CHECK(scores[node_of(g, "a")] == 1);
}

TEST_CASE("corerank of isolated nodes is zero") {
    // Window 2 over a single token: no edges at all.
    auto g = build_graph<std::string>({"only"}, 2);
    auto cores = core_decomposition(g);
    CHECK(cores == std::vector<std::uint64_t>{0});
    CHECK(corerank(g, cores) == std::vector<std::uint64_t>{0});
}

TEST_CASE("core decomposition matches brute force on random graphs") {
    auto rng = make_rng(404, "test/cores");
    for (int trial = 0; trial < 50; ++trial) {
        // Random token sequence over a small alphabet induces a random graph.
        const std::size_t len = 4 + bounded(rng, 30);
        const std::size_t alpha = 2 + bounded(rng, 10);  // <= 12 distinct nodes
        std::vector<std::string> tokens;
        for (std::size_t i = 0; i < len; ++i)
            tokens.push_back(std::string(1, static_cast<char>('a' + bounded(rng, alpha))));
        const std::size_t window = 2 + bounded(rng, 5);

        auto g = build_graph<std::string>(tokens, window);
        auto cores = core_decomposition(g);

        std::vector<std::vector<std::uint32_t>> adj(g.node_count());
        for (std::uint32_t v = 0; v < g.node_count(); ++v)
            for (const auto& [u, w] : g.adjacency()[v]) adj[v].push_back(u);
        auto oracle = testutil::brute_force_cores(adj);

        REQUIRE(cores.size() == oracle.size());
        for (std::size_t v = 0; v < cores.size(); ++v) CHECK(cores[v] == oracle[v]);

        // CoreRank really is the neighbor core sum, everywhere.
        auto scores = corerank(g, cores);
        for (std::uint32_t v = 0; v < g.node_count(); ++v) {
            std::uint64_t sum = 0;
            for (const auto& [u, w] : g.adjacency()[v]) sum += cores[u];
            CHECK(scores[v] == sum);
        }
    }
}

TEST_CASE("weighted cores use edge weights as peeling degree") {
    // a b a b ... strengthens one edge; plain degree sees a single neighbor.
    std::vector<std::string> tokens;
    for (int i = 0; i < 6; ++i) {
        tokens.push_back("a");
        tokens.push_back("b");
    }
    auto g = build_graph<std::string>(tokens, 2);
    auto plain = core_decomposition(g, false);
    auto weighted = core_decomposition(g, true);
    CHECK(plain[0] == 1);
    CHECK(weighted[0] == g.edge_weight(0, 1));
    CHECK(weighted[0] > plain[0]);
}

TEST_CASE("keyword extraction keeps the requested node fraction in rank order") {
    // 20 distinct words, retain 0.30 -> ceil(6) = 6 keywords.
    std::vector<std::string> tokens;
    for (int i = 0; i < 20; ++i) tokens.push_back("w" + std::to_string(i));
    // Make w0..w2 a dense clique through repetition at the end.
    for (int r = 0; r < 5; ++r)
        for (int i = 0; i < 3; ++i) tokens.push_back("w" + std::to_string(i));

    KeywordParams params;
    params.window = 4;
    params.retain = 0.30;
    params.min_len = 15;
    auto kws = extract_keywords(tokens, params);
    CHECK(kws.size() == 6);

    // The clique words dominate the ranking.
    for (const auto& expect : {"w0", "w1", "w2"}) {
        bool found = false;
        for (const auto& k : kws) found |= (k == expect);
        CHECK(found);
    }
}

TEST_CASE("short documents pass through unchanged") {
    std::vector<std::string> tokens = {"a", "b", "c", "a", "b", "c", "a",
                                       "b", "c", "a", "b", "c", "a", "b"};
    REQUIRE(tokens.size() == 14);
    KeywordParams params;  // min_len 15
    CHECK(extract_keywords(tokens, params) == tokens);
}

TEST_CASE("retain out of range is rejected") {
    std::vector<std::string> tokens(20, "x");
    KeywordParams params;
    params.retain = 0.0;
    CHECK_THROWS_AS(extract_keywords(tokens, params), std::invalid_argument);
    params.retain = 1.5;
    CHECK_THROWS_AS(extract_keywords(tokens, params), std::invalid_argument);
    params.retain = 1.0;
    CHECK_NOTHROW(extract_keywords(tokens, params));
}

TEST_CASE("retain one returns every node exactly once") {
    std::vector<std::string> tokens;
    for (int r = 0; r < 4; ++r)
        for (int i = 0; i < 5; ++i) tokens.push_back("w" + std::to_string(i));
    KeywordParams params;
    params.retain = 1.0;
    params.min_len = 1;
    auto kws = extract_keywords(tokens, params);
    CHECK(kws.size() == 5);  // nodes, not tokens
}

TEST_CASE("keyword ties break by frequency then first position") {
    // x,y,z form a triangle in the 2-core and w hangs off z, so z outranks
    // the x/y tie (corerank 5 vs 4 vs 4); x beats y on frequency (5 vs 4).
    std::vector<std::string> tokens = {"x", "y", "x", "y", "z", "w", "z",
                                       "x", "y", "x", "y", "z", "w", "z", "x"};
    KeywordParams params;
    params.window = 2;
    params.retain = 0.5;  // ceil(0.5 * 4) = 2 of {x,y,z,w}
    params.min_len = 1;
    auto kws = extract_keywords(tokens, params);
    REQUIRE(kws.size() == 2);
    CHECK(kws[0] == "z");
    CHECK(kws[1] == "x");
}

TEST_CASE("integer token graphs work the same way") {
    std::vector<std::uint32_t> tokens = {1, 2, 1, 2, 3};
    auto g = build_graph<std::uint32_t>(tokens, 2);
    CHECK(g.node_count() == 3);
    auto kws = extract_keywords(tokens, KeywordParams{.window = 2, .retain = 1.0, .min_len = 1});
    CHECK(kws.size() == 3);
}

TEST_SUITE_END();
