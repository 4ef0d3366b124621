#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace sitevec {

// Counting scheme for the sliding window. per_placement increments a pair
// once for every window placement in which both words occur; per_occurrence
// increments once per occurrence pair within the window span.
enum class WindowScheme { per_placement, per_occurrence };

// Undirected weighted co-occurrence graph of one document. Token is any
// hashable, equality-comparable word type (string for raw text, an integer
// id for encoded documents).
template <class Token>
class BasicGraphOfWords {
public:
    struct Node {
        Token word;
        std::uint64_t frequency;      // raw occurrences in the document
        std::size_t first_position;   // earliest token index
    };

    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::unordered_map<std::uint32_t, std::uint64_t>>& adjacency() const {
        return adjacency_;
    }
    std::uint64_t edge_weight(std::uint32_t a, std::uint32_t b) const {
        auto it = adjacency_[a].find(b);
        return it == adjacency_[a].end() ? 0 : it->second;
    }

    template <class T>
    friend BasicGraphOfWords<T> build_graph(const std::vector<T>&, std::size_t, WindowScheme);

private:
    std::vector<Node> nodes_;
    std::unordered_map<Token, std::uint32_t> index_;
    std::vector<std::unordered_map<std::uint32_t, std::uint64_t>> adjacency_;

    std::uint32_t intern(const Token& w, std::size_t pos) {
        auto [it, fresh] = index_.emplace(w, static_cast<std::uint32_t>(nodes_.size()));
        if (fresh) {
            nodes_.push_back({w, 0, pos});
            adjacency_.emplace_back();
        }
        ++nodes_[it->second].frequency;
        return it->second;
    }

    void bump(std::uint32_t a, std::uint32_t b, std::uint64_t w) {
        adjacency_[a][b] += w;
        adjacency_[b][a] += w;
    }
};

template <class Token>
BasicGraphOfWords<Token> build_graph(const std::vector<Token>& tokens, std::size_t window,
                                     WindowScheme scheme = WindowScheme::per_placement) {
    if (window < 2) throw std::invalid_argument("graph of words: window must be >= 2");
    BasicGraphOfWords<Token> g;
    std::vector<std::uint32_t> ids;
    ids.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) ids.push_back(g.intern(tokens[i], i));

    if (scheme == WindowScheme::per_occurrence) {
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < std::min(ids.size(), i + window); ++j)
                if (ids[i] != ids[j]) g.bump(ids[i], ids[j], 1);
        return g;
    }

    // One increment per pair per placement: collect the distinct words of
    // each window before pairing them.
    std::vector<std::uint32_t> distinct;
    for (std::size_t s = 0; s < ids.size(); ++s) {
        std::size_t e = std::min(ids.size(), s + window);
        distinct.assign(ids.begin() + static_cast<std::ptrdiff_t>(s),
                        ids.begin() + static_cast<std::ptrdiff_t>(e));
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (std::size_t a = 0; a < distinct.size(); ++a)
            for (std::size_t b = a + 1; b < distinct.size(); ++b)
                g.bump(distinct[a], distinct[b], 1);
    }
    return g;
}

// Core numbers by iterative minimum-degree peeling. With weighted=true the
// peeling degree is the sum of incident edge weights (generalized cores);
// default follows plain degree.
template <class Token>
std::vector<std::uint64_t> core_decomposition(const BasicGraphOfWords<Token>& g,
                                              bool weighted = false) {
    const std::size_t n = g.node_count();
    std::vector<std::uint64_t> deg(n, 0), core(n, 0);
    std::vector<char> removed(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (const auto& [u, w] : g.adjacency()[v]) deg[v] += weighted ? w : 1;

    std::uint64_t level = 0;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!removed[v] && (best == n || deg[v] < deg[best])) best = v;
        level = std::max(level, deg[best]);
        core[best] = level;
        removed[best] = 1;
        for (const auto& [u, w] : g.adjacency()[best])
            if (!removed[u]) deg[u] -= weighted ? w : 1;
    }
    return core;
}

// corerank(v) = sum of the core numbers of v's neighbors; isolated nodes 0.
template <class Token>
std::vector<std::uint64_t> corerank(const BasicGraphOfWords<Token>& g,
                                    const std::vector<std::uint64_t>& cores) {
    if (cores.size() != g.node_count())
        throw std::invalid_argument("corerank: core numbers do not match graph");
    std::vector<std::uint64_t> scores(g.node_count(), 0);
    for (std::size_t v = 0; v < g.node_count(); ++v)
        for (const auto& [u, w] : g.adjacency()[v]) scores[v] += cores[u];
    return scores;
}

struct KeywordParams {
    std::size_t window = 8;
    double retain = 0.30;       // fraction p of nodes kept
    std::size_t min_len = 15;   // shorter documents pass through unchanged
    WindowScheme scheme = WindowScheme::per_placement;
    bool weighted_cores = false;
};

// Top-CoreRank keyword extraction. Documents with fewer than min_len tokens
// are returned unchanged; otherwise the ceil(retain * |nodes|) best nodes are
// returned in rank order, ties broken by higher frequency then earlier first
// occurrence.
template <class Token>
std::vector<Token> extract_keywords(const std::vector<Token>& tokens,
                                    const KeywordParams& params = {}) {
    if (!(params.retain > 0) || params.retain > 1)
        throw std::invalid_argument("extract_keywords: retain fraction must be in (0,1]");
    if (tokens.size() < params.min_len) return tokens;

    auto g = build_graph(tokens, params.window, params.scheme);
    auto cores = core_decomposition(g, params.weighted_cores);
    auto scores = corerank(g, cores);

    std::vector<std::uint32_t> order(g.node_count());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        if (g.nodes()[a].frequency != g.nodes()[b].frequency)
            return g.nodes()[a].frequency > g.nodes()[b].frequency;
        return g.nodes()[a].first_position < g.nodes()[b].first_position;
    });

    std::size_t keep = static_cast<std::size_t>(
        std::ceil(params.retain * static_cast<double>(g.node_count())));
    keep = std::min(keep, order.size());
    std::vector<Token> out;
    out.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) out.push_back(g.nodes()[order[i]].word);
    return out;
}

}  // namespace sitevec
