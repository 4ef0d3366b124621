#include "sitevec/wmd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sitevec/errors.hpp"

namespace sitevec {

NBowVector nbow(std::span<const std::uint32_t> ids) {
    if (ids.empty()) throw empty_document_error();
    std::map<std::uint32_t, std::size_t> counts;
    for (std::uint32_t id : ids) ++counts[id];
    NBowVector v;
    v.entries.reserve(counts.size());
    const double total = static_cast<double>(ids.size());
    for (auto [id, c] : counts) v.entries.push_back({id, static_cast<double>(c) / total});
    return v;
}

NBowVector nbow(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
    std::vector<std::uint32_t> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens)
        if (auto id = vocab.id_of(t)) ids.push_back(*id);
    return nbow(ids);
}

double ground_cost(std::uint32_t i, std::uint32_t j, const EmbeddingMatrix& emb) {
    auto a = emb.row(i), b = emb.row(j);
    double s = 0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        double diff = static_cast<double>(a[d]) - static_cast<double>(b[d]);
        s += diff * diff;
    }
    return std::sqrt(s);
}

WordDistanceTable::WordDistanceTable(const EmbeddingMatrix& emb,
                                     std::vector<std::uint32_t> active_ids) {
    std::sort(active_ids.begin(), active_ids.end());
    active_ids.erase(std::unique(active_ids.begin(), active_ids.end()), active_ids.end());
    index_.assign(emb.size(), -1);
    for (std::size_t k = 0; k < active_ids.size(); ++k) {
        if (active_ids[k] >= emb.size())
            throw std::invalid_argument("word distance table: id out of range");
        index_[active_ids[k]] = static_cast<std::int32_t>(k);
    }
    active_ = active_ids.size();
    const std::size_t a = active_;
    table_.assign(a * a, 0.0f);
    for (std::size_t p = 0; p < a; ++p) {
        for (std::size_t q = p + 1; q < a; ++q) {
            float d = static_cast<float>(ground_cost(active_ids[p], active_ids[q], emb));
            table_[p * a + q] = d;
            table_[q * a + p] = d;
        }
    }
}

double WordDistanceTable::operator()(std::uint32_t word_i, std::uint32_t word_j) const {
    std::int32_t p = index_[word_i], q = index_[word_j];
    if (p < 0 || q < 0) throw std::invalid_argument("word distance table: inactive word id");
    return table_[static_cast<std::size_t>(p) * active_ + static_cast<std::size_t>(q)];
}

namespace {

template <class CostFn>
TransportPlan wmd_solve(const NBowVector& p1, const NBowVector& p2, CostFn&& cost_fn) {
    if (p1.empty() || p2.empty()) throw empty_document_error();
    const std::size_t m = p1.entries.size(), n = p2.entries.size();
    std::vector<double> supply(m), demand(n), cost(m * n);
    for (std::size_t i = 0; i < m; ++i) supply[i] = p1.entries[i].weight;
    for (std::size_t j = 0; j < n; ++j) demand[j] = p2.entries[j].weight;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cost[i * n + j] = cost_fn(p1.entries[i].id, p2.entries[j].id);
    return solve_transport(supply, demand, cost);
}

}  // namespace

double wmd(const NBowVector& p1, const NBowVector& p2, const EmbeddingMatrix& emb) {
    return wmd_solve(p1, p2, [&](std::uint32_t a, std::uint32_t b) {
               return ground_cost(a, b, emb);
           })
        .objective;
}

double wmd(const NBowVector& p1, const NBowVector& p2, const EmbeddingMatrix&,
           const WordDistanceTable& costs) {
    return wmd_solve(p1, p2, [&](std::uint32_t a, std::uint32_t b) { return costs(a, b); })
        .objective;
}

TransportPlan wmd_plan(const NBowVector& p1, const NBowVector& p2, const EmbeddingMatrix& emb) {
    return wmd_solve(p1, p2,
                     [&](std::uint32_t a, std::uint32_t b) { return ground_cost(a, b, emb); });
}

double centroid_distance(const NBowVector& p1, const NBowVector& p2,
                         const EmbeddingMatrix& emb) {
    if (p1.empty() || p2.empty()) throw empty_document_error();
    const std::size_t m = emb.dim();
    std::vector<double> c1(m, 0.0), c2(m, 0.0);
    for (const auto& e : p1.entries) {
        auto row = emb.row(e.id);
        for (std::size_t d = 0; d < m; ++d) c1[d] += e.weight * row[d];
    }
    for (const auto& e : p2.entries) {
        auto row = emb.row(e.id);
        for (std::size_t d = 0; d < m; ++d) c2[d] += e.weight * row[d];
    }
    double s = 0;
    for (std::size_t d = 0; d < m; ++d) {
        double diff = c1[d] - c2[d];
        s += diff * diff;
    }
    return std::sqrt(s);
}

double bow_euclidean(std::span<const std::uint32_t> ids1, std::span<const std::uint32_t> ids2) {
    std::map<std::uint32_t, double> diff;
    for (std::uint32_t id : ids1) diff[id] += 1.0;
    for (std::uint32_t id : ids2) diff[id] -= 1.0;
    double s = 0;
    for (auto [id, d] : diff) s += d * d;
    return std::sqrt(s);
}

std::vector<double> distance_matrix(const std::vector<std::vector<std::uint32_t>>& rows,
                                    const std::vector<std::vector<std::uint32_t>>& cols,
                                    const EmbeddingMatrix* emb, DocMetric metric) {
    std::vector<double> out(rows.size() * cols.size(), 0.0);
    if (metric == DocMetric::bow_euclidean) {
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t c = 0; c < cols.size(); ++c)
                out[r * cols.size() + c] = bow_euclidean(rows[r], cols[c]);
        return out;
    }
    if (emb == nullptr)
        throw std::invalid_argument("distance_matrix: wmd metric needs embeddings");

    std::vector<std::uint32_t> active;
    for (const auto& doc : rows) active.insert(active.end(), doc.begin(), doc.end());
    for (const auto& doc : cols) active.insert(active.end(), doc.begin(), doc.end());
    WordDistanceTable table(*emb, std::move(active));

    std::vector<NBowVector> row_bows, col_bows;
    row_bows.reserve(rows.size());
    col_bows.reserve(cols.size());
    for (const auto& doc : rows) row_bows.push_back(nbow(doc));
    for (const auto& doc : cols) col_bows.push_back(nbow(doc));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            out[r * cols.size() + c] = wmd(row_bows[r], col_bows[c], *emb, table);
    return out;
}

}  // namespace sitevec
