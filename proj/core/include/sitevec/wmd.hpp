#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sitevec/embedding.hpp"
#include "sitevec/transport.hpp"
#include "sitevec/vocab.hpp"

namespace sitevec {

// Sparse normalized bag-of-words: entries sorted by word id, weights strictly
// positive and summing to 1.
struct NBowVector {
    struct Entry {
        std::uint32_t id;
        double weight;
    };
    std::vector<Entry> entries;

    bool empty() const { return entries.empty(); }
};

// Build from already-encoded word ids. Throws empty_document_error when no
// ids are given.
NBowVector nbow(std::span<const std::uint32_t> ids);

// Build from raw tokens; tokens outside the vocabulary are dropped, and a
// document with no surviving token throws empty_document_error.
NBowVector nbow(const std::vector<std::string>& tokens, const Vocabulary& vocab);

// Euclidean distance between the two word vectors.
double ground_cost(std::uint32_t i, std::uint32_t j, const EmbeddingMatrix& emb);

// Optional shared cost table for batch workloads: pairwise distances over the
// active words only (never the full vocabulary squared). Row ids are the
// sorted active ids.
class WordDistanceTable {
public:
    WordDistanceTable(const EmbeddingMatrix& emb, std::vector<std::uint32_t> active_ids);
    double operator()(std::uint32_t word_i, std::uint32_t word_j) const;
    std::size_t size() const { return active_; }

private:
    std::size_t active_ = 0;
    std::vector<float> table_;
    std::vector<std::int32_t> index_;  // word id -> active index, -1 when inactive
};

// Exact Word Mover's Distance: the optimum of the transportation problem
// moving p1's mass onto p2 under euclidean ground costs.
double wmd(const NBowVector& p1, const NBowVector& p2, const EmbeddingMatrix& emb);
double wmd(const NBowVector& p1, const NBowVector& p2, const EmbeddingMatrix& emb,
           const WordDistanceTable& costs);
TransportPlan wmd_plan(const NBowVector& p1, const NBowVector& p2, const EmbeddingMatrix& emb);

// Distance between the documents' weighted centroids: a lower bound on wmd.
double centroid_distance(const NBowVector& p1, const NBowVector& p2,
                         const EmbeddingMatrix& emb);

// Euclidean distance between raw (unnormalized) count vectors. Empty
// documents are allowed and give distance 0 against another empty document.
double bow_euclidean(std::span<const std::uint32_t> ids1, std::span<const std::uint32_t> ids2);

enum class DocMetric { wmd, bow_euclidean };

// Dense pairwise matrix, row-major rows.size() x cols.size(). For the wmd
// metric every document needs at least one token.
std::vector<double> distance_matrix(const std::vector<std::vector<std::uint32_t>>& rows,
                                    const std::vector<std::vector<std::uint32_t>>& cols,
                                    const EmbeddingMatrix* emb, DocMetric metric);

}  // namespace sitevec
