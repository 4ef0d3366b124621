#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "sitevec/vocab.hpp"

namespace sitevec {

// |V| x m matrix of word vectors, row per word, immutable once loaded.
// Query operations are safe under unlimited concurrent readers.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    EmbeddingMatrix(std::vector<std::string> words, std::size_t dim);

    std::size_t size() const { return words_.size(); }
    std::size_t dim() const { return dim_; }
    const std::vector<std::string>& words() const { return words_; }
    const std::string& word(std::uint32_t id) const { return words_[id]; }
    std::optional<std::uint32_t> id_of(std::string_view word) const;

    // Resolves a word or throws unknown_word_error naming it.
    std::uint32_t require(std::string_view word) const;

    std::span<const float> row(std::uint32_t id) const {
        return {data_.data() + static_cast<std::size_t>(id) * dim_, dim_};
    }
    std::span<float> row(std::uint32_t id) {
        return {data_.data() + static_cast<std::size_t>(id) * dim_, dim_};
    }
    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

private:
    std::vector<std::string> words_;
    std::size_t dim_ = 0;
    std::vector<float> data_;
    StringMap<std::uint32_t> word_to_id_;
};

enum class VectorFormat { text, binary, automatic };

// Text: "vocab_size dim\n" then one "word v1 .. vdim\n" per row (6 significant
// digits). Binary: same ASCII header, then per record the word bytes, a single
// space, and dim little-endian float32; an optional trailing '\n' per record
// is tolerated on read.
void save_embeddings(const EmbeddingMatrix& emb, const std::filesystem::path& path,
                     VectorFormat format);

// `restrict_to`, when non-null, keeps only the listed words (file order).
EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                VectorFormat format = VectorFormat::automatic,
                                const std::unordered_set<std::string>* restrict_to = nullptr);

// (a.b)/(|a||b|). Throws numerical_error on a zero vector.
double cosine(std::span<const float> a, std::span<const float> b);

struct QueryResult {
    std::string word;
    double score;  // cosine similarity, descending
};

std::vector<QueryResult> nearest(const EmbeddingMatrix& emb, std::string_view word,
                                 std::size_t k, bool exclude_query = true);

// Lowest mean cosine to the other list members; ties resolved to the earliest
// position. Needs >= 3 words, all of them in the vocabulary.
std::string mismatch(const EmbeddingMatrix& emb, const std::vector<std::string>& words);

// Vector offset method: k nearest words to vec(b) - vec(a) + vec(c).
std::vector<QueryResult> analogy(const EmbeddingMatrix& emb, std::string_view a,
                                 std::string_view b, std::string_view c, std::size_t k,
                                 bool exclude_inputs = true);

// Nearest vocabulary words to an arbitrary direction vector.
std::vector<QueryResult> nearest_to_vector(const EmbeddingMatrix& emb,
                                           std::span<const float> v, std::size_t k,
                                           const std::vector<std::uint32_t>& exclude = {});

}  // namespace sitevec
