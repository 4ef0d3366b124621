#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sitevec/corpus.hpp"

namespace sitevec {

// Transparent hash so word maps can be probed with string_view.
struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view sv) const {
        return std::hash<std::string_view>{}(sv);
    }
};
template <class V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

// Training vocabulary in canonical order: descending count, ties broken
// lexicographically. The ordering makes every downstream artifact
// byte-reproducible.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts);

    std::size_t size() const { return words_.size(); }
    const std::vector<std::string>& words() const { return words_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }
    std::uint64_t total_tokens() const { return total_tokens_; }

    const std::string& word(std::uint32_t id) const { return words_[id]; }
    std::uint64_t count(std::uint32_t id) const { return counts_[id]; }
    std::optional<std::uint32_t> id_of(std::string_view word) const;
    bool contains(std::string_view word) const { return id_of(word).has_value(); }

    // One "word<TAB>count" per line, canonical order.
    void save(const std::filesystem::path& path) const;
    static Vocabulary load(const std::filesystem::path& path);

private:
    std::vector<std::string> words_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_tokens_ = 0;
    StringMap<std::uint32_t> word_to_id_;
};

// Incremental word counter for streamed corpora.
class WordCounter {
public:
    void add(std::string_view token);
    template <class Range>
    void add_tokens(const Range& tokens) {
        for (const auto& t : tokens) add(t);
    }
    std::size_t distinct() const { return counts_.size(); }

    // Keeps exactly the words with count >= min_count. Throws
    // empty_document_error if nothing was counted at all.
    Vocabulary finalize(std::uint64_t min_count) const;

private:
    StringMap<std::uint64_t> counts_;
};

Vocabulary build_vocab(const TokenStream& stream, std::uint64_t min_count);

// p = max(0, 1 - sqrt(t / f)) with f = count/total. Monotone non-decreasing
// in f; zero at f <= t. Throws std::invalid_argument for t <= 0.
double discard_probability(std::uint64_t count, std::uint64_t total, double t);

// Subsampling probabilities plus the unigram^alpha negative-sampling table.
struct SamplingTables {
    std::vector<double> discard_prob;          // per word id, in [0,1]
    std::vector<std::uint32_t> negative_table;  // uniform draws ~ count^alpha
    double alpha = 0.75;
    double threshold = 1e-5;
};

// Throws std::invalid_argument when table_size < |V|.
SamplingTables build_sampling_tables(const Vocabulary& vocab, double alpha,
                                     std::size_t table_size, double threshold);

// Corpus mapped to word ids, OOV tokens dropped, chunk structure preserved.
// This is the trainer's input representation.
struct EncodedCorpus {
    std::vector<std::uint32_t> ids;
    std::vector<std::size_t> chunk_offsets;  // size = n_chunks + 1

    std::size_t chunk_count() const {
        return chunk_offsets.empty() ? 0 : chunk_offsets.size() - 1;
    }
    std::size_t token_count() const { return ids.size(); }
};

EncodedCorpus encode(const TokenStream& stream, const Vocabulary& vocab);

// Streaming encode for large corpora; also reports the raw token count seen
// (before OOV dropping) through `raw_tokens` when non-null.
EncodedCorpus encode_corpus_files(const std::vector<std::filesystem::path>& files,
                                  const Tokenizer& tokenizer, std::size_t chunk_size,
                                  const Vocabulary& vocab, std::size_t* raw_tokens = nullptr);

}  // namespace sitevec
