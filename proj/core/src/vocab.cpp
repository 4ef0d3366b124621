#include "sitevec/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sitevec/errors.hpp"

namespace sitevec {

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> counts)
    : words_(std::move(words)), counts_(std::move(counts)) {
    if (words_.size() != counts_.size())
        throw std::invalid_argument("vocabulary words/counts size mismatch");
    word_to_id_.reserve(words_.size());
    for (std::uint32_t i = 0; i < words_.size(); ++i) {
        auto [it, inserted] = word_to_id_.emplace(words_[i], i);
        if (!inserted) throw std::invalid_argument("duplicate vocabulary word: " + words_[i]);
        total_tokens_ += counts_[i];
    }
}

std::optional<std::uint32_t> Vocabulary::id_of(std::string_view word) const {
    auto it = word_to_id_.find(word);
    if (it == word_to_id_.end()) return std::nullopt;
    return it->second;
}

void Vocabulary::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write vocabulary: " + path.string());
    for (std::size_t i = 0; i < words_.size(); ++i)
        out << words_[i] << '\t' << counts_[i] << '\n';
    if (!out) throw io_error("write failed: " + path.string());
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open vocabulary: " + path.string());
    std::vector<std::string> words;
    std::vector<std::uint64_t> counts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw row_error("vocabulary line has no tab separator", lineno);
        words.push_back(line.substr(0, tab));
        try {
            counts.push_back(std::stoull(line.substr(tab + 1)));
        } catch (const std::exception&) {
            throw row_error("vocabulary line has a malformed count", lineno);
        }
    }
    return Vocabulary(std::move(words), std::move(counts));
}

void WordCounter::add(std::string_view token) {
    auto it = counts_.find(token);
    if (it == counts_.end())
        counts_.emplace(std::string(token), 1);
    else
        ++it->second;
}

Vocabulary WordCounter::finalize(std::uint64_t min_count) const {
    if (counts_.empty()) throw empty_document_error("cannot build a vocabulary from an empty stream");
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    kept.reserve(counts_.size());
    for (const auto& [word, count] : counts_)
        if (count >= min_count) kept.emplace_back(word, count);
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> words;
    std::vector<std::uint64_t> counts;
    words.reserve(kept.size());
    counts.reserve(kept.size());
    for (auto& [word, count] : kept) {
        words.push_back(std::move(word));
        counts.push_back(count);
    }
    return Vocabulary(std::move(words), std::move(counts));
}

Vocabulary build_vocab(const TokenStream& stream, std::uint64_t min_count) {
    WordCounter counter;
    for (const auto& chunk : stream.chunks) counter.add_tokens(chunk);
    return counter.finalize(min_count);
}

double discard_probability(std::uint64_t count, std::uint64_t total, double t) {
    if (t <= 0.0) throw std::invalid_argument("subsampling threshold must be > 0");
    if (count == 0 || total < count) throw std::invalid_argument("bad count/total");
    double f = static_cast<double>(count) / static_cast<double>(total);
    return std::max(0.0, 1.0 - std::sqrt(t / f));
}

SamplingTables build_sampling_tables(const Vocabulary& vocab, double alpha,
                                     std::size_t table_size, double threshold) {
    if (vocab.size() == 0) throw std::invalid_argument("empty vocabulary");
    if (table_size < vocab.size())
        throw std::invalid_argument("negative table smaller than the vocabulary");

    SamplingTables tables;
    tables.alpha = alpha;
    tables.threshold = threshold;

    // threshold <= 0 disables subsampling: every word is always kept.
    tables.discard_prob.resize(vocab.size(), 0.0);
    if (threshold > 0) {
        for (std::uint32_t w = 0; w < vocab.size(); ++w)
            tables.discard_prob[w] =
                discard_probability(vocab.count(w), vocab.total_tokens(), threshold);
    }

    double z = 0.0;
    for (std::uint32_t w = 0; w < vocab.size(); ++w)
        z += std::pow(static_cast<double>(vocab.count(w)), alpha);

    tables.negative_table.resize(table_size);
    std::uint32_t word = 0;
    double cdf = std::pow(static_cast<double>(vocab.count(0)), alpha) / z;
    for (std::size_t i = 0; i < table_size; ++i) {
        tables.negative_table[i] = word;
        if (static_cast<double>(i + 1) / static_cast<double>(table_size) > cdf &&
            word + 1 < vocab.size()) {
            ++word;
            cdf += std::pow(static_cast<double>(vocab.count(word)), alpha) / z;
        }
    }
    return tables;
}

EncodedCorpus encode(const TokenStream& stream, const Vocabulary& vocab) {
    EncodedCorpus corpus;
    corpus.chunk_offsets.push_back(0);
    for (const auto& chunk : stream.chunks) {
        for (const auto& tok : chunk)
            if (auto id = vocab.id_of(tok)) corpus.ids.push_back(*id);
        corpus.chunk_offsets.push_back(corpus.ids.size());
    }
    return corpus;
}

EncodedCorpus encode_corpus_files(const std::vector<std::filesystem::path>& files,
                                  const Tokenizer& tokenizer, std::size_t chunk_size,
                                  const Vocabulary& vocab, std::size_t* raw_tokens) {
    EncodedCorpus corpus;
    corpus.chunk_offsets.push_back(0);
    std::size_t raw = for_each_corpus_chunk(
        files, tokenizer, chunk_size, [&](std::vector<std::string>&& chunk) {
            for (const auto& tok : chunk)
                if (auto id = vocab.id_of(tok)) corpus.ids.push_back(*id);
            corpus.chunk_offsets.push_back(corpus.ids.size());
        });
    if (raw_tokens) *raw_tokens = raw;
    return corpus;
}

}  // namespace sitevec
