#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sitevec/corpus.hpp"
#include "sitevec/embedding.hpp"
#include "sitevec/vocab.hpp"

namespace sitevec {

struct TrainConfig {
    std::size_t dim = 300;
    std::size_t window = 5;  // context words per side; actual span is dynamic in {1..window}
    std::size_t negatives = 3;
    std::size_t epochs = 10;
    float initial_lr = 0.025f;
    float final_lr = 1e-4f;
    double subsample_t = 1e-5;  // <= 0 disables subsampling
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::uint64_t report_interval = 5'000'000;  // tokens between progress lines; 0 silences
};

struct TrainStats {
    std::vector<double> epoch_mean_loss;
    std::vector<std::uint64_t> epoch_updates;
    std::uint64_t total_updates = 0;
    double seconds = 0;
};

struct TrainResult {
    EmbeddingMatrix embeddings;  // input-side vectors; the output matrix is discarded
    TrainStats stats;
};

// Returns the matrix produced by the seeded initialization alone (uniform
// [-0.5/m, 0.5/m] input rows). train() starts from exactly this state, so
// epochs=0 reproduces it.
EmbeddingMatrix init_embeddings(const Vocabulary& vocab, const TrainConfig& cfg);

// Skip-gram/negative-sampling training over the encoded corpus. Every
// surviving token (after frequency subsampling) becomes a center word; a
// dynamic half-window b ~ Uniform{1..window} is drawn per center and each
// in-chunk (center, context) pair receives one asynchronous SGD step. The
// learning rate decays linearly with consumed tokens from initial_lr to
// final_lr. Single-worker runs are bitwise deterministic for a fixed seed;
// multi-worker runs share the weight matrices without locks and tolerate
// lost updates. Progress goes to stderr every report_interval tokens.
TrainResult train(const EncodedCorpus& corpus, const Vocabulary& vocab,
                  const SamplingTables& tables, const TrainConfig& cfg);

// Convenience overload: encodes the stream against the vocabulary first.
TrainResult train(const TokenStream& stream, const Vocabulary& vocab,
                  const SamplingTables& tables, const TrainConfig& cfg);

// Instrumented pair enumeration: runs one epoch of the trainer's subsampling
// and windowing logic without touching weights, invoking
// f(chunk_index, center_word_id, context_word_id) for every generated pair.
void enumerate_pairs(
    const EncodedCorpus& corpus, const SamplingTables& tables, const TrainConfig& cfg,
    const std::function<void(std::size_t, std::uint32_t, std::uint32_t)>& f);

}  // namespace sitevec
