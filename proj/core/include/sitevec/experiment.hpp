#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sitevec/corpus.hpp"
#include "sitevec/embedding.hpp"
#include "sitevec/gow.hpp"
#include "sitevec/knn.hpp"
#include "sitevec/wmd.hpp"

namespace sitevec {

struct ExperimentConfig {
    std::vector<std::string> tasks = {"severity", "injury_type", "trade"};
    std::vector<std::size_t> k_grid = {5, 10, 15, 20, 25};
    DocMetric metric = DocMetric::wmd;
    bool compress = false;  // adds a keyword-compressed pipeline run for comparison
    std::size_t n_folds = 4;
    std::optional<std::uint64_t> fold_seed;  // nullopt = contiguous folds in dataset order
    std::size_t workers = 1;
    std::filesystem::path cache_dir;  // empty disables the distance cache
    bool centroid_prefilter = false;  // exact k-NN pruning via the centroid lower bound
    bool pool_folds = true;           // false averages fold-level scores instead
    KeywordParams keywords;
};

struct KRunReport {
    std::size_t k;
    ClassReport report;
};

struct TaskReport {
    std::string task;
    std::vector<KRunReport> by_k;
};

// One full pipeline pass (compressed or not) over every task and k.
struct VariantReport {
    bool compressed = false;
    std::vector<TaskReport> tasks;
    std::vector<double> fold_distance_seconds;
    double distance_seconds_total = 0;
};

struct RelativeChange {
    std::string task;
    std::size_t k;
    double full_overall = 0;        // micro-F1, percent
    double compressed_overall = 0;  // micro-F1, percent
    double relative_change = 0;     // percent change vs the full run, negative = drop
};

struct ExperimentResult {
    std::vector<VariantReport> variants;  // full first, compressed second when enabled
    std::vector<RelativeChange> relative_changes;
    std::size_t documents_used = 0;
    std::size_t excluded_empty = 0;  // no in-vocabulary tokens
    std::size_t cache_hits = 0;
    std::size_t cache_misses = 0;
};

// Cross-validated k-NN classification of labeled reports. Reports must
// already be filtered to the fully labeled subset; narratives are tokenized
// and restricted to the embedding vocabulary, and documents left without
// tokens are excluded from train and test (counted in the result). Per-fold
// test x train distance matrices are cached under cache_dir keyed by fold,
// metric, compression, and a content fingerprint; the prefilter bypasses the
// cache because pruned rows are k-dependent.
ExperimentResult run_experiment(const std::vector<ReportRecord>& reports,
                                const EmbeddingMatrix& embeddings, const Tokenizer& tokenizer,
                                const ExperimentConfig& cfg);

}  // namespace sitevec
