#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sitevec {

struct FoldPlan {
    std::vector<std::uint32_t> assignment;  // per-document fold index
    std::size_t n_folds = 0;

    std::vector<std::vector<std::uint32_t>> fold_members() const;
};

// Partitions documents into n_folds folds whose sizes differ by at most one.
// Without a seed the folds are contiguous blocks in dataset order; with a
// seed the documents are shuffled first (deterministically).
FoldPlan make_folds(std::size_t n_docs, std::size_t n_folds,
                    std::optional<std::uint64_t> seed = std::nullopt);

// Training indices sorted by ascending distance, ties toward the lower index.
std::vector<std::uint32_t> distance_order(std::span<const double> distances);

// Modal label among the first k entries of a distance_order ranking. Class
// ties are broken by the smaller summed distance among each tied class's
// neighbors, then by class name.
std::string predict_from_order(std::span<const std::uint32_t> order,
                               std::span<const double> distances,
                               const std::vector<std::string>& labels, std::size_t k);

// Modal label of the k nearest training documents (one-shot convenience over
// the two calls above).
std::string knn_predict(std::span<const double> distances,
                        const std::vector<std::string>& labels, std::size_t k);

struct ClassMetrics {
    std::string label;
    double precision = 0;  // percent
    double recall = 0;     // percent
    double f1 = 0;         // percent
    std::size_t support = 0;
};

struct ClassReport {
    std::vector<ClassMetrics> per_class;
    double macro_f1 = 0;  // percent, unweighted mean over the class set
    double micro_f1 = 0;  // percent, computed over observations
    std::size_t observations = 0;
};

// Precision/recall/F1 per class from the pooled confusion matrix. Classes
// never predicted get precision 0; classes absent from both sides are
// reported with support 0 and F1 0.
ClassReport macro_f1(const std::vector<std::string>& predictions,
                     const std::vector<std::string>& truths,
                     const std::vector<std::string>& class_set);

}  // namespace sitevec
