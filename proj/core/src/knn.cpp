#include "sitevec/knn.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "sitevec/rng.hpp"

namespace sitevec {

std::vector<std::vector<std::uint32_t>> FoldPlan::fold_members() const {
    std::vector<std::vector<std::uint32_t>> members(n_folds);
    for (std::uint32_t doc = 0; doc < assignment.size(); ++doc)
        members[assignment[doc]].push_back(doc);
    return members;
}

FoldPlan make_folds(std::size_t n_docs, std::size_t n_folds, std::optional<std::uint64_t> seed) {
    if (n_folds < 2) throw std::invalid_argument("make_folds: need at least 2 folds");
    if (n_folds > n_docs)
        throw std::invalid_argument("make_folds: more folds than documents");

    std::vector<std::uint32_t> order(n_docs);
    std::iota(order.begin(), order.end(), 0);
    if (seed) {
        auto rng = make_rng(*seed, "folds");
        for (std::size_t i = n_docs; i > 1; --i)
            std::swap(order[i - 1], order[bounded(rng, i)]);
    }

    FoldPlan plan;
    plan.n_folds = n_folds;
    plan.assignment.resize(n_docs);
    for (std::size_t f = 0; f < n_folds; ++f) {
        std::size_t lo = n_docs * f / n_folds;
        std::size_t hi = n_docs * (f + 1) / n_folds;
        for (std::size_t i = lo; i < hi; ++i)
            plan.assignment[order[i]] = static_cast<std::uint32_t>(f);
    }
    return plan;
}

std::vector<std::uint32_t> distance_order(std::span<const double> distances) {
    std::vector<std::uint32_t> order(distances.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return distances[a] != distances[b] ? distances[a] < distances[b] : a < b;
    });
    return order;
}

std::string predict_from_order(std::span<const std::uint32_t> order,
                               std::span<const double> distances,
                               const std::vector<std::string>& labels, std::size_t k) {
    if (k == 0) throw std::invalid_argument("knn_predict: k must be positive");
    if (order.size() != labels.size() || distances.size() != labels.size())
        throw std::invalid_argument("knn_predict: distance/label size mismatch");
    if (order.size() < k)
        throw std::invalid_argument("knn_predict: fewer training documents than k");

    struct Tally {
        std::size_t votes = 0;
        double distance_sum = 0;
    };
    std::map<std::string, Tally> tallies;  // ordered: name tie-break falls out
    for (std::size_t i = 0; i < k; ++i) {
        auto& t = tallies[labels[order[i]]];
        ++t.votes;
        t.distance_sum += distances[order[i]];
    }

    const std::string* best = nullptr;
    for (const auto& [label, t] : tallies) {
        if (!best) {
            best = &label;
            continue;
        }
        const Tally& bt = tallies.at(*best);
        if (t.votes > bt.votes ||
            (t.votes == bt.votes && t.distance_sum < bt.distance_sum))
            best = &label;
    }
    return *best;
}

std::string knn_predict(std::span<const double> distances,
                        const std::vector<std::string>& labels, std::size_t k) {
    auto order = distance_order(distances);
    return predict_from_order(order, distances, labels, k);
}

ClassReport macro_f1(const std::vector<std::string>& predictions,
                     const std::vector<std::string>& truths,
                     const std::vector<std::string>& class_set) {
    if (predictions.size() != truths.size())
        throw std::invalid_argument("macro_f1: prediction/truth length mismatch");

    ClassReport report;
    report.observations = truths.size();

    std::size_t correct = 0;
    for (std::size_t i = 0; i < truths.size(); ++i)
        if (predictions[i] == truths[i]) ++correct;
    report.micro_f1 = truths.empty()
                          ? 0.0
                          : 100.0 * static_cast<double>(correct) / static_cast<double>(truths.size());

    double f1_sum = 0;
    for (const auto& cls : class_set) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < truths.size(); ++i) {
            bool p = predictions[i] == cls, t = truths[i] == cls;
            if (p && t)
                ++tp;
            else if (p)
                ++fp;
            else if (t)
                ++fn;
        }
        ClassMetrics m;
        m.label = cls;
        m.support = tp + fn;
        m.precision = tp + fp ? 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        m.recall = tp + fn ? 100.0 * static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        m.f1 = m.precision + m.recall > 0
                   ? 2 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        f1_sum += m.f1;
        report.per_class.push_back(std::move(m));
    }
    report.macro_f1 = class_set.empty() ? 0.0 : f1_sum / static_cast<double>(class_set.size());
    return report;
}

}  // namespace sitevec
