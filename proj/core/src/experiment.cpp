#include "sitevec/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include "sitevec/errors.hpp"

namespace sitevec {

namespace {

constexpr char kCacheMagic[4] = {'S', 'V', 'D', 'M'};

std::uint64_t fnv64(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* b = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= b[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

template <class T>
std::uint64_t fnv64_pod(const T& v, std::uint64_t h) {
    static_assert(std::is_trivially_copyable_v<T>);
    return fnv64(&v, sizeof v, h);
}

enum TaskId : std::size_t { kSeverity = 0, kInjuryType = 1, kTrade = 2 };

std::size_t task_index(const std::string& task) {
    if (task == "severity") return kSeverity;
    if (task == "injury_type") return kInjuryType;
    if (task == "trade") return kTrade;
    throw std::invalid_argument("unknown task: " + task);
}

const std::string& task_label(const ReportRecord& r, std::size_t task) {
    switch (task) {
        case kSeverity: return r.severity;
        case kInjuryType: return r.injury_type;
        default: return r.trade;
    }
}

// Sparse raw-count vector, sorted by id, for the bag-of-words fast path.
struct CountVec {
    std::vector<std::pair<std::uint32_t, double>> entries;
};

CountVec make_counts(const std::vector<std::uint32_t>& ids) {
    std::vector<std::uint32_t> sorted(ids);
    std::sort(sorted.begin(), sorted.end());
    CountVec cv;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        cv.entries.emplace_back(sorted[i], static_cast<double>(j - i));
        i = j;
    }
    return cv;
}

double bow_distance(const CountVec& a, const CountVec& b) {
    double s = 0;
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() || j < b.entries.size()) {
        double d;
        if (j == b.entries.size() ||
            (i < a.entries.size() && a.entries[i].first < b.entries[j].first)) {
            d = a.entries[i++].second;
        } else if (i == a.entries.size() || b.entries[j].first < a.entries[i].first) {
            d = -b.entries[j++].second;
        } else {
            d = a.entries[i++].second - b.entries[j++].second;
        }
        s += d * d;
    }
    return std::sqrt(s);
}

struct PreparedDocs {
    std::vector<std::vector<std::uint32_t>> ids;  // per kept doc
    std::vector<NBowVector> bows;
    std::vector<CountVec> counts;
    std::vector<std::vector<double>> centroids;  // when prefiltering
};

void finish_preparation(PreparedDocs& docs, const EmbeddingMatrix& emb, DocMetric metric,
                        bool prefilter) {
    const std::size_t n = docs.ids.size();
    if (metric == DocMetric::bow_euclidean) {
        docs.counts.reserve(n);
        for (const auto& d : docs.ids) docs.counts.push_back(make_counts(d));
        return;
    }
    docs.bows.reserve(n);
    for (const auto& d : docs.ids) docs.bows.push_back(nbow(d));
    if (!prefilter) return;
    docs.centroids.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& c = docs.centroids[i];
        c.assign(emb.dim(), 0.0);
        for (const auto& e : docs.bows[i].entries) {
            auto row = emb.row(e.id);
            for (std::size_t d = 0; d < c.size(); ++d) c[d] += e.weight * row[d];
        }
    }
}

double centroid_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        double diff = a[d] - b[d];
        s += diff * diff;
    }
    return std::sqrt(s);
}

// One test row of the fold matrix, exact for every train column.
void exact_row(const PreparedDocs& docs, std::uint32_t test,
               const std::vector<std::uint32_t>& train, DocMetric metric,
               const EmbeddingMatrix& emb, const WordDistanceTable* table, double* out) {
    if (metric == DocMetric::bow_euclidean) {
        for (std::size_t c = 0; c < train.size(); ++c)
            out[c] = bow_distance(docs.counts[test], docs.counts[train[c]]);
        return;
    }
    for (std::size_t c = 0; c < train.size(); ++c)
        out[c] = table ? wmd(docs.bows[test], docs.bows[train[c]], emb, *table)
                       : wmd(docs.bows[test], docs.bows[train[c]], emb);
}

// Centroid-bound pruned row: entries that provably cannot reach the kmax
// nearest are left at +infinity.
void pruned_row(const PreparedDocs& docs, std::uint32_t test,
                const std::vector<std::uint32_t>& train, const EmbeddingMatrix& emb,
                const WordDistanceTable* table, std::size_t kmax, double* out) {
    const std::size_t n = train.size();
    std::vector<std::pair<double, std::uint32_t>> bounds(n);
    for (std::size_t c = 0; c < n; ++c)
        bounds[c] = {centroid_gap(docs.centroids[test], docs.centroids[train[c]]),
                     static_cast<std::uint32_t>(c)};
    std::sort(bounds.begin(), bounds.end());
    std::fill(out, out + n, std::numeric_limits<double>::infinity());

    std::vector<double> heap;  // max-heap of the kmax smallest exact values
    heap.reserve(kmax);
    for (const auto& [bound, c] : bounds) {
        if (heap.size() >= kmax && bound > heap.front()) break;
        double d = table ? wmd(docs.bows[test], docs.bows[train[c]], emb, *table)
                         : wmd(docs.bows[test], docs.bows[train[c]], emb);
        out[c] = d;
        if (heap.size() < kmax) {
            heap.push_back(d);
            std::push_heap(heap.begin(), heap.end());
        } else if (d < heap.front()) {
            std::pop_heap(heap.begin(), heap.end());
            heap.back() = d;
            std::push_heap(heap.begin(), heap.end());
        }
    }
}

struct CacheKey {
    std::size_t fold;
    DocMetric metric;
    bool compressed;
    std::uint64_t fingerprint;

    std::string file_name() const {
        char buf[96];
        std::snprintf(buf, sizeof buf, "dist_f%zu_%s_%s_%016llx.bin", fold,
                      metric == DocMetric::wmd ? "wmd" : "bow", compressed ? "comp" : "full",
                      static_cast<unsigned long long>(fingerprint));
        return buf;
    }
};

bool load_cached(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
                 std::vector<double>& matrix) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char magic[4];
    std::uint64_t r = 0, c = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&r), sizeof r);
    in.read(reinterpret_cast<char*>(&c), sizeof c);
    if (!in || std::memcmp(magic, kCacheMagic, 4) != 0 || r != rows || c != cols) return false;
    matrix.resize(rows * cols);
    in.read(reinterpret_cast<char*>(matrix.data()),
            static_cast<std::streamsize>(matrix.size() * sizeof(double)));
    return bool(in);
}

void store_cached(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
                  const std::vector<double>& matrix) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write distance cache: " + path.string());
    std::uint64_t r = rows, c = cols;
    out.write(kCacheMagic, 4);
    out.write(reinterpret_cast<const char*>(&r), sizeof r);
    out.write(reinterpret_cast<const char*>(&c), sizeof c);
    out.write(reinterpret_cast<const char*>(matrix.data()),
              static_cast<std::streamsize>(matrix.size() * sizeof(double)));
    if (!out) throw io_error("cannot write distance cache: " + path.string());
}

void update_manifest(const std::filesystem::path& dir, const CacheKey& key, std::size_t rows,
                     std::size_t cols) {
    const auto manifest = dir / "manifest.txt";
    std::set<std::string> lines;
    {
        std::ifstream in(manifest);
        std::string line;
        while (std::getline(in, line))
            if (!line.empty()) lines.insert(line);
    }
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "file=%s fold=%zu metric=%s compressed=%d rows=%zu cols=%zu fingerprint=%016llx",
                  key.file_name().c_str(), key.fold,
                  key.metric == DocMetric::wmd ? "wmd" : "bow", key.compressed ? 1 : 0, rows,
                  cols, static_cast<unsigned long long>(key.fingerprint));
    if (!lines.insert(buf).second) return;  // already recorded
    std::ofstream out(manifest, std::ios::trunc);
    for (const auto& l : lines) out << l << '\n';
}

ClassReport average_fold_reports(const std::vector<ClassReport>& folds,
                                 const std::vector<std::string>& class_set) {
    ClassReport avg;
    if (folds.empty()) return avg;
    const double n = static_cast<double>(folds.size());
    avg.per_class.resize(class_set.size());
    for (std::size_t c = 0; c < class_set.size(); ++c) avg.per_class[c].label = class_set[c];
    for (const auto& fold : folds) {
        avg.micro_f1 += fold.micro_f1 / n;
        avg.macro_f1 += fold.macro_f1 / n;
        avg.observations += fold.observations;
        for (std::size_t c = 0; c < class_set.size(); ++c) {
            avg.per_class[c].precision += fold.per_class[c].precision / n;
            avg.per_class[c].recall += fold.per_class[c].recall / n;
            avg.per_class[c].f1 += fold.per_class[c].f1 / n;
            avg.per_class[c].support += fold.per_class[c].support;
        }
    }
    return avg;
}

}  // namespace

ExperimentResult run_experiment(const std::vector<ReportRecord>& reports,
                                const EmbeddingMatrix& embeddings, const Tokenizer& tokenizer,
                                const ExperimentConfig& cfg) {
    std::vector<std::size_t> task_ids;
    for (const auto& t : cfg.tasks) task_ids.push_back(task_index(t));
    if (cfg.tasks.empty()) throw std::invalid_argument("run_experiment: no tasks");
    if (cfg.k_grid.empty()) throw std::invalid_argument("run_experiment: empty k grid");

    ExperimentResult result;

    // Tokenize, restrict to the embedding vocabulary, and drop documents with
    // nothing left; the same exclusion set serves both pipeline variants.
    std::vector<std::vector<std::uint32_t>> full_ids;
    std::vector<const ReportRecord*> kept;
    for (const auto& r : reports) {
        std::vector<std::uint32_t> ids;
        for (const auto& tok : tokenizer.tokenize(r.narrative))
            if (auto id = embeddings.id_of(tok)) ids.push_back(*id);
        if (ids.empty()) {
            ++result.excluded_empty;
            continue;
        }
        full_ids.push_back(std::move(ids));
        kept.push_back(&r);
    }
    result.documents_used = kept.size();

    const FoldPlan folds = make_folds(kept.size(), cfg.n_folds, cfg.fold_seed);
    const auto members = folds.fold_members();
    const std::size_t kmax = *std::max_element(cfg.k_grid.begin(), cfg.k_grid.end());

    // Truth labels and class sets, once per task.
    std::vector<std::vector<std::string>> truths(cfg.tasks.size());
    std::vector<std::vector<std::string>> class_sets(cfg.tasks.size());
    for (std::size_t t = 0; t < task_ids.size(); ++t) {
        truths[t].reserve(kept.size());
        for (const auto* r : kept) truths[t].push_back(task_label(*r, task_ids[t]));
        std::set<std::string> distinct(truths[t].begin(), truths[t].end());
        class_sets[t].assign(distinct.begin(), distinct.end());
    }

    const bool use_cache = !cfg.cache_dir.empty() && !cfg.centroid_prefilter;
    std::uint64_t base_fp = 0;
    if (use_cache) {
        std::filesystem::create_directories(cfg.cache_dir);
        base_fp = fnv64_pod(embeddings.dim(), base_fp);
        for (const auto& w : embeddings.words()) base_fp = fnv64(w.data(), w.size(), base_fp + 1);
        base_fp = fnv64(embeddings.data().data(), embeddings.data().size() * sizeof(float),
                        base_fp);
        base_fp = fnv64(folds.assignment.data(),
                        folds.assignment.size() * sizeof(std::uint32_t), base_fp);
        base_fp = fnv64_pod(cfg.n_folds, base_fp);
    }

    const WordDistanceTable* shared_table = nullptr;
    std::optional<WordDistanceTable> table_storage;
    if (cfg.metric == DocMetric::wmd) {
        std::vector<std::uint32_t> active;
        for (const auto& d : full_ids) active.insert(active.end(), d.begin(), d.end());
        table_storage.emplace(embeddings, std::move(active));
        shared_table = &*table_storage;
    }

    const std::size_t n_variants = cfg.compress ? 2 : 1;
    for (std::size_t variant = 0; variant < n_variants; ++variant) {
        const bool compressed = variant == 1;
        PreparedDocs docs;
        if (compressed) {
            docs.ids.reserve(full_ids.size());
            for (const auto& d : full_ids) docs.ids.push_back(extract_keywords(d, cfg.keywords));
        } else {
            docs.ids = full_ids;
        }
        finish_preparation(docs, embeddings, cfg.metric, cfg.centroid_prefilter);

        std::uint64_t variant_fp = base_fp;
        if (use_cache) {
            for (const auto& d : docs.ids) {
                variant_fp = fnv64_pod(d.size(), variant_fp);
                variant_fp = fnv64(d.data(), d.size() * sizeof(std::uint32_t), variant_fp);
            }
        }

        VariantReport report;
        report.compressed = compressed;

        // Distance phase: one test x train matrix per fold.
        std::vector<std::vector<double>> matrices(cfg.n_folds);
        std::vector<std::vector<std::uint32_t>> train_sets(cfg.n_folds);
        for (std::size_t f = 0; f < cfg.n_folds; ++f) {
            const auto& test = members[f];
            auto& train = train_sets[f];
            train.reserve(kept.size() - test.size());
            for (std::uint32_t doc = 0; doc < kept.size(); ++doc)
                if (folds.assignment[doc] != f) train.push_back(doc);

            auto& matrix = matrices[f];
            const auto t0 = std::chrono::steady_clock::now();
            CacheKey key{f, cfg.metric, compressed, fnv64_pod(f, variant_fp)};
            bool hit = false;
            if (use_cache &&
                load_cached(cfg.cache_dir / key.file_name(), test.size(), train.size(), matrix)) {
                hit = true;
                ++result.cache_hits;
            }
            if (!hit) {
                matrix.assign(test.size() * train.size(), 0.0);
                auto compute_rows = [&](std::size_t lo, std::size_t hi) {
                    for (std::size_t r = lo; r < hi; ++r) {
                        double* out = matrix.data() + r * train.size();
                        if (cfg.centroid_prefilter && cfg.metric == DocMetric::wmd)
                            pruned_row(docs, test[r], train, embeddings, shared_table, kmax, out);
                        else
                            exact_row(docs, test[r], train, cfg.metric, embeddings, shared_table,
                                      out);
                    }
                };
                if (cfg.workers <= 1 || test.size() < 2) {
                    compute_rows(0, test.size());
                } else {
                    const std::size_t w = std::min(cfg.workers, test.size());
                    std::vector<std::thread> pool;
                    pool.reserve(w);
                    for (std::size_t i = 0; i < w; ++i)
                        pool.emplace_back(compute_rows, test.size() * i / w,
                                          test.size() * (i + 1) / w);
                    for (auto& th : pool) th.join();
                }
                if (use_cache) {
                    store_cached(cfg.cache_dir / key.file_name(), test.size(), train.size(),
                                 matrix);
                    update_manifest(cfg.cache_dir, key, test.size(), train.size());
                    ++result.cache_misses;
                }
            }
            report.fold_distance_seconds.push_back(
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        report.distance_seconds_total =
            std::accumulate(report.fold_distance_seconds.begin(),
                            report.fold_distance_seconds.end(), 0.0);

        // Neighbor ranking once per test document, shared by every task and k.
        std::vector<std::vector<std::uint32_t>> orders(kept.size());
        for (std::size_t f = 0; f < cfg.n_folds; ++f) {
            const auto& test = members[f];
            for (std::size_t r = 0; r < test.size(); ++r)
                orders[test[r]] = distance_order(
                    {matrices[f].data() + r * train_sets[f].size(), train_sets[f].size()});
        }

        for (std::size_t t = 0; t < task_ids.size(); ++t) {
            TaskReport task_report;
            task_report.task = cfg.tasks[t];
            for (std::size_t k : cfg.k_grid) {
                std::vector<std::string> pooled_preds, pooled_truths;
                std::vector<ClassReport> fold_reports;
                for (std::size_t f = 0; f < cfg.n_folds; ++f) {
                    const auto& test = members[f];
                    const auto& train = train_sets[f];
                    std::vector<std::string> train_labels;
                    train_labels.reserve(train.size());
                    for (std::uint32_t doc : train) train_labels.push_back(truths[t][doc]);
                    std::vector<std::string> preds, fold_truths;
                    preds.reserve(test.size());
                    for (std::size_t r = 0; r < test.size(); ++r) {
                        std::span<const double> row{
                            matrices[f].data() + r * train.size(), train.size()};
                        preds.push_back(
                            predict_from_order(orders[test[r]], row, train_labels, k));
                        fold_truths.push_back(truths[t][test[r]]);
                    }
                    if (cfg.pool_folds) {
                        pooled_preds.insert(pooled_preds.end(), preds.begin(), preds.end());
                        pooled_truths.insert(pooled_truths.end(), fold_truths.begin(),
                                             fold_truths.end());
                    } else {
                        fold_reports.push_back(macro_f1(preds, fold_truths, class_sets[t]));
                    }
                }
                ClassReport cr = cfg.pool_folds
                                     ? macro_f1(pooled_preds, pooled_truths, class_sets[t])
                                     : average_fold_reports(fold_reports, class_sets[t]);
                task_report.by_k.push_back({k, std::move(cr)});
            }
            report.tasks.push_back(std::move(task_report));
        }
        result.variants.push_back(std::move(report));
    }

    if (cfg.compress) {
        const auto& full = result.variants[0];
        const auto& comp = result.variants[1];
        for (std::size_t t = 0; t < cfg.tasks.size(); ++t) {
            for (std::size_t ki = 0; ki < cfg.k_grid.size(); ++ki) {
                RelativeChange rc;
                rc.task = cfg.tasks[t];
                rc.k = cfg.k_grid[ki];
                rc.full_overall = full.tasks[t].by_k[ki].report.micro_f1;
                rc.compressed_overall = comp.tasks[t].by_k[ki].report.micro_f1;
                rc.relative_change =
                    rc.full_overall > 0
                        ? 100.0 * (rc.compressed_overall - rc.full_overall) / rc.full_overall
                        : 0.0;
                result.relative_changes.push_back(std::move(rc));
            }
        }
    }
    return result;
}

}  // namespace sitevec
