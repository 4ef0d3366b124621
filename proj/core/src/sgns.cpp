#include "sitevec/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <thread>

#include "sitevec/rng.hpp"
#include "sitevec/sgns_math.hpp"

namespace sitevec {

namespace {

void validate(const TrainConfig& cfg, const Vocabulary& vocab, const SamplingTables& tables) {
    if (cfg.dim == 0) throw std::invalid_argument("train: dim must be positive");
    if (cfg.window == 0) throw std::invalid_argument("train: window must be positive");
    if (cfg.negatives == 0) throw std::invalid_argument("train: negatives must be positive");
    if (cfg.workers == 0) throw std::invalid_argument("train: workers must be positive");
    if (!(cfg.initial_lr > 0) || !(cfg.final_lr > 0) || cfg.final_lr >= cfg.initial_lr)
        throw std::invalid_argument("train: need 0 < final_lr < initial_lr");
    if (tables.discard_prob.size() != vocab.size())
        throw std::invalid_argument("train: sampling tables do not match the vocabulary");
    if (tables.negative_table.empty())
        throw std::invalid_argument("train: empty negative-sampling table");
}

// Subsamples one chunk and feeds every (center, context) pair of the dynamic
// windows to on_pair. Window extent is clamped to the chunk, so no pair can
// span a chunk boundary. Shared verbatim between training and the
// instrumented enumeration mode.
template <class OnPair>
void chunk_pairs(const std::uint32_t* ids, std::size_t len, const SamplingTables& tables,
                 const TrainConfig& cfg, std::mt19937_64& rng,
                 std::vector<std::uint32_t>& kept, OnPair&& on_pair) {
    kept.clear();
    if (cfg.subsample_t > 0) {
        for (std::size_t i = 0; i < len; ++i) {
            double p = tables.discard_prob[ids[i]];
            if (p <= 0 || uniform01(rng) >= p) kept.push_back(ids[i]);
        }
    } else {
        kept.assign(ids, ids + len);
    }
    const std::size_t n = kept.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t b = 1 + static_cast<std::size_t>(bounded(rng, cfg.window));
        std::size_t lo = i >= b ? i - b : 0;
        std::size_t hi = std::min(n, i + b + 1);
        for (std::size_t j = lo; j < hi; ++j)
            if (j != i) on_pair(kept[i], kept[j]);
    }
}

struct Progress {
    std::atomic<std::uint64_t> consumed{0};  // raw tokens, across all epochs
    std::atomic<std::uint64_t> next_report{0};
    std::chrono::steady_clock::time_point start;
};

}  // namespace

EmbeddingMatrix init_embeddings(const Vocabulary& vocab, const TrainConfig& cfg) {
    if (cfg.dim == 0) throw std::invalid_argument("train: dim must be positive");
    EmbeddingMatrix emb(vocab.words(), cfg.dim);
    auto rng = make_rng(cfg.seed, "train/init");
    const double m = static_cast<double>(cfg.dim);
    for (float& x : emb.data()) x = static_cast<float>((uniform01(rng) - 0.5) / m);
    return emb;
}

TrainResult train(const EncodedCorpus& corpus, const Vocabulary& vocab,
                  const SamplingTables& tables, const TrainConfig& cfg) {
    validate(cfg, vocab, tables);

    TrainResult result{init_embeddings(vocab, cfg), {}};
    const std::size_t m = cfg.dim;
    std::vector<float> output(vocab.size() * m, 0.0f);
    float* const in = result.embeddings.data().data();
    float* const out = output.data();

    const std::uint64_t total_tokens = corpus.token_count();
    const double denom =
        std::max<double>(1.0, static_cast<double>(cfg.epochs) * static_cast<double>(total_tokens));
    const std::size_t n_chunks = corpus.chunk_count();
    const std::size_t workers = std::min(cfg.workers, std::max<std::size_t>(1, n_chunks));

    Progress progress;
    progress.start = std::chrono::steady_clock::now();
    progress.next_report = cfg.report_interval;

    std::vector<double> worker_loss(workers);
    std::vector<std::uint64_t> worker_updates(workers);

    auto run_worker = [&](std::size_t w, std::size_t epoch) {
        auto rng = make_rng(cfg.seed, "train/worker/" + std::to_string(w) + "/epoch/" +
                                          std::to_string(epoch));
        std::vector<std::uint32_t> kept;
        std::vector<float> scratch(m);
        std::vector<std::span<float>> negs;
        negs.reserve(cfg.negatives);
        const std::uint64_t table_size = tables.negative_table.size();
        double loss_sum = 0;
        std::uint64_t updates = 0;

        const std::size_t c0 = n_chunks * w / workers;
        const std::size_t c1 = n_chunks * (w + 1) / workers;
        for (std::size_t c = c0; c < c1; ++c) {
            const std::size_t off = corpus.chunk_offsets[c];
            const std::size_t len = corpus.chunk_offsets[c + 1] - off;

            std::uint64_t done = progress.consumed.load(std::memory_order_relaxed);
            double frac = static_cast<double>(done) / denom;
            float lr = static_cast<float>(
                std::max<double>(cfg.final_lr, cfg.initial_lr - (cfg.initial_lr - cfg.final_lr) * frac));

            chunk_pairs(corpus.ids.data() + off, len, tables, cfg, rng, kept,
                        [&](std::uint32_t center, std::uint32_t context) {
                            negs.clear();
                            for (std::size_t k = 0; k < cfg.negatives; ++k) {
                                std::uint32_t neg =
                                    tables.negative_table[bounded(rng, table_size)];
                                if (neg == context) continue;
                                negs.emplace_back(out + static_cast<std::size_t>(neg) * m, m);
                            }
                            loss_sum += sgns_update<float>(
                                {in + static_cast<std::size_t>(center) * m, m},
                                {out + static_cast<std::size_t>(context) * m, m},
                                {negs.data(), negs.size()}, lr, scratch);
                            ++updates;
                        });

            std::uint64_t now =
                progress.consumed.fetch_add(len, std::memory_order_relaxed) + len;
            if (cfg.report_interval > 0) {
                std::uint64_t due = progress.next_report.load(std::memory_order_relaxed);
                if (now >= due &&
                    progress.next_report.compare_exchange_strong(due, now + cfg.report_interval)) {
                    double secs = std::chrono::duration<double>(
                                      std::chrono::steady_clock::now() - progress.start)
                                      .count();
                    std::fprintf(stderr,
                                 "epoch %zu/%zu  lr %.5f  %.2fM tokens/s  %.1f%%\n",
                                 epoch + 1, cfg.epochs, static_cast<double>(lr),
                                 static_cast<double>(now) / std::max(secs, 1e-9) / 1e6,
                                 100.0 * static_cast<double>(now) / denom);
                }
            }
        }
        worker_loss[w] = loss_sum;
        worker_updates[w] = updates;
    };

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::fill(worker_loss.begin(), worker_loss.end(), 0.0);
        std::fill(worker_updates.begin(), worker_updates.end(), 0);
        if (workers == 1) {
            run_worker(0, epoch);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (std::size_t w = 0; w < workers; ++w)
                pool.emplace_back(run_worker, w, epoch);
            for (auto& t : pool) t.join();
        }
        double loss = 0;
        std::uint64_t updates = 0;
        for (std::size_t w = 0; w < workers; ++w) {
            loss += worker_loss[w];
            updates += worker_updates[w];
        }
        result.stats.epoch_mean_loss.push_back(updates ? loss / static_cast<double>(updates) : 0.0);
        result.stats.epoch_updates.push_back(updates);
        result.stats.total_updates += updates;
    }

    result.stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - progress.start).count();
    return result;
}

TrainResult train(const TokenStream& stream, const Vocabulary& vocab,
                  const SamplingTables& tables, const TrainConfig& cfg) {
    return train(encode(stream, vocab), vocab, tables, cfg);
}

void enumerate_pairs(
    const EncodedCorpus& corpus, const SamplingTables& tables, const TrainConfig& cfg,
    const std::function<void(std::size_t, std::uint32_t, std::uint32_t)>& f) {
    auto rng = make_rng(cfg.seed, "train/worker/0/epoch/0");
    std::vector<std::uint32_t> kept;
    for (std::size_t c = 0; c + 1 < corpus.chunk_offsets.size(); ++c) {
        const std::size_t off = corpus.chunk_offsets[c];
        const std::size_t len = corpus.chunk_offsets[c + 1] - off;
        chunk_pairs(corpus.ids.data() + off, len, tables, cfg, rng, kept,
                    [&](std::uint32_t center, std::uint32_t context) { f(c, center, context); });
    }
}

}  // namespace sitevec
