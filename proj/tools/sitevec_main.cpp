// sitevec: train, explore, and evaluate word embeddings for construction
// injury reports. Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sitevec/corpus.hpp"
#include "sitevec/embedding.hpp"
#include "sitevec/errors.hpp"
#include "sitevec/experiment.hpp"
#include "sitevec/gow.hpp"
#include "sitevec/pca.hpp"
#include "sitevec/sgns.hpp"
#include "sitevec/vocab.hpp"
#include "sitevec/wmd.hpp"

namespace {

namespace sv = sitevec;
namespace fs = std::filesystem;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

sv::Tokenizer make_tokenizer(const std::vector<std::string>& stoplists) {
    sv::Tokenizer tok;
    for (const auto& path : stoplists) tok.add_stoplist_file(path);
    return tok;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sv::io_error("cannot open " + path.string() + " for writing");
    return out;
}

// One document per line; blank lines count as (empty) documents so line
// numbers stay aligned with the input.
std::vector<std::string> read_doc_lines(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sv::io_error("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::vector<std::uint32_t>> encode_doc_lines(const std::vector<std::string>& lines,
                                                         const sv::Tokenizer& tok,
                                                         const sv::EmbeddingMatrix& emb) {
    std::vector<std::vector<std::uint32_t>> docs;
    docs.reserve(lines.size());
    for (const auto& line : lines) {
        std::vector<std::uint32_t> ids;
        for (const auto& t : tok.tokenize(line))
            if (auto id = emb.id_of(t)) ids.push_back(*id);
        docs.push_back(std::move(ids));
    }
    return docs;
}

// ---------------------------------------------------------------- train ----

struct TrainArgs {
    std::string corpus;
    std::string out_prefix;
    sv::TrainConfig train;
    std::size_t min_count = 5;
    std::size_t chunk_size = 200;
    std::size_t table_size = 100'000'000;
    double alpha = 0.75;
    std::vector<std::string> stoplists;
};

int cmd_train(const TrainArgs& args) {
    const auto tok = make_tokenizer(args.stoplists);
    const auto files = sv::corpus_files(args.corpus);

    sv::WordCounter counter;
    std::size_t raw_tokens = sv::for_each_corpus_chunk(
        files, tok, args.chunk_size,
        [&](std::vector<std::string>&& chunk) { counter.add_tokens(chunk); });
    sv::Vocabulary vocab = counter.finalize(args.min_count);
    std::fprintf(stderr, "corpus: %zu tokens, %zu retained words (min count %zu)\n",
                 raw_tokens, vocab.size(), args.min_count);

    auto tables = sv::build_sampling_tables(vocab, args.alpha,
                                            std::max(args.table_size, vocab.size()),
                                            args.train.subsample_t > 0 ? args.train.subsample_t
                                                                       : 1e-5);
    sv::EncodedCorpus corpus = sv::encode_corpus_files(files, tok, args.chunk_size, vocab);

    sv::TrainResult trained;
    if (args.train.epochs == 0) {
        std::fprintf(stderr, "warning: epochs=0, writing the initialization snapshot\n");
        trained.embeddings = sv::init_embeddings(vocab, args.train);
    } else {
        trained = sv::train(corpus, vocab, tables, args.train);
    }

    const fs::path vocab_path = args.out_prefix + ".vocab.tsv";
    const fs::path text_path = args.out_prefix + ".txt";
    const fs::path bin_path = args.out_prefix + ".bin";
    vocab.save(vocab_path);
    sv::save_embeddings(trained.embeddings, text_path, sv::VectorFormat::text);
    sv::save_embeddings(trained.embeddings, bin_path, sv::VectorFormat::binary);

    const double secs = trained.stats.seconds;
    const double consumed =
        static_cast<double>(corpus.token_count()) * static_cast<double>(args.train.epochs);
    std::fprintf(stderr, "trained %zu x %zu in %.1fs (%.2fM tokens/s); wrote %s, %s, %s\n",
                 trained.embeddings.size(), trained.embeddings.dim(), secs,
                 secs > 0 ? consumed / secs / 1e6 : 0.0, vocab_path.c_str(), text_path.c_str(),
                 bin_path.c_str());
    if (!trained.stats.epoch_mean_loss.empty())
        std::fprintf(stderr, "final epoch mean loss %.4f\n",
                     trained.stats.epoch_mean_loss.back());
    return 0;
}

// -------------------------------------------------------------- explore ----

int cmd_nearest(const sv::EmbeddingMatrix& emb, const std::string& word, std::size_t k,
                bool include_query) {
    for (const auto& r : sv::nearest(emb, word, k, !include_query))
        std::printf("%s %.6f\n", r.word.c_str(), r.score);
    return 0;
}

int cmd_mismatch(const sv::EmbeddingMatrix& emb, const std::vector<std::string>& words) {
    std::printf("%s\n", sv::mismatch(emb, words).c_str());
    return 0;
}

int cmd_analogy(const sv::EmbeddingMatrix& emb, const std::string& a, const std::string& b,
                const std::string& c, std::size_t k, bool include_inputs) {
    for (const auto& r : sv::analogy(emb, a, b, c, k, !include_inputs))
        std::printf("%s %.6f\n", r.word.c_str(), r.score);
    return 0;
}

int cmd_pca(const sv::EmbeddingMatrix& emb, const fs::path& words_file, std::size_t dims,
            bool global_fit, const std::string& out) {
    std::vector<std::string> words;
    for (const auto& line : read_doc_lines(words_file))
        for (const auto& w : sv::Tokenizer().tokenize(line)) words.push_back(w);
    auto res = sv::pca_project(emb, words, dims, global_fit);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.empty()) {
        file = open_out(out);
        os = &file;
    }
    for (std::size_t i = 0; i < res.words.size(); ++i) {
        *os << res.words[i];
        for (std::size_t d = 0; d < res.dims; ++d) {
            char buf[32];
            std::snprintf(buf, sizeof buf, ",%.6g", res.coord(i, d));
            *os << buf;
        }
        *os << '\n';
    }
    return 0;
}

// ------------------------------------------------------------- distance ----

int cmd_distance(const std::string& docs1, const std::string& docs2,
                 const std::string& embeddings, const std::string& metric_name,
                 const std::vector<std::string>& stoplists, const std::string& out) {
    const auto tok = make_tokenizer(stoplists);
    const auto emb = sv::load_embeddings(embeddings);
    const auto rows = encode_doc_lines(read_doc_lines(docs1), tok, emb);
    const auto cols = encode_doc_lines(read_doc_lines(docs2), tok, emb);
    const auto metric =
        metric_name == "bow" ? sv::DocMetric::bow_euclidean : sv::DocMetric::wmd;
    if (metric == sv::DocMetric::wmd) {
        auto check = [](const std::vector<std::vector<std::uint32_t>>& docs,
                        const std::string& path) {
            for (std::size_t i = 0; i < docs.size(); ++i)
                if (docs[i].empty())
                    throw sv::empty_document_error(path + " line " + std::to_string(i + 1) +
                                                   ": no in-vocabulary tokens");
        };
        check(rows, docs1);
        check(cols, docs2);
    }
    auto matrix = sv::distance_matrix(rows, cols, &emb, metric);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.empty()) {
        file = open_out(out);
        os = &file;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%s%.9g", c ? "," : "", matrix[r * cols.size() + c]);
            *os << buf;
        }
        *os << '\n';
    }
    return 0;
}

// ------------------------------------------------------------- keywords ----

int cmd_keywords(const std::string& in, const std::string& embeddings,
                 const sv::KeywordParams& params, const std::vector<std::string>& stoplists,
                 const std::string& out, const std::string& sizes_out) {
    const auto tok = make_tokenizer(stoplists);
    const auto emb = sv::load_embeddings(embeddings);
    const auto lines = read_doc_lines(in);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.empty()) {
        file = open_out(out);
        os = &file;
    }
    std::ofstream sizes;
    if (!sizes_out.empty()) sizes = open_out(sizes_out);

    std::vector<std::size_t> full_sizes, kept_sizes;
    for (const auto& line : lines) {
        std::vector<std::string> retained;
        for (const auto& t : tok.tokenize(line))
            if (emb.id_of(t)) retained.push_back(t);
        auto kws = sv::extract_keywords(retained, params);
        for (std::size_t i = 0; i < kws.size(); ++i) {
            if (i) *os << ' ';
            *os << kws[i];
        }
        *os << '\n';
        full_sizes.push_back(retained.size());
        kept_sizes.push_back(kws.size());
        if (sizes.is_open()) sizes << retained.size() << ',' << kws.size() << '\n';
    }

    auto median = [](std::vector<std::size_t> v) -> double {
        if (v.empty()) return 0;
        std::sort(v.begin(), v.end());
        std::size_t mid = v.size() / 2;
        return v.size() % 2 ? static_cast<double>(v[mid])
                            : (static_cast<double>(v[mid - 1]) + static_cast<double>(v[mid])) / 2;
    };
    const double mf = median(full_sizes), mk = median(kept_sizes);
    std::fprintf(stderr, "%zu documents; median %0.1f tokens -> %0.1f keywords (ratio %.2f)\n",
                 lines.size(), mf, mk, mf > 0 ? mk / mf : 0.0);
    return 0;
}

// ------------------------------------------------------------- classify ----

struct ClassifyArgs {
    std::string dataset;
    std::string embeddings;
    std::string out_dir;
    std::string metric = "wmd";
    std::vector<std::string> stoplists;
    std::string delimiter = ",";
    sv::DatasetSchema schema;
    sv::ExperimentConfig cfg;
    std::int64_t fold_seed = -1;  // <0 = sequential folds
    bool no_cache = false;
    std::string cache_dir;
};

void write_results_csv(const fs::path& path, const sv::ExperimentResult& result) {
    auto out = open_out(path);
    out << "task,k,metric_compressed,class,precision,recall,f1,support,macro_f1,micro_f1\n";
    char buf[256];
    for (const auto& variant : result.variants) {
        for (const auto& task : variant.tasks) {
            for (const auto& kr : task.by_k) {
                for (const auto& cls : kr.report.per_class) {
                    std::snprintf(buf, sizeof buf, "%s,%zu,%s,%s,%.2f,%.2f,%.2f,%zu,%.2f,%.2f\n",
                                  task.task.c_str(), kr.k,
                                  variant.compressed ? "compressed" : "full", cls.label.c_str(),
                                  cls.precision, cls.recall, cls.f1, cls.support,
                                  kr.report.macro_f1, kr.report.micro_f1);
                    out << buf;
                }
            }
        }
    }
}

void write_timing_csv(const fs::path& path, const sv::ExperimentResult& result) {
    auto out = open_out(path);
    out << "variant,fold,distance_seconds\n";
    char buf[128];
    for (const auto& variant : result.variants) {
        const char* name = variant.compressed ? "compressed" : "full";
        for (std::size_t f = 0; f < variant.fold_distance_seconds.size(); ++f) {
            std::snprintf(buf, sizeof buf, "%s,%zu,%.3f\n", name, f,
                          variant.fold_distance_seconds[f]);
            out << buf;
        }
        std::snprintf(buf, sizeof buf, "%s,total,%.3f\n", name, variant.distance_seconds_total);
        out << buf;
    }
}

void write_relative_csv(const fs::path& path, const sv::ExperimentResult& result) {
    auto out = open_out(path);
    out << "task,k,full_micro_f1,compressed_micro_f1,relative_change_pct\n";
    char buf[160];
    for (const auto& rc : result.relative_changes) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%.4f,%.4f,%.4f\n", rc.task.c_str(), rc.k,
                      rc.full_overall, rc.compressed_overall, rc.relative_change);
        out << buf;
    }
}

int cmd_classify(ClassifyArgs args) {
    const auto tok = make_tokenizer(args.stoplists);
    const auto emb = sv::load_embeddings(args.embeddings);
    const char delim = args.delimiter.empty() ? ',' : args.delimiter[0];
    const auto all = sv::load_dataset(args.dataset, delim, args.schema);
    const auto labeled = sv::filter_labeled(all);
    std::fprintf(stderr, "dataset: %zu records, %zu fully labeled\n", all.size(),
                 labeled.size());

    args.cfg.metric = args.metric == "bow" ? sv::DocMetric::bow_euclidean : sv::DocMetric::wmd;
    if (args.fold_seed >= 0)
        args.cfg.fold_seed = static_cast<std::uint64_t>(args.fold_seed);
    fs::create_directories(args.out_dir);
    if (!args.no_cache)
        args.cfg.cache_dir = args.cache_dir.empty() ? fs::path(args.out_dir) / "cache"
                                                    : fs::path(args.cache_dir);

    const auto result = sv::run_experiment(labeled, emb, tok, args.cfg);

    write_results_csv(fs::path(args.out_dir) / "results.csv", result);
    write_timing_csv(fs::path(args.out_dir) / "timing.csv", result);
    if (args.cfg.compress)
        write_relative_csv(fs::path(args.out_dir) / "relative_change.csv", result);

    std::fprintf(stderr,
                 "classified %zu documents (%zu excluded as empty); cache %zu hits / %zu misses\n",
                 result.documents_used, result.excluded_empty, result.cache_hits,
                 result.cache_misses);
    for (const auto& variant : result.variants)
        std::fprintf(stderr, "%s distance phase: %.1fs\n",
                     variant.compressed ? "compressed" : "full",
                     variant.distance_seconds_total);
    return 0;
}

std::vector<std::size_t> parse_size_list(const std::string& csv, const std::string& flag) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        const std::string item = csv.substr(pos, comma - pos);
        if (item.empty()) throw CLI::ValidationError(flag, "empty list entry");
        out.push_back(static_cast<std::size_t>(std::stoull(item)));
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"word-embedding toolkit for construction injury reports"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags override it");
    app.footer("exit codes: 0 success, 1 usage error, 2 data error");

    // train
    TrainArgs train_args;
    auto* train = app.add_subcommand("train", "train skip-gram embeddings on a corpus");
    train->add_option("--corpus", train_args.corpus, "corpus file or directory of text files")
        ->required();
    train->add_option("--out", train_args.out_prefix,
                      "output prefix (.vocab.tsv, .txt, .bin)")
        ->required();
    train->add_option("--dim", train_args.train.dim, "embedding dimension")->capture_default_str();
    train->add_option("--window", train_args.train.window, "context words per side")
        ->capture_default_str();
    train->add_option("--negatives", train_args.train.negatives, "negative samples per pair")
        ->capture_default_str();
    train->add_option("--epochs", train_args.train.epochs, "training epochs")
        ->capture_default_str();
    train->add_option("--initial-lr", train_args.train.initial_lr, "starting learning rate")
        ->capture_default_str();
    train->add_option("--final-lr", train_args.train.final_lr, "learning-rate floor")
        ->capture_default_str();
    train->add_option("--subsample", train_args.train.subsample_t,
                      "frequent-word subsampling threshold (<=0 disables)")
        ->capture_default_str();
    train->add_option("--min-count", train_args.min_count, "discard words seen fewer times")
        ->capture_default_str();
    train->add_option("--chunk-size", train_args.chunk_size,
                      "tokens per training chunk (hard context boundary)")
        ->capture_default_str();
    train->add_option("--table-size", train_args.table_size, "negative-sampling table entries")
        ->capture_default_str();
    train->add_option("--alpha", train_args.alpha, "negative-sampling distortion exponent")
        ->capture_default_str();
    train->add_option("--seed", train_args.train.seed, "master random seed")
        ->capture_default_str();
    train->add_option("--workers", train_args.train.workers, "training threads")
        ->capture_default_str();
    train->add_option("--report-interval", train_args.train.report_interval,
                      "tokens between progress lines (0 silences)")
        ->capture_default_str();
    train->add_option("--stoplist", train_args.stoplists,
                      "stopword file, one word per line (repeatable)");

    // explore
    auto* explore = app.add_subcommand("explore", "query a trained embedding file");
    explore->require_subcommand(1);
    std::string emb_path;
    explore->add_option("--embeddings", emb_path, "embedding file (text or binary)")->required();

    auto* nearest_cmd = explore->add_subcommand("nearest", "k nearest words by cosine");
    std::string near_word;
    std::size_t near_k = 10;
    bool near_include = false;
    nearest_cmd->add_option("word", near_word)->required();
    nearest_cmd->add_option("--k", near_k, "neighbors to print")->capture_default_str();
    nearest_cmd->add_flag("--include-query", near_include, "keep the query word in the results");

    auto* mismatch_cmd = explore->add_subcommand("mismatch", "odd word out of a list");
    std::vector<std::string> mismatch_words;
    mismatch_cmd->add_option("words", mismatch_words, "at least three words")
        ->required()
        ->expected(3, -1);

    auto* analogy_cmd = explore->add_subcommand("analogy", "a:b :: c:? by vector offset");
    std::string ana_a, ana_b, ana_c;
    std::size_t ana_k = 5;
    bool ana_include = false;
    analogy_cmd->add_option("a", ana_a)->required();
    analogy_cmd->add_option("b", ana_b)->required();
    analogy_cmd->add_option("c", ana_c)->required();
    analogy_cmd->add_option("--k", ana_k, "candidates to print")->capture_default_str();
    analogy_cmd->add_flag("--include-inputs", ana_include,
                          "keep a, b, c among the candidates");

    auto* pca_cmd = explore->add_subcommand("pca", "project words onto principal components");
    std::string pca_words_file, pca_out;
    std::size_t pca_dims = 2;
    bool pca_global = false;
    pca_cmd->add_option("--words-file", pca_words_file, "file of words to project")->required();
    pca_cmd->add_option("--dims", pca_dims, "components to keep")->capture_default_str();
    pca_cmd->add_flag("--global-fit", pca_global,
                      "fit the basis on the whole vocabulary instead of the word list");
    pca_cmd->add_option("--out", pca_out, "write CSV here instead of stdout");

    // distance
    auto* distance = app.add_subcommand("distance", "pairwise document distance matrix");
    std::string dist_docs1, dist_docs2, dist_emb, dist_out;
    std::string dist_metric = "wmd";
    std::vector<std::string> dist_stoplists;
    distance->add_option("--docs1", dist_docs1, "documents file, one per line")->required();
    distance->add_option("--docs2", dist_docs2, "documents file, one per line")->required();
    distance->add_option("--embeddings", dist_emb, "embedding file")->required();
    distance->add_option("--metric", dist_metric, "wmd or bow")
        ->check(CLI::IsMember({"wmd", "bow"}))
        ->capture_default_str();
    distance->add_option("--stoplist", dist_stoplists, "stopword file (repeatable)");
    distance->add_option("--out", dist_out, "write CSV here instead of stdout");

    // keywords
    auto* keywords = app.add_subcommand("keywords", "compress documents to their keywords");
    std::string kw_in, kw_emb, kw_out, kw_sizes_out, kw_scheme = "placement";
    sv::KeywordParams kw_params;
    bool kw_weighted = false;
    std::vector<std::string> kw_stoplists;
    keywords->add_option("--in", kw_in, "documents file, one per line")->required();
    keywords->add_option("--embeddings", kw_emb, "embedding file (defines the node vocabulary)")
        ->required();
    keywords->add_option("--window", kw_params.window, "co-occurrence window size")
        ->capture_default_str();
    keywords->add_option("--retain", kw_params.retain, "fraction of nodes kept")
        ->capture_default_str();
    keywords->add_option("--min-len", kw_params.min_len,
                         "documents shorter than this pass through unchanged")
        ->capture_default_str();
    keywords->add_option("--scheme", kw_scheme, "window counting: placement or occurrence")
        ->check(CLI::IsMember({"placement", "occurrence"}))
        ->capture_default_str();
    keywords->add_flag("--weighted-cores", kw_weighted,
                       "peel by summed edge weights instead of plain degree");
    keywords->add_option("--stoplist", kw_stoplists, "stopword file (repeatable)");
    keywords->add_option("--out", kw_out, "write keywords here instead of stdout");
    keywords->add_option("--sizes-out", kw_sizes_out, "write per-document full,kept sizes CSV");

    // classify
    ClassifyArgs cls;
    auto* classify = app.add_subcommand("classify", "cross-validated k-NN report classification");
    classify->add_option("--dataset", cls.dataset, "report table (delimiter-separated)")
        ->required();
    classify->add_option("--embeddings", cls.embeddings, "embedding file")->required();
    classify->add_option("--out-dir", cls.out_dir, "directory for result tables")->required();
    std::string cls_tasks = "severity,injury_type,trade";
    std::string cls_kgrid = "5,10,15,20,25";
    classify->add_option("--tasks", cls_tasks, "comma list of severity,injury_type,trade")
        ->capture_default_str();
    classify->add_option("--k-grid", cls_kgrid, "comma list of k values")->capture_default_str();
    classify->add_option("--metric", cls.metric, "wmd or bow")
        ->check(CLI::IsMember({"wmd", "bow"}))
        ->capture_default_str();
    classify->add_flag("--compress", cls.cfg.compress,
                       "also run the keyword-compressed pipeline and compare");
    classify->add_option("--n-folds", cls.cfg.n_folds, "cross-validation folds")
        ->capture_default_str();
    classify->add_option("--fold-seed", cls.fold_seed,
                         "shuffle folds with this seed (default: contiguous blocks)");
    classify->add_option("--workers", cls.cfg.workers, "distance-phase threads")
        ->capture_default_str();
    classify->add_option("--cache-dir", cls.cache_dir,
                         "distance cache directory (default <out-dir>/cache)");
    classify->add_flag("--no-cache", cls.no_cache, "disable the distance cache");
    classify->add_flag("--prefilter", cls.cfg.centroid_prefilter,
                       "prune WMD evaluations with the centroid lower bound");
    bool cls_per_fold = false;
    classify->add_flag("--per-fold", cls_per_fold,
                       "average fold-level scores instead of pooling predictions");
    classify->add_option("--window", cls.cfg.keywords.window, "compression window size")
        ->capture_default_str();
    classify->add_option("--retain", cls.cfg.keywords.retain, "compression retention fraction")
        ->capture_default_str();
    classify->add_option("--min-len", cls.cfg.keywords.min_len,
                         "compression minimum document length")
        ->capture_default_str();
    classify->add_option("--stoplist", cls.stoplists, "stopword file (repeatable)");
    classify->add_option("--delimiter", cls.delimiter, "dataset field delimiter")
        ->capture_default_str();
    classify->add_option("--col-id", cls.schema.id, "id column name")->capture_default_str();
    classify->add_option("--col-narrative", cls.schema.narrative, "narrative column name")
        ->capture_default_str();
    classify->add_option("--col-keywords", cls.schema.keywords, "keywords column name")
        ->capture_default_str();
    classify->add_option("--col-severity", cls.schema.severity, "severity column name")
        ->capture_default_str();
    classify->add_option("--col-injury", cls.schema.injury_type, "injury-type column name")
        ->capture_default_str();
    classify->add_option("--col-trade", cls.schema.trade, "trade column name")
        ->capture_default_str();
    classify->add_option("--col-naics", cls.schema.naics, "NAICS column name")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints help or the parse error
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*train) return cmd_train(train_args);
        if (*explore) {
            const auto emb = sv::load_embeddings(emb_path);
            if (*nearest_cmd) return cmd_nearest(emb, near_word, near_k, near_include);
            if (*mismatch_cmd) return cmd_mismatch(emb, mismatch_words);
            if (*analogy_cmd) return cmd_analogy(emb, ana_a, ana_b, ana_c, ana_k, ana_include);
            if (*pca_cmd) return cmd_pca(emb, pca_words_file, pca_dims, pca_global, pca_out);
        }
        if (*distance)
            return cmd_distance(dist_docs1, dist_docs2, dist_emb, dist_metric, dist_stoplists,
                                dist_out);
        if (*keywords) {
            kw_params.scheme = kw_scheme == "occurrence" ? sv::WindowScheme::per_occurrence
                                                         : sv::WindowScheme::per_placement;
            kw_params.weighted_cores = kw_weighted;
            return cmd_keywords(kw_in, kw_emb, kw_params, kw_stoplists, kw_out, kw_sizes_out);
        }
        if (*classify) {
            cls.cfg.tasks.clear();
            std::size_t pos = 0;
            while (pos <= cls_tasks.size()) {
                std::size_t comma = cls_tasks.find(',', pos);
                if (comma == std::string::npos) comma = cls_tasks.size();
                if (comma > pos) cls.cfg.tasks.push_back(cls_tasks.substr(pos, comma - pos));
                pos = comma + 1;
            }
            cls.cfg.k_grid = parse_size_list(cls_kgrid, "--k-grid");
            cls.cfg.pool_folds = !cls_per_fold;
            return cmd_classify(std::move(cls));
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return 0;
}
