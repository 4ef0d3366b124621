#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spawn.hpp"
#include "tempdir.hpp"

using testutil::RunResult;
using testutil::TempDir;

namespace {

const std::string kCli = SITEVEC_CLI_PATH;

// Shared fixture: a small structured corpus trained once, reused across the
// test cases below.
struct TrainedFixture {
    TempDir dir;
    std::filesystem::path corpus;
    std::string prefix;

    TrainedFixture() {
        std::ostringstream text;
        // Three word families with heavy internal co-occurrence plus filler.
        for (int r = 0; r < 260; ++r) {
            text << "acid sulfuric hydrochloric acid chlorine burn chemical tank acid "
                    "sulfuric chlorine burn\n";
            text << "beam steel girder beam column weld crane lift beam steel weld crane\n";
            text << "roof shingle ladder roof gutter fall edge rail roof shingle fall edge\n";
            text << "the crew was on the site near the gate that day\n";
        }
        corpus = dir.write("corpus.txt", text.str());
        prefix = (dir.path() / "model").string();

        auto r = testutil::run_process(
            kCli,
            {"train", "--corpus", corpus.string(), "--out", prefix, "--dim", "16", "--epochs",
             "8", "--window", "3", "--negatives", "2", "--min-count", "5", "--table-size",
             "100000", "--subsample", "0", "--seed", "11", "--report-interval", "0"},
            dir.path());
        REQUIRE_MESSAGE(r.status == 0, r.err);
    }

    std::string embeddings_txt() const { return prefix + ".txt"; }
    std::string embeddings_bin() const { return prefix + ".bin"; }
    std::string vocab_tsv() const { return prefix + ".vocab.tsv"; }
};

const TrainedFixture& fixture() {
    static TrainedFixture fx;
    return fx;
}

RunResult run(const std::vector<std::string>& args) {
    return testutil::run_process(kCli, args, fixture().dir.path());
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("help exits zero and names every subcommand") {
    auto r = run({"--help"});
    CHECK(r.status == 0);
    for (const char* cmd : {"train", "explore", "distance", "keywords", "classify"})
        CHECK(r.out.find(cmd) != std::string::npos);
}

TEST_CASE("usage errors exit with code one") {
    CHECK(run({}).status == 1);                         // missing subcommand
    CHECK(run({"train"}).status == 1);                  // missing required options
    CHECK(run({"no-such-command"}).status == 1);
    CHECK(run({"explore", "--embeddings"}).status == 1);  // dangling value
}

TEST_CASE("train writes vocabulary and both embedding formats") {
    const auto& fx = fixture();
    CHECK(std::filesystem::exists(fx.vocab_tsv()));
    CHECK(std::filesystem::exists(fx.embeddings_txt()));
    CHECK(std::filesystem::exists(fx.embeddings_bin()));

    // Vocabulary: word<TAB>count lines, counts descending.
    auto vocab = testutil::slurp(fx.vocab_tsv());
    CHECK(vocab.find("acid\t") != std::string::npos);
    CHECK(vocab.find('\t') != std::string::npos);
}

TEST_CASE("train on a missing corpus exits two and names the path") {
    TempDir scratch;
    auto r = testutil::run_process(
        kCli,
        {"train", "--corpus", "/no/such/corpus.txt", "--out",
         (scratch.path() / "m").string()},
        scratch.path());
    CHECK(r.status == 2);
    CHECK(r.err.find("/no/such/corpus.txt") != std::string::npos);
}

TEST_CASE("train with zero epochs warns and writes the initialization") {
    TempDir scratch;
    auto corpus = scratch.write("c.txt",
                                "alpha beta gamma delta alpha beta gamma delta alpha beta "
                                "gamma delta alpha beta gamma delta alpha beta gamma delta");
    auto prefix = (scratch.path() / "init").string();
    auto r = testutil::run_process(
        kCli,
        {"train", "--corpus", corpus.string(), "--out", prefix, "--dim", "8", "--epochs", "0",
         "--min-count", "1", "--table-size", "1000", "--report-interval", "0"},
        scratch.path());
    CHECK(r.status == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    CHECK(std::filesystem::exists(prefix + ".txt"));
}

TEST_CASE("deterministic retrain reproduces the binary file byte for byte") {
    const auto& fx = fixture();
    TempDir scratch;
    auto prefix = (scratch.path() / "again").string();
    auto r = testutil::run_process(
        kCli,
        {"train", "--corpus", fx.corpus.string(), "--out", prefix, "--dim", "16", "--epochs",
         "8", "--window", "3", "--negatives", "2", "--min-count", "5", "--table-size",
         "100000", "--subsample", "0", "--seed", "11", "--report-interval", "0"},
        scratch.path());
    REQUIRE(r.status == 0);
    CHECK(testutil::slurp(prefix + ".bin") == testutil::slurp(fx.embeddings_bin()));
    CHECK(testutil::slurp(prefix + ".vocab.tsv") == testutil::slurp(fx.vocab_tsv()));
}

TEST_CASE("nearest prints k rows of word and score") {
    auto r = run({"explore", "--embeddings", fixture().embeddings_txt(), "nearest", "acid",
                  "--k", "3"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    CHECK(count_lines(r.out) == 3);

    std::istringstream rows(r.out);
    std::string word;
    double score;
    while (rows >> word >> score) {
        CHECK(word != "acid");  // query excluded by default
        CHECK(score <= 1.0 + 1e-9);
        CHECK(score >= -1.0 - 1e-9);
    }

    SUBCASE("include-query keeps the query on top") {
        auto rq = run({"explore", "--embeddings", fixture().embeddings_txt(), "nearest", "acid",
                       "--k", "3", "--include-query"});
        REQUIRE(rq.status == 0);
        CHECK(rq.out.substr(0, 5) == "acid ");
    }
}

TEST_CASE("binary embeddings load through format sniffing") {
    auto txt = run({"explore", "--embeddings", fixture().embeddings_txt(), "nearest", "beam",
                    "--k", "5"});
    auto bin = run({"explore", "--embeddings", fixture().embeddings_bin(), "nearest", "beam",
                    "--k", "5"});
    REQUIRE(txt.status == 0);
    REQUIRE(bin.status == 0);

    // Same neighbor set from both formats; the text file rounds the floats,
    // so exact ordering of near-ties may differ.
    auto word_set = [](const std::string& s) {
        std::set<std::string> w;
        std::istringstream in(s);
        std::string a, b;
        while (in >> a >> b) w.insert(a);
        return w;
    };
    CHECK(word_set(txt.out) == word_set(bin.out));
}

TEST_CASE("unknown words exit two and are named") {
    auto r = run({"explore", "--embeddings", fixture().embeddings_txt(), "nearest",
                  "plutonium"});
    CHECK(r.status == 2);
    CHECK(r.err.find("plutonium") != std::string::npos);
}

TEST_CASE("mismatch prints exactly one row") {
    auto r = run({"explore", "--embeddings", fixture().embeddings_txt(), "mismatch", "acid",
                  "sulfuric", "chlorine", "roof"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    CHECK(count_lines(r.out) == 1);

    SUBCASE("fewer than three words is a usage error") {
        auto bad = run({"explore", "--embeddings", fixture().embeddings_txt(), "mismatch",
                        "acid", "roof"});
        CHECK(bad.status == 1);
    }
}

TEST_CASE("analogy prints candidates excluding the inputs") {
    auto r = run({"explore", "--embeddings", fixture().embeddings_txt(), "analogy", "acid",
                  "sulfuric", "beam", "--k", "4"});
    REQUIRE_MESSAGE(r.status == 0, r.err);
    CHECK(count_lines(r.out) == 4);
    std::istringstream rows(r.out);
    std::string word;
    double score;
    while (rows >> word >> score) {
        CHECK(word != "acid");
        CHECK(word != "sulfuric");
        CHECK(word != "beam");
    }
}

TEST_CASE("pca writes a csv of word coordinates") {
    const auto& fx = fixture();
    TempDir scratch;
    auto words = scratch.write("words.txt", "acid\nsulfuric\nbeam\nroof\nladder\n");
    auto out = scratch.file("proj.csv");
    auto r = testutil::run_process(kCli,
                                   {"explore", "--embeddings", fx.embeddings_txt(), "pca",
                                    "--words-file", words.string(), "--out", out.string()},
                                   scratch.path());
    REQUIRE_MESSAGE(r.status == 0, r.err);
    auto csv = testutil::slurp(out);
    REQUIRE(count_lines(csv) == 5);
    CHECK(csv.substr(0, 5) == "acid,");
    std::istringstream rows(csv);
    std::string row;
    while (std::getline(rows, row)) {
        // word,x,y: exactly two coordinates per row
        CHECK(std::count(row.begin(), row.end(), ',') == 2);
    }
}

TEST_CASE("distance emits a dense matrix csv") {
    const auto& fx = fixture();
    TempDir scratch;
    auto d1 = scratch.write("d1.txt", "acid sulfuric burn\nbeam steel crane\n");
    auto d2 = scratch.write("d2.txt",
                            "acid chlorine tank\nroof ladder fall\nbeam girder weld\n");

    auto r = testutil::run_process(kCli,
                                   {"distance", "--docs1", d1.string(), "--docs2", d2.string(),
                                    "--embeddings", fx.embeddings_txt()},
                                   scratch.path());
    REQUIRE_MESSAGE(r.status == 0, r.err);
    REQUIRE(count_lines(r.out) == 2);

    // Parse the 2x3 matrix and sanity-check the topical structure: the acid
    // document is closer to the acid-ish column than the beam row is.
    std::vector<std::vector<double>> m;
    std::istringstream rows(r.out);
    std::string line;
    while (std::getline(rows, line)) {
        std::vector<double> vals;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) vals.push_back(std::stod(cell));
        REQUIRE(vals.size() == 3);
        m.push_back(vals);
    }
    CHECK(m[0][0] < m[1][0]);
    for (const auto& row : m)
        for (double v : row) CHECK(v >= 0.0);

    SUBCASE("bow metric gives exact count distances") {
        auto rb = testutil::run_process(
            kCli,
            {"distance", "--docs1", d1.string(), "--docs2", d2.string(), "--embeddings",
             fx.embeddings_txt(), "--metric", "bow"},
            scratch.path());
        REQUIRE(rb.status == 0);
        // Row 1 vs col 1: docs share "acid", differ in two words each.
        CHECK(rb.out.substr(0, rb.out.find(',')) == "2");
    }
}

TEST_CASE("wmd distance on an all-stopword document exits two naming the line") {
    const auto& fx = fixture();
    TempDir scratch;
    auto d1 = scratch.write("d1.txt", "acid burn\nzzz qqq\n");
    auto d2 = scratch.write("d2.txt", "beam steel\n");
    auto r = testutil::run_process(kCli,
                                   {"distance", "--docs1", d1.string(), "--docs2", d2.string(),
                                    "--embeddings", fx.embeddings_txt()},
                                   scratch.path());
    CHECK(r.status == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("keywords compresses long documents and passes short ones through") {
    const auto& fx = fixture();
    TempDir scratch;
    std::string long_doc;
    for (int r = 0; r < 4; ++r)
        long_doc += "acid sulfuric chlorine burn tank beam steel girder crane roof ";
    auto in = scratch.write("docs.txt", long_doc + "\nacid burn tank\n");

    auto r = testutil::run_process(
        kCli,
        {"keywords", "--in", in.string(), "--embeddings", fx.embeddings_txt(), "--window", "4",
         "--retain", "0.3", "--min-len", "15"},
        scratch.path());
    REQUIRE_MESSAGE(r.status == 0, r.err);
    REQUIRE(count_lines(r.out) == 2);

    auto nl = r.out.find('\n');
    std::string first = r.out.substr(0, nl);
    std::string second = r.out.substr(nl + 1, r.out.size() - nl - 2);
    // 10 distinct words, retain 0.3 -> ceil(3) keywords.
    std::istringstream fw(first);
    std::string w;
    std::size_t n_first = 0;
    while (fw >> w) ++n_first;
    CHECK(n_first == 3);
    CHECK(second == "acid burn tank");  // below min-len: unchanged
}

TEST_CASE("classify produces the result tables and honors the cache") {
    const auto& fx = fixture();
    TempDir scratch;

    // 24 labeled reports in two well-separated severity/trade classes.
    std::ostringstream csv;
    csv << "id,narrative,keywords,degree,nature,occupation,naics\n";
    for (int i = 0; i < 24; ++i) {
        const bool acid = (i % 2) == 0;
        csv << i + 1 << ",";
        if (acid)
            csv << "\"acid sulfuric chlorine burn tank chemical\"";
        else
            csv << "\"beam steel girder crane weld lift\"";
        csv << ",k," << (acid ? "hospitalized" : "fatality") << ",fracture,"
            << (acid ? "laborers" : "ironworkers") << ",238\n";
    }
    // One unlabeled row must be ignored.
    csv << "99,\"acid burn\",k,,fracture,laborers,238\n";
    auto dataset = scratch.write("reports.csv", csv.str());
    auto out_dir = scratch.file("results");

    std::vector<std::string> args = {
        "classify", "--dataset", dataset.string(),      "--embeddings", fx.embeddings_txt(),
        "--out-dir", out_dir.string(), "--tasks",       "severity,trade", "--k-grid", "1,3",
        "--n-folds", "4"};
    auto r = testutil::run_process(kCli, args, scratch.path());
    REQUIRE_MESSAGE(r.status == 0, r.err);
    CHECK(r.err.find("24 fully labeled") != std::string::npos);

    auto results = testutil::slurp(out_dir / "results.csv");
    CHECK(results.find("task,k,metric_compressed,class,precision,recall,f1,support,macro_f1,"
                       "micro_f1") == 0);
    CHECK(results.find("severity,1,full,fatality,") != std::string::npos);
    CHECK(results.find("trade,3,full,laborers,") != std::string::npos);
    CHECK(std::filesystem::exists(out_dir / "timing.csv"));

    // Separable classes should classify perfectly.
    CHECK(results.find(",100.00,100.00") != std::string::npos);

    SUBCASE("second run hits the cache and reproduces results byte for byte") {
        auto out2 = scratch.file("results2");
        auto args2 = args;
        args2[6] = out2.string();
        args2.push_back("--cache-dir");
        args2.push_back((out_dir / "cache").string());
        auto r2 = testutil::run_process(kCli, args2, scratch.path());
        REQUIRE(r2.status == 0);
        CHECK(r2.err.find("hits") != std::string::npos);
        CHECK(testutil::slurp(out2 / "results.csv") == results);
    }

    SUBCASE("compress adds the comparison table") {
        auto out3 = scratch.file("results3");
        auto args3 = args;
        args3[6] = out3.string();
        args3.push_back("--compress");
        args3.push_back("--min-len");
        args3.push_back("4");
        args3.push_back("--retain");
        args3.push_back("0.5");
        auto r3 = testutil::run_process(kCli, args3, scratch.path());
        REQUIRE_MESSAGE(r3.status == 0, r3.err);
        auto rel = testutil::slurp(out3 / "relative_change.csv");
        CHECK(rel.find("task,k,full_micro_f1,compressed_micro_f1,relative_change_pct") == 0);
        CHECK(count_lines(rel) == 1 + 4);  // header + 2 tasks x 2 ks
        auto res3 = testutil::slurp(out3 / "results.csv");
        CHECK(res3.find(",compressed,") != std::string::npos);
    }
}

TEST_CASE("classify rejects an unknown task as a usage error") {
    const auto& fx = fixture();
    TempDir scratch;
    auto dataset = scratch.write("d.csv",
                                 "id,narrative,keywords,degree,nature,occupation,naics\n"
                                 "1,acid burn,k,hospitalized,fracture,laborers,238\n"
                                 "2,beam steel,k,fatality,fracture,roofers,238\n");
    auto r = testutil::run_process(
        kCli,
        {"classify", "--dataset", dataset.string(), "--embeddings", fx.embeddings_txt(),
         "--out-dir", (scratch.path() / "o").string(), "--tasks", "starsign"},
        scratch.path());
    CHECK(r.status == 1);
    CHECK(r.err.find("starsign") != std::string::npos);
}

TEST_CASE("config file supplies defaults that flags can override") {
    const auto& fx = fixture();
    TempDir scratch;
    auto cfgfile = scratch.write("q.ini", "[explore.nearest]\nk=2\n");
    auto r = testutil::run_process(kCli,
                                   {"--config", cfgfile.string(), "explore", "--embeddings",
                                    fx.embeddings_txt(), "nearest", "acid"},
                                   scratch.path());
    REQUIRE_MESSAGE(r.status == 0, r.err);
    CHECK(count_lines(r.out) == 2);
}

TEST_SUITE_END();
