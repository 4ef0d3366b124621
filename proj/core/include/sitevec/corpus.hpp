#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace sitevec {

// Lowercasing tokenizer: splits on anything that is not a letter, digit or
// hyphen, then trims leading/trailing hyphens. Keeps tokens like "2x4",
// "two-by-four" or "16-ft-long" intact. Bytes >= 0x80 are treated as letters
// so UTF-8 words survive (only ASCII is case-folded).
class Tokenizer {
public:
    Tokenizer() = default;
    explicit Tokenizer(std::unordered_set<std::string> stopwords)
        : stopwords_(std::move(stopwords)) {}

    std::vector<std::string> tokenize(std::string_view text) const;

    // Streaming variant: invokes `sink` for each token, no vector built.
    void tokenize(std::string_view text, const std::function<void(std::string&&)>& sink) const;

    void add_stoplist_file(const std::filesystem::path& path);
    void add_stopword(std::string word) { stopwords_.insert(std::move(word)); }
    const std::unordered_set<std::string>& stopwords() const { return stopwords_; }

private:
    std::unordered_set<std::string> stopwords_;
};

// A tokenized corpus cut into fixed-size chunks. Chunks act as hard context
// boundaries during training: no window ever crosses a chunk edge.
struct TokenStream {
    std::vector<std::vector<std::string>> chunks;
    std::string source_id;

    std::size_t token_count() const {
        std::size_t n = 0;
        for (const auto& c : chunks) n += c.size();
        return n;
    }
};

// Consecutive non-overlapping chunks of exactly `chunk_size` tokens, last
// chunk possibly shorter. Throws std::invalid_argument when chunk_size == 0.
TokenStream chunk(const std::vector<std::string>& tokens, std::size_t chunk_size,
                  std::string source_id = {});

// Expands a corpus path: a single file, or every regular file in a directory
// in lexicographic filename order (the concatenation order contract).
std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& path);

// Streams `files` through the tokenizer, emitting chunks of `chunk_size`
// tokens without materializing the corpus. Returns the total token count.
std::size_t for_each_corpus_chunk(const std::vector<std::filesystem::path>& files,
                                  const Tokenizer& tokenizer, std::size_t chunk_size,
                                  const std::function<void(std::vector<std::string>&&)>& sink);

// One row of the injury-report dataset. Label fields may be blank; blanks in
// the source file are preserved as empty strings.
struct ReportRecord {
    std::string id;
    std::string narrative;
    std::string keywords_field;
    std::string severity;     // "degree" column
    std::string injury_type;  // "nature" column
    std::string trade;        // "occupation" column
    std::string naics;
    std::vector<std::pair<std::string, std::string>> extra;  // remaining columns, header order
};

// Column names expected in the dataset header. Overridable for datasets that
// use different labels for the same fields.
struct DatasetSchema {
    std::string id = "id";
    std::string narrative = "narrative";
    std::string keywords = "keywords";
    std::string severity = "degree";
    std::string injury_type = "nature";
    std::string trade = "occupation";
    std::string naics = "naics";
};

// Parses a delimiter-separated table with a header row (standard quoting
// rules, quoted fields may contain delimiters and newlines).
// Throws schema_error when a required column is missing and row_error (with
// the line number) for rows whose field count does not match the header.
std::vector<ReportRecord> load_dataset(const std::filesystem::path& path, char delimiter = ',',
                                       const DatasetSchema& schema = {});

// Keeps exactly the records whose severity, injury_type and trade are all
// non-blank (blank = empty after whitespace trimming).
std::vector<ReportRecord> filter_labeled(const std::vector<ReportRecord>& records);

// Low-level delimiter-separated reader used by load_dataset; exposed for the
// CLI table outputs. Each returned row carries its 1-based starting line.
struct CsvRow {
    std::vector<std::string> fields;
    std::size_t line = 0;
};
std::vector<CsvRow> read_csv(const std::filesystem::path& path, char delimiter = ',');

}  // namespace sitevec
