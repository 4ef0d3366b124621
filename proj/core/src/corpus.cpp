#include "sitevec/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "sitevec/errors.hpp"

namespace sitevec {

namespace {

inline bool is_token_char(unsigned char c) {
    return std::isalnum(c) || c == '-' || c >= 0x80;
}

// Trims leading/trailing hyphens in place; returns false if nothing is left.
inline bool trim_hyphens(std::string& tok) {
    std::size_t b = 0, e = tok.size();
    while (b < e && tok[b] == '-') ++b;
    while (e > b && tok[e - 1] == '-') --e;
    if (b == 0 && e == tok.size()) return !tok.empty();
    tok = tok.substr(b, e - b);
    return !tok.empty();
}

}  // namespace

void Tokenizer::tokenize(std::string_view text,
                         const std::function<void(std::string&&)>& sink) const {
    std::string cur;
    auto flush = [&] {
        if (trim_hyphens(cur) && !stopwords_.contains(cur)) sink(std::move(cur));
        cur.clear();
    };
    for (unsigned char c : text) {
        if (is_token_char(c)) {
            cur.push_back(c < 0x80 ? static_cast<char>(std::tolower(c))
                                   : static_cast<char>(c));
        } else if (!cur.empty()) {
            flush();
        }
    }
    if (!cur.empty()) flush();
}

std::vector<std::string> Tokenizer::tokenize(std::string_view text) const {
    std::vector<std::string> out;
    tokenize(text, [&](std::string&& tok) { out.push_back(std::move(tok)); });
    return out;
}

void Tokenizer::add_stoplist_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open stoplist: " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t b = line.find_first_not_of(' ');
        if (b == std::string::npos) continue;
        std::string w = line.substr(b);
        std::transform(w.begin(), w.end(), w.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        stopwords_.insert(std::move(w));
    }
}

TokenStream chunk(const std::vector<std::string>& tokens, std::size_t chunk_size,
                  std::string source_id) {
    if (chunk_size == 0) throw std::invalid_argument("chunk_size must be >= 1");
    TokenStream out;
    out.source_id = std::move(source_id);
    out.chunks.reserve(tokens.size() / chunk_size + 1);
    for (std::size_t i = 0; i < tokens.size(); i += chunk_size) {
        std::size_t end = std::min(i + chunk_size, tokens.size());
        out.chunks.emplace_back(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                tokens.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return out;
}

std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) throw io_error("corpus path does not exist: " + path.string());
    if (fs::is_regular_file(path)) return {path};
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    if (files.empty()) throw io_error("corpus directory is empty: " + path.string());
    return files;
}

std::size_t for_each_corpus_chunk(const std::vector<std::filesystem::path>& files,
                                  const Tokenizer& tokenizer, std::size_t chunk_size,
                                  const std::function<void(std::vector<std::string>&&)>& sink) {
    if (chunk_size == 0) throw std::invalid_argument("chunk_size must be >= 1");
    std::size_t total = 0;
    std::vector<std::string> chunk;
    chunk.reserve(chunk_size);
    std::string line;
    for (const auto& file : files) {
        std::ifstream in(file);
        if (!in) throw io_error("cannot open corpus file: " + file.string());
        while (std::getline(in, line)) {
            tokenizer.tokenize(line, [&](std::string&& tok) {
                chunk.push_back(std::move(tok));
                ++total;
                if (chunk.size() == chunk_size) {
                    sink(std::move(chunk));
                    chunk = {};
                    chunk.reserve(chunk_size);
                }
            });
        }
    }
    if (!chunk.empty()) sink(std::move(chunk));
    return total;
}

std::vector<CsvRow> read_csv(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open dataset: " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::vector<CsvRow> rows;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool row_started = false;
    std::size_t line = 1;
    std::size_t row_start_line = 1;

    auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(CsvRow{std::move(fields), row_start_line});
        fields = {};
        row_started = false;
    };

    for (std::size_t i = 0; i < data.size(); ++i) {
        char c = data[i];
        if (!row_started && c != '\r') {
            row_started = true;
            row_start_line = line;
        }
        if (c == '\n') ++line;
        if (quoted) {
            if (c == '"') {
                if (i + 1 < data.size() && data[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
        } else if (c == '\r') {
            // tolerated, dropped
        } else if (c == '\n') {
            end_row();
        } else if (c == delimiter) {
            end_field();
        } else {
            field.push_back(c);
        }
    }
    if (quoted) throw format_error("unterminated quoted field in " + path.string(), data.size());
    if (row_started) end_row();
    return rows;
}

std::vector<ReportRecord> load_dataset(const std::filesystem::path& path, char delimiter,
                                       const DatasetSchema& schema) {
    auto rows = read_csv(path, delimiter);
    if (rows.empty()) throw format_error("dataset has no header row: " + path.string(), 0);

    const auto& header = rows.front().fields;
    auto column = [&](const std::string& name) -> std::ptrdiff_t {
        auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : it - header.begin();
    };
    auto required = [&](const std::string& name) {
        auto idx = column(name);
        if (idx < 0) throw schema_error("dataset is missing required column '" + name + "'", name);
        return static_cast<std::size_t>(idx);
    };

    const std::size_t id_col = required(schema.id);
    const std::size_t narrative_col = required(schema.narrative);
    const std::size_t keywords_col = required(schema.keywords);
    const std::size_t severity_col = required(schema.severity);
    const std::size_t injury_col = required(schema.injury_type);
    const std::size_t trade_col = required(schema.trade);
    const std::size_t naics_col = required(schema.naics);

    std::vector<ReportRecord> records;
    records.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() == 1 && row.fields[0].empty()) continue;  // trailing blank line
        if (row.fields.size() != header.size())
            throw row_error("row has " + std::to_string(row.fields.size()) + " fields, expected " +
                                std::to_string(header.size()),
                            row.line);
        ReportRecord rec;
        rec.id = row.fields[id_col];
        rec.narrative = row.fields[narrative_col];
        rec.keywords_field = row.fields[keywords_col];
        rec.severity = row.fields[severity_col];
        rec.injury_type = row.fields[injury_col];
        rec.trade = row.fields[trade_col];
        rec.naics = row.fields[naics_col];
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == id_col || c == narrative_col || c == keywords_col || c == severity_col ||
                c == injury_col || c == trade_col || c == naics_col)
                continue;
            rec.extra.emplace_back(header[c], row.fields[c]);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

namespace {
inline bool is_blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}
}  // namespace

std::vector<ReportRecord> filter_labeled(const std::vector<ReportRecord>& records) {
    std::vector<ReportRecord> out;
    for (const auto& r : records) {
        if (!is_blank(r.severity) && !is_blank(r.injury_type) && !is_blank(r.trade))
            out.push_back(r);
    }
    return out;
}

}  // namespace sitevec
