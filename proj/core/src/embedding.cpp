#include "sitevec/embedding.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "sitevec/errors.hpp"

namespace sitevec {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary vector I/O assumes a little-endian host");

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path.string());
    std::string data;
    in.seekg(0, std::ios::end);
    data.resize(static_cast<std::size_t>(in.tellg()));
    in.seekg(0);
    in.read(data.data(), static_cast<std::streamsize>(data.size()));
    if (!in) throw io_error("read failed on " + path.string());
    return data;
}

// Parses the "vocab_size dim\n" header; returns offset of the first record.
std::size_t parse_header(const std::string& data, const std::filesystem::path& path,
                         std::size_t& vocab_size, std::size_t& dim) {
    std::size_t eol = data.find('\n');
    if (eol == std::string::npos)
        throw format_error(path.string() + ": missing header line", 0);
    const char* p = data.data();
    const char* end = p + eol;
    auto r1 = std::from_chars(p, end, vocab_size);
    if (r1.ec != std::errc() || r1.ptr == end || *r1.ptr != ' ')
        throw format_error(path.string() + ": bad header", 0);
    auto r2 = std::from_chars(r1.ptr + 1, end, dim);
    if (r2.ec != std::errc() || r2.ptr != end)
        throw format_error(path.string() + ": bad header", 0);
    if (dim == 0) throw format_error(path.string() + ": zero dimension in header", 0);
    return eol + 1;
}

bool looks_binary(const std::string& data, std::size_t body_start) {
    std::size_t limit = std::min(data.size(), body_start + 4096);
    for (std::size_t i = body_start; i < limit; ++i) {
        unsigned char c = static_cast<unsigned char>(data[i]);
        if (c < 0x09) return true;  // control bytes never occur in the text format
    }
    return false;
}

}  // namespace

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> words, std::size_t dim)
    : words_(std::move(words)), dim_(dim) {
    if (dim_ == 0) throw std::invalid_argument("embedding dimension must be positive");
    data_.assign(words_.size() * dim_, 0.0f);
    word_to_id_.reserve(words_.size());
    for (std::uint32_t i = 0; i < words_.size(); ++i) {
        auto [it, fresh] = word_to_id_.emplace(words_[i], i);
        if (!fresh) throw std::invalid_argument("duplicate word in embedding matrix: " + words_[i]);
    }
}

std::optional<std::uint32_t> EmbeddingMatrix::id_of(std::string_view word) const {
    auto it = word_to_id_.find(word);
    if (it == word_to_id_.end()) return std::nullopt;
    return it->second;
}

std::uint32_t EmbeddingMatrix::require(std::string_view word) const {
    auto id = id_of(word);
    if (!id) throw unknown_word_error(std::string(word));
    return *id;
}

void save_embeddings(const EmbeddingMatrix& emb, const std::filesystem::path& path,
                     VectorFormat format) {
    if (format == VectorFormat::automatic)
        throw std::invalid_argument("save_embeddings needs an explicit format");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open " + path.string() + " for writing");
    out << emb.size() << ' ' << emb.dim() << '\n';
    if (format == VectorFormat::text) {
        char buf[32];
        for (std::uint32_t i = 0; i < emb.size(); ++i) {
            out << emb.word(i);
            for (float v : emb.row(i)) {
                int n = std::snprintf(buf, sizeof buf, " %.6g", static_cast<double>(v));
                out.write(buf, n);
            }
            out.put('\n');
        }
    } else {
        for (std::uint32_t i = 0; i < emb.size(); ++i) {
            const auto& w = emb.word(i);
            out.write(w.data(), static_cast<std::streamsize>(w.size()));
            out.put(' ');
            auto row = emb.row(i);
            out.write(reinterpret_cast<const char*>(row.data()),
                      static_cast<std::streamsize>(row.size() * sizeof(float)));
        }
    }
    out.flush();
    if (!out) throw io_error("write failed on " + path.string());
}

namespace {

EmbeddingMatrix load_text(const std::string& data, std::size_t pos,
                          const std::filesystem::path& path, std::size_t vocab_size,
                          std::size_t dim, const std::unordered_set<std::string>* restrict_to) {
    std::vector<std::string> words;
    std::vector<float> values;
    words.reserve(restrict_to ? restrict_to->size() : vocab_size);
    values.reserve((restrict_to ? restrict_to->size() : vocab_size) * dim);
    std::vector<float> row(dim);

    for (std::size_t rec = 0; rec < vocab_size; ++rec) {
        if (pos >= data.size())
            throw format_error(path.string() + ": truncated payload", pos);
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::size_t sp = data.find(' ', pos);
        if (sp == std::string::npos || sp >= eol)
            throw format_error(path.string() + ": record without vector values", pos);
        std::string word = data.substr(pos, sp - pos);
        const char* p = data.data() + sp;
        const char* end = data.data() + eol;
        for (std::size_t d = 0; d < dim; ++d) {
            while (p != end && *p == ' ') ++p;
            auto r = std::from_chars(p, end, row[d]);
            if (r.ec != std::errc())
                throw format_error(path.string() + ": bad float value",
                                   static_cast<std::size_t>(p - data.data()));
            p = r.ptr;
        }
        while (p != end && *p == ' ') ++p;
        if (p != end)
            throw format_error(path.string() + ": trailing data in record",
                               static_cast<std::size_t>(p - data.data()));
        if (!restrict_to || restrict_to->count(word)) {
            words.push_back(std::move(word));
            values.insert(values.end(), row.begin(), row.end());
        }
        pos = eol + (eol < data.size() ? 1 : 0);
    }
    EmbeddingMatrix emb(std::move(words), dim);
    std::copy(values.begin(), values.end(), emb.data().begin());
    return emb;
}

EmbeddingMatrix load_binary(const std::string& data, std::size_t pos,
                            const std::filesystem::path& path, std::size_t vocab_size,
                            std::size_t dim, const std::unordered_set<std::string>* restrict_to) {
    std::vector<std::string> words;
    std::vector<float> values;
    words.reserve(restrict_to ? restrict_to->size() : vocab_size);
    values.reserve((restrict_to ? restrict_to->size() : vocab_size) * dim);
    const std::size_t payload = dim * sizeof(float);

    for (std::size_t rec = 0; rec < vocab_size; ++rec) {
        // Some writers terminate the previous record with '\n'; skip it.
        while (pos < data.size() && data[pos] == '\n') ++pos;
        std::size_t sp = data.find(' ', pos);
        if (sp == std::string::npos)
            throw format_error(path.string() + ": truncated record header", pos);
        std::string word = data.substr(pos, sp - pos);
        pos = sp + 1;
        if (pos + payload > data.size())
            throw format_error(path.string() + ": truncated payload", pos);
        if (!restrict_to || restrict_to->count(word)) {
            words.push_back(std::move(word));
            std::size_t off = values.size();
            values.resize(off + dim);
            std::memcpy(values.data() + off, data.data() + pos, payload);
        }
        pos += payload;
    }
    EmbeddingMatrix emb(std::move(words), dim);
    std::copy(values.begin(), values.end(), emb.data().begin());
    return emb;
}

}  // namespace

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, VectorFormat format,
                                const std::unordered_set<std::string>* restrict_to) {
    std::string data = read_file(path);
    std::size_t vocab_size = 0, dim = 0;
    std::size_t body = parse_header(data, path, vocab_size, dim);
    if (format == VectorFormat::automatic)
        format = looks_binary(data, body) ? VectorFormat::binary : VectorFormat::text;
    return format == VectorFormat::text
               ? load_text(data, body, path, vocab_size, dim, restrict_to)
               : load_binary(data, body, path, vocab_size, dim, restrict_to);
}

double cosine(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("cosine: dimension mismatch");
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    if (na == 0 || nb == 0)
        throw numerical_error("cosine undefined for a zero vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

// Scores every vocabulary row against v and returns the top k, excluding the
// listed ids. Ties break toward the smaller id so output is reproducible.
std::vector<QueryResult> top_k(const EmbeddingMatrix& emb, std::span<const float> v,
                               std::size_t k, const std::vector<std::uint32_t>& exclude) {
    double nv = 0;
    for (float x : v) nv += static_cast<double>(x) * x;
    if (nv == 0) throw numerical_error("cosine undefined for a zero vector");
    nv = std::sqrt(nv);

    struct Scored {
        double score;
        std::uint32_t id;
        bool operator<(const Scored& o) const {
            return score != o.score ? score > o.score : id < o.id;
        }
    };
    std::vector<Scored> scored;
    scored.reserve(emb.size());
    for (std::uint32_t i = 0; i < emb.size(); ++i) {
        if (std::find(exclude.begin(), exclude.end(), i) != exclude.end()) continue;
        auto row = emb.row(i);
        double dot = 0, nr = 0;
        for (std::size_t d = 0; d < row.size(); ++d) {
            dot += static_cast<double>(row[d]) * v[d];
            nr += static_cast<double>(row[d]) * row[d];
        }
        if (nr == 0) continue;  // zero rows can never rank
        scored.push_back({dot / (std::sqrt(nr) * nv), i});
    }
    k = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                      scored.end());
    std::vector<QueryResult> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        out.push_back({emb.word(scored[i].id), scored[i].score});
    return out;
}

}  // namespace

std::vector<QueryResult> nearest_to_vector(const EmbeddingMatrix& emb,
                                           std::span<const float> v, std::size_t k,
                                           const std::vector<std::uint32_t>& exclude) {
    if (v.size() != emb.dim())
        throw std::invalid_argument("query vector dimension mismatch");
    return top_k(emb, v, k, exclude);
}

std::vector<QueryResult> nearest(const EmbeddingMatrix& emb, std::string_view word,
                                 std::size_t k, bool exclude_query) {
    if (k == 0) throw std::invalid_argument("nearest: k must be positive");
    std::uint32_t id = emb.require(word);
    std::vector<std::uint32_t> exclude;
    if (exclude_query) exclude.push_back(id);
    return top_k(emb, emb.row(id), k, exclude);
}

std::string mismatch(const EmbeddingMatrix& emb, const std::vector<std::string>& words) {
    if (words.size() < 3)
        throw std::invalid_argument("mismatch needs at least 3 words");
    std::vector<std::uint32_t> ids;
    ids.reserve(words.size());
    for (const auto& w : words) ids.push_back(emb.require(w));

    std::size_t best = 0;
    double best_mean = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        double sum = 0;
        for (std::size_t j = 0; j < ids.size(); ++j) {
            if (j == i) continue;
            sum += cosine(emb.row(ids[i]), emb.row(ids[j]));
        }
        double mean = sum / static_cast<double>(ids.size() - 1);
        if (mean < best_mean) {
            best_mean = mean;
            best = i;
        }
    }
    return words[best];
}

std::vector<QueryResult> analogy(const EmbeddingMatrix& emb, std::string_view a,
                                 std::string_view b, std::string_view c, std::size_t k,
                                 bool exclude_inputs) {
    if (k == 0) throw std::invalid_argument("analogy: k must be positive");
    std::uint32_t ia = emb.require(a), ib = emb.require(b), ic = emb.require(c);
    std::vector<float> v(emb.dim());
    auto ra = emb.row(ia), rb = emb.row(ib), rc = emb.row(ic);
    for (std::size_t d = 0; d < emb.dim(); ++d) v[d] = rb[d] - ra[d] + rc[d];
    std::vector<std::uint32_t> exclude;
    if (exclude_inputs) exclude = {ia, ib, ic};
    return top_k(emb, v, k, exclude);
}

}  // namespace sitevec
