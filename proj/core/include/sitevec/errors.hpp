#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sitevec {

// I/O failures. The message always carries the offending path.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed file content (bad header, truncated payload, ...).
struct format_error : std::runtime_error {
    format_error(const std::string& what, std::size_t byte_offset)
        : std::runtime_error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
          byte_offset(byte_offset) {}
    std::size_t byte_offset;
};

// Dataset table is missing a required column.
struct schema_error : std::runtime_error {
    schema_error(const std::string& what, std::string column)
        : std::runtime_error(what), column(std::move(column)) {}
    std::string column;
};

// A single malformed row in an otherwise readable table.
struct row_error : std::runtime_error {
    row_error(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    std::size_t line;
};

struct unknown_word_error : std::runtime_error {
    explicit unknown_word_error(std::string w)
        : std::runtime_error("unknown word: " + w), word(std::move(w)) {}
    std::string word;
};

// Document has no in-vocabulary token left.
struct empty_document_error : std::runtime_error {
    empty_document_error() : std::runtime_error("document has no in-vocabulary tokens") {}
    explicit empty_document_error(const std::string& what) : std::runtime_error(what) {}
};

struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sitevec
