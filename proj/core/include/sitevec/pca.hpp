#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sitevec/embedding.hpp"

namespace sitevec {

struct PcaResult {
    std::vector<std::string> words;
    std::vector<double> coords;  // row-major, words.size() x dims
    std::size_t dims = 0;
    std::vector<double> eigenvalues;         // top components, descending
    std::vector<double> explained_variance;  // eigenvalue / total variance

    double coord(std::size_t row, std::size_t d) const { return coords[row * dims + d]; }
};

// Projects the listed words onto the top `dims` principal directions.
// The basis is fit on the listed vectors' centered sample covariance by
// default; with fit_globally it is fit on the whole matrix instead. Each
// component's largest-magnitude coefficient is oriented positive so output
// is reproducible. Needs at least dims+1 distinct words.
PcaResult pca_project(const EmbeddingMatrix& emb, const std::vector<std::string>& words,
                      std::size_t dims = 2, bool fit_globally = false);

}  // namespace sitevec
