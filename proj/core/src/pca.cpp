#include "sitevec/pca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "sitevec/errors.hpp"

namespace sitevec {

PcaResult pca_project(const EmbeddingMatrix& emb, const std::vector<std::string>& words,
                      std::size_t dims, bool fit_globally) {
    if (dims == 0) throw std::invalid_argument("pca: dims must be positive");
    std::unordered_set<std::string_view> distinct(words.begin(), words.end());
    if (distinct.size() < dims + 1)
        throw std::invalid_argument("pca needs at least dims+1 distinct words");

    std::vector<std::uint32_t> ids;
    ids.reserve(words.size());
    for (const auto& w : words) ids.push_back(emb.require(w));

    const std::size_t m = emb.dim();
    auto gather = [&](const std::vector<std::uint32_t>& rows) {
        Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto r = emb.row(rows[i]);
            for (std::size_t d = 0; d < m; ++d)
                x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = r[d];
        }
        return x;
    };

    Eigen::MatrixXd fit;
    if (fit_globally) {
        std::vector<std::uint32_t> all(emb.size());
        for (std::uint32_t i = 0; i < emb.size(); ++i) all[i] = i;
        fit = gather(all);
    } else {
        fit = gather(ids);
    }

    Eigen::RowVectorXd mean = fit.colwise().mean();
    Eigen::MatrixXd centered = fit.rowwise() - mean;
    Eigen::MatrixXd cov =
        centered.transpose() * centered / static_cast<double>(fit.rows() - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        throw numerical_error("pca eigendecomposition did not converge");

    // Eigen returns ascending eigenvalues; take the top `dims` in descending
    // order and orient each so its largest-magnitude coefficient is positive.
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(dims));
    PcaResult result;
    result.dims = dims;
    double total = std::max(solver.eigenvalues().sum(), 0.0);
    for (std::size_t c = 0; c < dims; ++c) {
        Eigen::Index src = static_cast<Eigen::Index>(m - 1 - c);
        Eigen::VectorXd v = solver.eigenvectors().col(src);
        Eigen::Index peak = 0;
        v.cwiseAbs().maxCoeff(&peak);
        if (v(peak) < 0) v = -v;
        basis.col(static_cast<Eigen::Index>(c)) = v;
        double lambda = std::max(solver.eigenvalues()(src), 0.0);
        result.eigenvalues.push_back(lambda);
        result.explained_variance.push_back(total > 0 ? lambda / total : 0.0);
    }

    Eigen::MatrixXd query = gather(ids);
    Eigen::MatrixXd projected = (query.rowwise() - mean) * basis;

    result.words = words;
    result.coords.resize(words.size() * dims);
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t d = 0; d < dims; ++d)
            result.coords[i * dims + d] =
                projected(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));
    return result;
}

}  // namespace sitevec
