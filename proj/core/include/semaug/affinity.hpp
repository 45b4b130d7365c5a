#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semaug/embedding.hpp"

namespace semaug {

/// Symmetric category-by-category cosine affinity table. Immutable after
/// construction and safe for concurrent reads.
class AffinityMatrix {
public:
    AffinityMatrix(std::vector<std::string> names, std::vector<double> values);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<std::size_t> index_of(std::string_view name) const;

    double at(std::size_t i, std::size_t j) const { return values_[i * names_.size() + j]; }
    double row_sum(std::size_t i) const;

private:
    std::vector<std::string> names_;
    std::vector<double> values_;  // n*n row-major
    std::unordered_map<std::string, std::size_t> index_;
};

/// Throws ValidationError when either vector has zero norm.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Pairwise cosine similarity over the embedding table. Each unordered pair
/// is computed once and mirrored, so the result is exactly symmetric with a
/// unit diagonal.
AffinityMatrix build_affinity_matrix(const EmbeddingTable& table);

/// Threshold t such that the top `top_fraction` of off-diagonal affinities
/// (upper triangle) satisfy A_ij >= t: with m = ceil(top_fraction * pairs),
/// t is the m-th largest off-diagonal value. Ties at t are admitted, so the
/// admitted set can exceed m only when values repeat.
double affinity_threshold(const AffinityMatrix& matrix, double top_fraction);

}  // namespace semaug
