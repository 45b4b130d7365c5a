#include "semaug/affinity.hpp"

#include <algorithm>
#include <cmath>

#include "semaug/errors.hpp"

namespace semaug {

AffinityMatrix::AffinityMatrix(std::vector<std::string> names, std::vector<double> values)
    : names_(std::move(names)), values_(std::move(values)) {
    if (values_.size() != names_.size() * names_.size()) {
        throw ValidationError("affinity matrix size does not match category count");
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
        index_[names_[i]] = i;
    }
}

std::optional<std::size_t> AffinityMatrix::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

double AffinityMatrix::row_sum(std::size_t i) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < names_.size(); ++j) sum += at(i, j);
    return sum;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw ValidationError("cosine_similarity: dimension mismatch");
    }
    double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        norm_a += a[i] * a[i];
        norm_b += b[i] * b[i];
    }
    if (norm_a == 0.0 || norm_b == 0.0) {
        throw ValidationError("cosine_similarity: zero-norm vector");
    }
    return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

AffinityMatrix build_affinity_matrix(const EmbeddingTable& table) {
    const std::size_t n = table.vectors.size();
    std::vector<double> values(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        values[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = cosine_similarity(table.vectors[i], table.vectors[j]);
            values[i * n + j] = a;
            values[j * n + i] = a;
        }
    }
    return AffinityMatrix(table.names, std::move(values));
}

double affinity_threshold(const AffinityMatrix& matrix, double top_fraction) {
    const std::size_t n = matrix.size();
    if (n < 2) throw ValidationError("affinity_threshold needs at least 2 categories");
    if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
        throw ValidationError("top_fraction must be in (0, 1]");
    }
    std::vector<double> offdiag;
    offdiag.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            offdiag.push_back(matrix.at(i, j));
        }
    }
    std::sort(offdiag.begin(), offdiag.end(), std::greater<>());
    // Small slack keeps ceil() exact when fraction*count is integral.
    auto rank = static_cast<std::size_t>(
        std::ceil(top_fraction * static_cast<double>(offdiag.size()) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, offdiag.size());
    return offdiag[rank - 1];
}

}  // namespace semaug
