#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "semaug/dataset.hpp"

namespace semaug {

/// One vector per category, order matching the CategorySet it was built from.
struct EmbeddingTable {
    std::size_t dimension = 0;
    std::vector<std::string> names;
    std::vector<std::vector<double>> vectors;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    /// One vector per name, order preserved. Responses must be idempotent and
    /// order-independent. Throws BackendError carrying the failing category.
    virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& names) = 0;
};

/// Precomputed embeddings from a JSON file: { "<category>": [f, f, ...], ... }
class FileEmbeddingProvider : public EmbeddingProvider {
public:
    explicit FileEmbeddingProvider(const std::filesystem::path& file);

    std::vector<std::vector<double>> embed(const std::vector<std::string>& names) override;

private:
    std::unordered_map<std::string, std::vector<double>> table_;
    std::filesystem::path source_;
};

/// Deterministic unit vectors derived from the category name. No model, no
/// I/O; affinities are arbitrary but stable, which is all stub runs need.
class HashEmbeddingProvider : public EmbeddingProvider {
public:
    explicit HashEmbeddingProvider(std::size_t dimension = 16);

    std::vector<std::vector<double>> embed(const std::vector<std::string>& names) override;

private:
    std::size_t dimension_;
};

/// Collects provider vectors verbatim (no normalization here).
/// Throws ValidationError on dimension mismatch across categories.
EmbeddingTable embed_categories(const CategorySet& categories, EmbeddingProvider& provider);

}  // namespace semaug
