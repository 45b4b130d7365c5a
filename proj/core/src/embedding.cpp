#include "semaug/embedding.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "semaug/errors.hpp"
#include "semaug/rng.hpp"

using nlohmann::json;

namespace semaug {

FileEmbeddingProvider::FileEmbeddingProvider(const std::filesystem::path& file) : source_(file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open embeddings file " + file.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("malformed embeddings file " + file.string() + ": " + e.what(), e.byte);
    }
    if (!root.is_object()) {
        throw ValidationError("embeddings file must be a JSON object: " + file.string());
    }
    for (const auto& [name, value] : root.items()) {
        if (!value.is_array()) {
            throw ValidationError("embedding for \"" + name + "\" must be an array of floats");
        }
        table_[name] = value.get<std::vector<double>>();
    }
}

std::vector<std::vector<double>> FileEmbeddingProvider::embed(
    const std::vector<std::string>& names) {
    std::vector<std::vector<double>> out;
    out.reserve(names.size());
    for (const auto& name : names) {
        auto it = table_.find(name);
        if (it == table_.end()) {
            throw BackendError("no embedding for category \"" + name + "\" in " +
                               source_.string());
        }
        out.push_back(it->second);
    }
    return out;
}

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw ValidationError("embedding dimension must be >= 1");
}

std::vector<std::vector<double>> HashEmbeddingProvider::embed(
    const std::vector<std::string>& names) {
    std::vector<std::vector<double>> out;
    out.reserve(names.size());
    for (const auto& name : names) {
        RandomSource rng(fnv1a64(name));
        std::vector<double> v(dimension_);
        double norm_sq = 0.0;
        for (auto& x : v) {
            x = rng.uniform() * 2.0 - 1.0;
            norm_sq += x * x;
        }
        const double norm = std::sqrt(norm_sq);
        for (auto& x : v) x /= norm;
        out.push_back(std::move(v));
    }
    return out;
}

EmbeddingTable embed_categories(const CategorySet& categories, EmbeddingProvider& provider) {
    EmbeddingTable table;
    table.names = categories.names();
    table.vectors = provider.embed(table.names);
    if (table.vectors.size() != table.names.size()) {
        throw BackendError("embedding provider returned " + std::to_string(table.vectors.size()) +
                           " vectors for " + std::to_string(table.names.size()) + " categories");
    }
    for (std::size_t i = 0; i < table.vectors.size(); ++i) {
        if (table.vectors[i].empty()) {
            throw ValidationError("empty embedding for category \"" + table.names[i] + "\"");
        }
        if (i == 0) {
            table.dimension = table.vectors[i].size();
        } else if (table.vectors[i].size() != table.dimension) {
            throw ValidationError("embedding dimension mismatch: \"" + table.names[i] + "\" has " +
                                  std::to_string(table.vectors[i].size()) + ", expected " +
                                  std::to_string(table.dimension));
        }
    }
    return table;
}

}  // namespace semaug
