#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "semaug/dataset.hpp"
#include "semaug/tensor.hpp"

namespace semaug {

struct Prediction {
    std::string label;
    double score = 0.0;
};

/// Instance classifier over image patches. Returned predictions are ranked
/// by descending score; the backend's order is authoritative for ties and is
/// never re-sorted here.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual std::vector<Prediction> classify(const Image& patch) = 0;
};

/// classifier label -> dataset category (many-to-one). Unmapped labels fall
/// back to themselves, so the identity map is the zero-config default.
class LabelMap {
public:
    LabelMap() = default;
    static LabelMap from_file(const std::filesystem::path& file);  // JSON {label: category}
    static LabelMap from_map(std::unordered_map<std::string, std::string> entries);

    const std::string& map_label(const std::string& label) const;

    /// Every mapped value must be a known dataset category.
    void validate_against(const CategorySet& categories) const;

private:
    std::unordered_map<std::string, std::string> entries_;
};

/// Patch of exactly the bbox extent (pixel cover of the real-valued box).
Image crop_object(const Image& image, const BBox& bbox);

struct FilterDecision {
    bool accepted = false;
    std::vector<std::string> top_labels;  // the (mapped) top-k, kept for the report
};

/// Accept iff the target category appears among the classifier's top-k
/// predictions after label mapping.
FilterDecision filter_instance(const Image& patch, const std::string& target_category,
                               Classifier& classifier, const LabelMap& label_map, int k);

}  // namespace semaug
