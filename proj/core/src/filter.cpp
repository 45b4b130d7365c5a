#include "semaug/filter.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "semaug/errors.hpp"

using nlohmann::json;

namespace semaug {

LabelMap LabelMap::from_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open label map " + file.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("malformed label map " + file.string() + ": " + e.what(), e.byte);
    }
    if (!root.is_object()) {
        throw ValidationError("label map must be a JSON object: " + file.string());
    }
    std::unordered_map<std::string, std::string> entries;
    for (const auto& [label, category] : root.items()) {
        if (!category.is_string()) {
            throw ValidationError("label map value for \"" + label + "\" must be a string");
        }
        entries[label] = category.get<std::string>();
    }
    return from_map(std::move(entries));
}

LabelMap LabelMap::from_map(std::unordered_map<std::string, std::string> entries) {
    LabelMap map;
    map.entries_ = std::move(entries);
    return map;
}

const std::string& LabelMap::map_label(const std::string& label) const {
    auto it = entries_.find(label);
    return it == entries_.end() ? label : it->second;
}

void LabelMap::validate_against(const CategorySet& categories) const {
    for (const auto& [label, category] : entries_) {
        if (!categories.contains(category)) {
            throw ValidationError("label map sends \"" + label + "\" to unknown category \"" +
                                  category + "\"");
        }
    }
}

Image crop_object(const Image& image, const BBox& bbox) {
    if (image.empty()) throw ValidationError("crop_object: empty image");
    if (!(bbox.w > 0.0 && bbox.h > 0.0)) throw ValidationError("crop_object: empty bbox");
    const int x0 = static_cast<int>(std::floor(bbox.x));
    const int y0 = static_cast<int>(std::floor(bbox.y));
    const int x1 = static_cast<int>(std::ceil(bbox.x + bbox.w));
    const int y1 = static_cast<int>(std::ceil(bbox.y + bbox.h));
    if (x0 < 0 || y0 < 0 || x1 > image.width || y1 > image.height) {
        throw ValidationError("crop_object: bbox outside image");
    }
    Image patch(x1 - x0, y1 - y0);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            for (int c = 0; c < 3; ++c) {
                patch.at(y - y0, x - x0, c) = image.at(y, x, c);
            }
        }
    }
    return patch;
}

FilterDecision filter_instance(const Image& patch, const std::string& target_category,
                               Classifier& classifier, const LabelMap& label_map, int k) {
    if (k < 1) throw ValidationError("filter_instance: k must be >= 1");
    const auto predictions = classifier.classify(patch);

    FilterDecision decision;
    const std::size_t take = std::min<std::size_t>(k, predictions.size());
    decision.top_labels.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        const std::string& mapped = label_map.map_label(predictions[i].label);
        decision.top_labels.push_back(mapped);
        if (mapped == target_category) decision.accepted = true;
    }
    return decision;
}

}  // namespace semaug
