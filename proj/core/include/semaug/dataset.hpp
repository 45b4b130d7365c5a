#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semaug/tensor.hpp"

namespace semaug {

/// COCO convention: top-left origin, [x, y, width, height] in pixels.
struct BBox {
    double x = 0, y = 0, w = 0, h = 0;
    double area() const { return w * h; }
};

struct ObjectAnnotation {
    std::int64_t annotation_id = 0;
    BBox bbox;
    std::string category;
    double area = 0;  // source value; bbox w*h when the source omits it
    bool is_crowd = false;
    std::string raw_json;  // original annotation object, kept for verbatim round-trip
};

struct DetectionSample {
    std::int64_t image_id = 0;
    std::string file_name;
    int width = 0;
    int height = 0;
    Image image;  // empty when pixels were not loaded
    std::vector<ObjectAnnotation> objects;
    std::string raw_json;  // original image entry
};

/// Distinct category names ordered by source id.
class CategorySet {
public:
    CategorySet() = default;

    /// Synthetic set with ids 0..n-1 (tests, fixtures).
    static CategorySet from_names(const std::vector<std::string>& names);
    static CategorySet from_entries(std::vector<std::pair<int, std::string>> id_name_pairs);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    bool contains(std::string_view name) const { return index_of(name).has_value(); }
    int id_of(std::string_view name) const;
    const std::string& name_at(std::size_t index) const { return names_[index]; }
    int id_at(std::size_t index) const { return ids_[index]; }

    /// Verbatim source entries (JSON text), parallel to names(); empty for
    /// synthetic sets. Lets the writer keep fields like "supercategory".
    const std::vector<std::string>& raw_entries() const { return raw_entries_; }
    void set_raw_entries(std::vector<std::string> entries) { raw_entries_ = std::move(entries); }

private:
    std::vector<std::string> names_;
    std::vector<int> ids_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> raw_entries_;
};

struct LoadOptions {
    bool load_pixels = true;
};

/// Single-producer stream over a loaded COCO file. Samples are immutable
/// after next() returns and safe to hand to concurrent workers.
class DatasetReader {
public:
    const CategorySet& categories() const { return categories_; }
    std::size_t sample_count() const { return samples_.size(); }

    std::optional<DetectionSample> next();
    std::vector<DetectionSample> read_all();

private:
    friend DatasetReader load_dataset(const std::filesystem::path&,
                                      const std::filesystem::path&, const LoadOptions&);

    CategorySet categories_;
    std::vector<DetectionSample> samples_;  // file order, pixels unloaded
    std::filesystem::path image_root_;
    bool load_pixels_ = true;
    std::size_t cursor_ = 0;
};

/// Parses and validates a COCO-style annotation file.
/// Throws ParseError (malformed JSON, with byte offset) or ValidationError
/// (missing image ids, out-of-bounds bboxes: offending ids are listed).
DatasetReader load_dataset(const std::filesystem::path& annotation_file,
                           const std::filesystem::path& image_root,
                           const LoadOptions& options = {});

/// A rewritten annotation: same bbox, new category.
struct AppliedEdit {
    std::int64_t annotation_id = 0;
    std::string target_category;
};

struct OutputSample {
    DetectionSample sample;
    std::optional<AppliedEdit> edit;
    std::optional<Image> augmented_image;  // required when edit is set
};

/// Writes annotations.json plus one raster per sample into out_dir.
/// Augmented images are stored lossless as "<image_id>_aug.png"; untouched
/// samples keep their original bytes (file copy) or are re-encoded as PNG
/// when only in-memory pixels exist.
std::filesystem::path write_dataset(const std::vector<OutputSample>& samples,
                                    const CategorySet& categories,
                                    const std::filesystem::path& image_root,
                                    const std::filesystem::path& out_dir);

}  // namespace semaug
