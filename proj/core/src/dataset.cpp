#include "semaug/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "semaug/errors.hpp"
#include "semaug/image_io.hpp"

using nlohmann::json;

namespace semaug {

namespace {

json parse_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("malformed JSON in " + path.string() + ": " + e.what(), e.byte);
    }
}

std::string join_ids(const std::vector<std::int64_t>& ids) {
    std::ostringstream out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out << ", ";
        out << ids[i];
    }
    return out.str();
}

}  // namespace

CategorySet CategorySet::from_names(const std::vector<std::string>& names) {
    std::vector<std::pair<int, std::string>> entries;
    entries.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        entries.emplace_back(static_cast<int>(i), names[i]);
    }
    return from_entries(std::move(entries));
}

CategorySet CategorySet::from_entries(std::vector<std::pair<int, std::string>> id_name_pairs) {
    std::stable_sort(id_name_pairs.begin(), id_name_pairs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    CategorySet set;
    for (auto& [id, name] : id_name_pairs) {
        if (!set.ids_.empty() && set.ids_.back() == id) {
            throw ValidationError("duplicate category id: " + std::to_string(id));
        }
        if (set.index_.count(name)) {
            throw ValidationError("duplicate category name: " + name);
        }
        set.index_[name] = set.names_.size();
        set.names_.push_back(std::move(name));
        set.ids_.push_back(id);
    }
    return set;
}

std::optional<std::size_t> CategorySet::index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int CategorySet::id_of(std::string_view name) const {
    auto idx = index_of(name);
    if (!idx) throw ValidationError("unknown category: " + std::string(name));
    return ids_[*idx];
}

std::optional<DetectionSample> DatasetReader::next() {
    if (cursor_ >= samples_.size()) return std::nullopt;
    DetectionSample sample = samples_[cursor_++];
    if (load_pixels_) {
        sample.image = read_image(image_root_ / sample.file_name);
    }
    return sample;
}

std::vector<DetectionSample> DatasetReader::read_all() {
    std::vector<DetectionSample> all;
    while (auto s = next()) all.push_back(std::move(*s));
    return all;
}

DatasetReader load_dataset(const std::filesystem::path& annotation_file,
                           const std::filesystem::path& image_root,
                           const LoadOptions& options) {
    const json root = parse_json_file(annotation_file);
    for (const char* key : {"images", "annotations", "categories"}) {
        if (!root.contains(key) || !root[key].is_array()) {
            throw ValidationError(std::string("annotation file missing array \"") + key + "\"");
        }
    }

    std::vector<std::pair<int, std::string>> category_entries;
    std::vector<std::pair<int, std::string>> category_raw;  // (id, raw text)
    for (const auto& cat : root["categories"]) {
        category_entries.emplace_back(cat.at("id").get<int>(), cat.at("name").get<std::string>());
        category_raw.emplace_back(cat.at("id").get<int>(), cat.dump());
    }
    CategorySet categories = CategorySet::from_entries(category_entries);
    std::sort(category_raw.begin(), category_raw.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::string> raw_entries;
    raw_entries.reserve(category_raw.size());
    for (auto& [id, text] : category_raw) raw_entries.push_back(std::move(text));
    categories.set_raw_entries(std::move(raw_entries));

    std::unordered_map<int, std::string> id_to_name;
    for (std::size_t i = 0; i < categories.size(); ++i) {
        id_to_name[categories.id_at(i)] = categories.name_at(i);
    }

    std::vector<DetectionSample> samples;
    std::unordered_map<std::int64_t, std::size_t> image_index;
    for (const auto& img : root["images"]) {
        DetectionSample s;
        s.image_id = img.at("id").get<std::int64_t>();
        s.file_name = img.value("file_name", "");
        s.width = img.at("width").get<int>();
        s.height = img.at("height").get<int>();
        s.raw_json = img.dump();
        if (image_index.count(s.image_id)) {
            throw ValidationError("duplicate image id: " + std::to_string(s.image_id));
        }
        image_index[s.image_id] = samples.size();
        samples.push_back(std::move(s));
    }

    std::vector<std::int64_t> missing_image_refs;
    std::vector<std::int64_t> bad_bboxes;
    for (const auto& ann : root["annotations"]) {
        ObjectAnnotation obj;
        obj.annotation_id = ann.at("id").get<std::int64_t>();
        const auto image_id = ann.at("image_id").get<std::int64_t>();
        auto it = image_index.find(image_id);
        if (it == image_index.end()) {
            missing_image_refs.push_back(obj.annotation_id);
            continue;
        }
        DetectionSample& sample = samples[it->second];

        const auto& bbox = ann.at("bbox");
        if (!bbox.is_array() || bbox.size() != 4) {
            throw ValidationError("annotation " + std::to_string(obj.annotation_id) +
                                  ": bbox must be [x, y, w, h]");
        }
        obj.bbox = BBox{bbox[0].get<double>(), bbox[1].get<double>(), bbox[2].get<double>(),
                        bbox[3].get<double>()};

        const int category_id = ann.at("category_id").get<int>();
        auto cat_it = id_to_name.find(category_id);
        if (cat_it == id_to_name.end()) {
            throw ValidationError("annotation " + std::to_string(obj.annotation_id) +
                                  " references unknown category id " + std::to_string(category_id));
        }
        obj.category = cat_it->second;
        obj.area = ann.contains("area") ? ann["area"].get<double>() : obj.bbox.area();
        obj.is_crowd = ann.value("iscrowd", 0) != 0;
        obj.raw_json = ann.dump();

        const bool degenerate = !(obj.bbox.w > 0.0 && obj.bbox.h > 0.0 && obj.area > 0.0);
        const bool outside = obj.bbox.x < 0.0 || obj.bbox.y < 0.0 ||
                             obj.bbox.x + obj.bbox.w > sample.width ||
                             obj.bbox.y + obj.bbox.h > sample.height;
        if (degenerate || outside) {
            bad_bboxes.push_back(obj.annotation_id);
            continue;
        }
        sample.objects.push_back(std::move(obj));
    }
    if (!missing_image_refs.empty()) {
        throw ValidationError("annotations reference missing image ids (annotation ids: " +
                              join_ids(missing_image_refs) + ")");
    }
    if (!bad_bboxes.empty()) {
        throw ValidationError("annotations with bbox outside image or non-positive extent "
                              "(annotation ids: " + join_ids(bad_bboxes) + ")");
    }

    DatasetReader reader;
    reader.categories_ = std::move(categories);
    reader.samples_ = std::move(samples);
    reader.image_root_ = image_root;
    reader.load_pixels_ = options.load_pixels;
    return reader;
}

namespace {

std::string output_image_name(const OutputSample& out) {
    if (out.edit) return std::to_string(out.sample.image_id) + "_aug.png";
    if (!out.sample.file_name.empty()) return out.sample.file_name;
    return std::to_string(out.sample.image_id) + ".png";
}

json annotation_json(const ObjectAnnotation& obj, const CategorySet& categories,
                     std::int64_t image_id) {
    json ann;
    if (!obj.raw_json.empty()) {
        ann = json::parse(obj.raw_json);
    } else {
        ann["id"] = obj.annotation_id;
        ann["image_id"] = image_id;
        ann["bbox"] = {obj.bbox.x, obj.bbox.y, obj.bbox.w, obj.bbox.h};
        ann["area"] = obj.area;
        ann["iscrowd"] = obj.is_crowd ? 1 : 0;
        ann["category_id"] = categories.id_of(obj.category);
    }
    return ann;
}

}  // namespace

std::filesystem::path write_dataset(const std::vector<OutputSample>& samples,
                                    const CategorySet& categories,
                                    const std::filesystem::path& image_root,
                                    const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
        throw IoError("cannot create output directory " + out_dir.string());
    }

    json images = json::array();
    json annotations = json::array();

    for (const auto& out : samples) {
        const DetectionSample& sample = out.sample;
        const std::string image_name = output_image_name(out);
        const auto image_path = out_dir / image_name;
        if (image_path.has_parent_path()) {
            std::filesystem::create_directories(image_path.parent_path(), ec);
        }

        if (out.edit) {
            if (!out.augmented_image || out.augmented_image->empty()) {
                throw ValidationError("augmented sample " + std::to_string(sample.image_id) +
                                      " has no raster");
            }
            const bool known = std::any_of(
                sample.objects.begin(), sample.objects.end(),
                [&](const ObjectAnnotation& o) { return o.annotation_id == out.edit->annotation_id; });
            if (!known) {
                throw ConsistencyError("edit references unknown annotation id " +
                                       std::to_string(out.edit->annotation_id));
            }
            write_png(out_dir / image_name, *out.augmented_image);
        } else if (!sample.file_name.empty() &&
                   std::filesystem::exists(image_root / sample.file_name)) {
            std::filesystem::copy_file(image_root / sample.file_name, out_dir / image_name,
                                       std::filesystem::copy_options::overwrite_existing, ec);
            if (ec) throw IoError("cannot copy " + sample.file_name + ": " + ec.message());
        } else if (!sample.image.empty()) {
            write_png(out_dir / image_name, sample.image);
        } else {
            throw IoError("sample " + std::to_string(sample.image_id) +
                          " has neither a source file nor pixels");
        }

        json img;
        if (!sample.raw_json.empty()) {
            img = json::parse(sample.raw_json);
        } else {
            img["id"] = sample.image_id;
            img["width"] = sample.width;
            img["height"] = sample.height;
        }
        img["file_name"] = image_name;
        images.push_back(std::move(img));

        for (const auto& obj : sample.objects) {
            json ann = annotation_json(obj, categories, sample.image_id);
            if (out.edit && obj.annotation_id == out.edit->annotation_id) {
                ann["category_id"] = categories.id_of(out.edit->target_category);
                // The generated object has no known polygon; never emit a stale mask.
                ann.erase("segmentation");
            }
            annotations.push_back(std::move(ann));
        }
    }

    json categories_json = json::array();
    if (!categories.raw_entries().empty()) {
        for (const auto& raw : categories.raw_entries()) {
            categories_json.push_back(json::parse(raw));
        }
    } else {
        for (std::size_t i = 0; i < categories.size(); ++i) {
            categories_json.push_back(
                {{"id", categories.id_at(i)}, {"name", categories.name_at(i)}});
        }
    }

    json root;
    root["images"] = std::move(images);
    root["annotations"] = std::move(annotations);
    root["categories"] = std::move(categories_json);

    const auto annotation_path = out_dir / "annotations.json";
    std::ofstream outfile(annotation_path, std::ios::binary | std::ios::trunc);
    if (!outfile) throw IoError("cannot write " + annotation_path.string());
    outfile << root.dump(2) << "\n";
    return annotation_path;
}

}  // namespace semaug
