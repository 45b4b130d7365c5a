#include "semaug/report.hpp"

#include <sstream>

#include <json.hpp>

using nlohmann::json;

namespace semaug {

ReportAggregates RunReport::aggregates() const {
    ReportAggregates agg;
    agg.images = per_image.size();
    double similarity_sum = 0.0;
    std::size_t similarity_count = 0;
    for (const auto& record : per_image) {
        if (record.status == "augmented") {
            ++agg.augmented;
            if (record.plan && record.plan->is_regeneration) ++agg.regenerated;
        } else if (record.status == "rejected") {
            ++agg.rejected;
        } else if (record.status == "failed") {
            ++agg.failed;
        } else {
            ++agg.passthrough;
        }
        if (record.similarity) {
            similarity_sum += *record.similarity;
            ++similarity_count;
        }
    }
    if (similarity_count > 0) {
        agg.mean_similarity = similarity_sum / static_cast<double>(similarity_count);
    }
    return agg;
}

std::string RunReport::to_json(bool emit_timings) const {
    json images = json::array();
    for (const auto& record : per_image) {
        json entry;
        entry["image_id"] = record.image_id;
        entry["status"] = record.status;
        if (record.plan) {
            entry["plan"] = {{"annotation_id", record.plan->annotation_id},
                             {"source_category", record.plan->source_category},
                             {"target_category", record.plan->target_category},
                             {"prompt", record.plan->prompt},
                             {"is_regeneration", record.plan->is_regeneration},
                             {"seed", record.plan->seed}};
        }
        if (!record.skip_reason.empty()) entry["skip_reason"] = record.skip_reason;
        if (record.filter) {
            entry["filter"] = {{"accepted", record.filter->accepted},
                               {"top_labels", record.filter->top_labels}};
        }
        if (record.similarity) entry["similarity"] = *record.similarity;
        if (record.dropped) entry["dropped"] = true;
        if (emit_timings) entry["duration_ms"] = record.duration_ms;
        images.push_back(std::move(entry));
    }

    const auto agg = aggregates();
    json aggregates_json = {{"images", agg.images},
                            {"augmented", agg.augmented},
                            {"regenerated", agg.regenerated},
                            {"rejected", agg.rejected},
                            {"passthrough", agg.passthrough},
                            {"failed", agg.failed}};
    aggregates_json["mean_similarity"] =
        agg.mean_similarity ? json(*agg.mean_similarity) : json(nullptr);

    json root;
    root["version"] = version;
    root["config"] = json::parse(config_json.empty() ? "{}" : config_json);
    root["per_image"] = std::move(images);
    root["aggregates"] = std::move(aggregates_json);
    root["aborted"] = aborted;
    return root.dump(2);
}

std::string RunReport::summary() const {
    const auto agg = aggregates();
    std::ostringstream out;
    out << "images:       " << agg.images << "\n"
        << "augmented:    " << agg.augmented << " (regenerated: " << agg.regenerated << ")\n"
        << "rejected:     " << agg.rejected << "\n"
        << "passthrough:  " << agg.passthrough << "\n"
        << "failed:       " << agg.failed << "\n";
    if (agg.mean_similarity) {
        out << "mean cosine similarity (original vs augmented): " << *agg.mean_similarity << "\n";
    }
    if (aborted) out << "RUN ABORTED: backend outage, report is partial\n";
    return out.str();
}

}  // namespace semaug
