#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semaug/filter.hpp"
#include "semaug/strategy.hpp"

namespace semaug {

/// One line per input image; statuses:
///   augmented    edited image accepted and emitted
///   rejected     filter rejected; original kept or dropped per policy
///   passthrough  not edited (no objects, mix_ratio draw, skip reason)
///   failed       backend errors exhausted retries; original kept
struct ImageRecord {
    std::int64_t image_id = 0;
    std::string status;
    std::optional<AugmentationPlan> plan;
    std::string skip_reason;
    std::optional<FilterDecision> filter;
    std::optional<double> similarity;  // original vs augmented embedding cosine
    double duration_ms = 0.0;
    bool dropped = false;  // true when the sample was removed from the output
};

struct ReportAggregates {
    std::size_t images = 0;
    std::size_t augmented = 0;
    std::size_t regenerated = 0;  // augmented with target == source
    std::size_t rejected = 0;
    std::size_t passthrough = 0;
    std::size_t failed = 0;
    std::optional<double> mean_similarity;
};

struct RunReport {
    std::string version = "1";
    std::string config_json;
    std::vector<ImageRecord> per_image;
    bool aborted = false;

    ReportAggregates aggregates() const;

    /// Deterministic serialization; timings are emitted only on request since
    /// they vary run to run.
    std::string to_json(bool emit_timings = false) const;

    /// Human-readable summary table.
    std::string summary() const;
};

}  // namespace semaug
