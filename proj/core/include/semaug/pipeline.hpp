#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "semaug/backends.hpp"
#include "semaug/config.hpp"
#include "semaug/report.hpp"
#include "semaug/strategy.hpp"

namespace semaug {

struct PipelineResult {
    std::filesystem::path annotations_path;
    std::filesystem::path report_path;
    RunReport report;
};

/// Full run: load, plan, edit, filter, write dataset + report.json under
/// out_dir. Backend outages abort after the configured failure budget with a
/// partial report on disk; validation errors propagate with image context.
PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::filesystem::path& annotation_file,
                            const std::filesystem::path& image_root,
                            const std::filesystem::path& out_dir);

/// Strategy dry-run: per-image plans without touching denoiser/codec/filter.
struct PlanRecord {
    std::int64_t image_id = 0;
    std::optional<AugmentationPlan> plan;
    std::string skip_reason;
};

std::vector<PlanRecord> plan_dataset(const PipelineConfig& config,
                                     const std::filesystem::path& annotation_file,
                                     const std::filesystem::path& image_root);

std::string plans_to_json(const std::vector<PlanRecord>& plans);

/// Mean cosine similarity between paired original/augmented embeddings.
double diversity_report(const std::vector<Image>& originals,
                        const std::vector<Image>& augmented, ImageEmbedder& embedder);

}  // namespace semaug
