#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "semaug/backends.hpp"

namespace semaug {

enum class RejectPolicy { KeepOriginal, Drop, Retry };

std::string to_string(RejectPolicy policy);
RejectPolicy reject_policy_from_string(const std::string& text);

struct PipelineConfig {
    double alpha = 0.35;                // best selection ratio
    double theta_top_fraction = 0.03;   // affinity quantile defining theta
    double self_downweight = 0.5;       // weight multiplier on the source category
    double guidance_w = 7.5;
    int steps = 50;                     // scheduler steps T
    int filter_k = 3;
    std::uint64_t seed = 0;
    double mix_ratio = 0.0;             // fraction of images kept real/unaugmented

    bool use_affinity_matrix = true;
    bool use_alignment = true;
    bool use_filter = true;

    bool prompt_brackets = true;
    std::string inversion_time_convention = "as_written";  // as_written | shifted
    std::string schedule_kind = "linear";                   // linear | scaled_linear

    RejectPolicy reject_policy = RejectPolicy::KeepOriginal;
    int retry_attempts = 1;                 // extra edits under reject_policy retry
    int backend_retries = 2;                // per-image retries on backend errors
    int abort_after_backend_failures = 5;   // consecutive failing images before aborting

    int workers = 1;
    bool emit_timings = false;  // per-image timings make reports non-reproducible
    std::string label_map_path;

    BackendOptions embedder;
    BackendOptions image_embedder;
    BackendOptions denoiser;
    BackendOptions codec;
    BackendOptions classifier;

    PipelineConfig() { codec.kind = "identity"; }

    /// Throws ConfigError on out-of-range values or unsupported enums.
    void validate() const;

    /// Canonical JSON echo embedded in reports.
    std::string to_json() const;
};

/// Reads YAML (.yaml/.yml) or JSON (.json). Unknown keys are rejected.
PipelineConfig load_config(const std::filesystem::path& file);

InversionTimeConvention inversion_convention(const PipelineConfig& config);

}  // namespace semaug
