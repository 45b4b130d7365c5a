#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semaug/affinity.hpp"
#include "semaug/dataset.hpp"
#include "semaug/rng.hpp"

namespace semaug {

struct ObjectScores {
    double category_score = 0.0;   // raw affinity row sum
    double area_score = 0.0;       // raw size score
    double category_norm = 0.0;    // min-max normalized, in [0, 1]
    double area_norm = 0.0;        // min-max normalized, in [0, 1]
    double probability = 0.0;      // softmax over the image's objects
};

struct StrategyConfig {
    double alpha = 0.35;           // best selection ratio, fraction of image area
    double theta = 0.0;            // affinity threshold for target candidates
    double self_downweight = 0.5;  // multiplicative weight on re-picking the source category
    bool prompt_brackets = true;
};

struct AugmentationPlan {
    std::int64_t annotation_id = 0;
    std::string source_category;
    std::string target_category;
    std::string prompt;
    bool is_regeneration = false;  // target == source
    std::uint64_t seed = 0;
};

/// Sum of the object's affinity row, diagonal included. The diagonal term is
/// a constant shift across objects and cannot change selection (min-max
/// normalization removes it; see the shift-invariance tests).
double category_score(const ObjectAnnotation& object, const AffinityMatrix& matrix);

/// 1 - |s(o) - s(I) * alpha| / s(I). Peaks at object area == alpha * image area.
double area_score(double object_area, double image_area, double alpha);

/// (x - min) / (max - min); all zeros when max == min.
std::vector<double> min_max_normalize(const std::vector<double>& values);

/// Softmax of |x_i|.
std::vector<double> softmax_abs(const std::vector<double>& values);

std::vector<ObjectScores> selection_probabilities_from_scores(
    const std::vector<double>& category_scores, const std::vector<double>& area_scores);

/// Per-object selection probabilities for one image. Object area is bbox w*h.
std::vector<ObjectScores> selection_probabilities(const std::vector<ObjectAnnotation>& objects,
                                                  const AffinityMatrix& matrix, double alpha,
                                                  double image_area);

std::size_t sample_object(const std::vector<ObjectScores>& scores, RandomSource& rng);

/// Candidates are categories with affinity >= theta to the source; each is
/// weighted by its affinity, the source itself additionally by
/// self_downweight. Falls back to the source (regeneration) when no other
/// candidate clears the threshold.
std::string choose_target_category(const std::string& source, const AffinityMatrix& matrix,
                                   double theta, double self_downweight, RandomSource& rng);

std::string render_prompt(const std::string& target_category, bool brackets = true);

AugmentationPlan make_plan(const ObjectAnnotation& object, const std::string& target_category,
                           std::uint64_t seed, bool prompt_brackets = true);

}  // namespace semaug
