#include "semaug/strategy.hpp"

#include <algorithm>
#include <cmath>

#include "semaug/errors.hpp"

namespace semaug {

double category_score(const ObjectAnnotation& object, const AffinityMatrix& matrix) {
    const auto row = matrix.index_of(object.category);
    if (!row) {
        throw ValidationError("category_score: unknown category \"" + object.category + "\"");
    }
    return matrix.row_sum(*row);
}

double area_score(double object_area, double image_area, double alpha) {
    if (!(image_area > 0.0)) throw ValidationError("area_score: image area must be positive");
    if (object_area < 0.0 || object_area > image_area) {
        throw ValidationError("area_score: object area outside [0, image area]");
    }
    return 1.0 - std::abs(object_area - image_area * alpha) / image_area;
}

std::vector<double> min_max_normalize(const std::vector<double>& values) {
    if (values.empty()) return {};
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<double> out(values.size(), 0.0);
    if (hi == lo) return out;  // degenerate spread; any constant works, 0 is deterministic
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = (values[i] - lo) / (hi - lo);
    }
    return out;
}

std::vector<double> softmax_abs(const std::vector<double>& values) {
    std::vector<double> out(values.size());
    double total = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = std::exp(std::abs(values[i]));
        total += out[i];
    }
    for (auto& p : out) p /= total;
    return out;
}

std::vector<ObjectScores> selection_probabilities_from_scores(
    const std::vector<double>& category_scores, const std::vector<double>& area_scores) {
    if (category_scores.empty() || category_scores.size() != area_scores.size()) {
        throw ValidationError("selection_probabilities: empty or mismatched score lists");
    }
    const auto c1_norm = min_max_normalize(category_scores);
    const auto c2_norm = min_max_normalize(area_scores);

    std::vector<double> sums(category_scores.size());
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] = c1_norm[i] + c2_norm[i];
    const auto probabilities = softmax_abs(sums);

    std::vector<ObjectScores> out(category_scores.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = ObjectScores{category_scores[i], area_scores[i], c1_norm[i], c2_norm[i],
                              probabilities[i]};
    }
    return out;
}

std::vector<ObjectScores> selection_probabilities(const std::vector<ObjectAnnotation>& objects,
                                                  const AffinityMatrix& matrix, double alpha,
                                                  double image_area) {
    if (objects.empty()) {
        throw ValidationError("selection_probabilities: no objects (skip object-free images)");
    }
    std::vector<double> c1, c2;
    c1.reserve(objects.size());
    c2.reserve(objects.size());
    for (const auto& object : objects) {
        c1.push_back(category_score(object, matrix));
        c2.push_back(area_score(object.bbox.area(), image_area, alpha));
    }
    return selection_probabilities_from_scores(c1, c2);
}

std::size_t sample_object(const std::vector<ObjectScores>& scores, RandomSource& rng) {
    std::vector<double> probabilities;
    probabilities.reserve(scores.size());
    for (const auto& s : scores) probabilities.push_back(s.probability);
    return rng.pick_weighted(probabilities);
}

std::string choose_target_category(const std::string& source, const AffinityMatrix& matrix,
                                   double theta, double self_downweight, RandomSource& rng) {
    const auto src = matrix.index_of(source);
    if (!src) {
        throw ValidationError("choose_target_category: unknown category \"" + source + "\"");
    }
    std::vector<std::size_t> candidates;
    std::vector<double> weights;
    bool has_other = false;
    for (std::size_t j = 0; j < matrix.size(); ++j) {
        const double affinity = matrix.at(*src, j);
        if (affinity < theta) continue;
        double weight = std::max(affinity, 0.0);
        if (j == *src) weight *= self_downweight;
        if (j != *src && weight > 0.0) has_other = true;
        candidates.push_back(j);
        weights.push_back(weight);
    }
    if (!has_other) return source;  // regeneration
    return matrix.names()[candidates[rng.pick_weighted(weights)]];
}

std::string render_prompt(const std::string& target_category, bool brackets) {
    if (brackets) return "A picture of [" + target_category + "]";
    return "A picture of " + target_category;
}

AugmentationPlan make_plan(const ObjectAnnotation& object, const std::string& target_category,
                           std::uint64_t seed, bool prompt_brackets) {
    AugmentationPlan plan;
    plan.annotation_id = object.annotation_id;
    plan.source_category = object.category;
    plan.target_category = target_category;
    plan.prompt = render_prompt(target_category, prompt_brackets);
    plan.is_regeneration = (target_category == object.category);
    plan.seed = seed;
    return plan;
}

}  // namespace semaug
