#include "semaug/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "semaug/affinity.hpp"
#include "semaug/alignment.hpp"
#include "semaug/dataset.hpp"
#include "semaug/ddim.hpp"
#include "semaug/errors.hpp"
#include "semaug/image_io.hpp"
#include "semaug/rng.hpp"
#include "semaug/schedule.hpp"

using nlohmann::json;

namespace semaug {

namespace {

std::uint64_t image_seed(const PipelineConfig& config, std::int64_t image_id) {
    return config.seed ^ fnv1a64(std::to_string(image_id));
}

struct StrategyContext {
    CategorySet categories;
    std::optional<AffinityMatrix> matrix;
    StrategyConfig strategy;  // theta resolved from the matrix quantile

    bool eligible(const ObjectAnnotation& object) const {
        if (object.is_crowd) return false;
        if (matrix) return matrix->index_of(object.category).has_value();
        return categories.contains(object.category);
    }
};

std::string uniform_target(const CategorySet& categories, RandomSource& rng) {
    const auto n = categories.size();
    auto index = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    if (index >= n) index = n - 1;
    return categories.name_at(index);
}

/// Embeds every category, dropping the ones the provider cannot serve.
EmbeddingTable embed_available(const CategorySet& categories, EmbeddingProvider& provider,
                               std::vector<std::string>& missing) {
    EmbeddingTable table;
    try {
        return embed_categories(categories, provider);
    } catch (const BackendError&) {
        // Partial vocabulary: retry one category at a time.
    }
    for (const auto& name : categories.names()) {
        try {
            auto vectors = provider.embed({name});
            if (vectors.size() != 1 || vectors[0].empty()) {
                throw BackendError("bad embedding for \"" + name + "\"");
            }
            if (table.dimension == 0) {
                table.dimension = vectors[0].size();
            } else if (vectors[0].size() != table.dimension) {
                throw ValidationError("embedding dimension mismatch for \"" + name + "\"");
            }
            table.names.push_back(name);
            table.vectors.push_back(std::move(vectors[0]));
        } catch (const BackendError&) {
            missing.push_back(name);
        }
    }
    if (table.names.empty()) {
        throw ValidationError("no category embeddings available");
    }
    return table;
}

StrategyContext build_strategy_context(const PipelineConfig& config,
                                       const CategorySet& categories) {
    StrategyContext ctx;
    ctx.categories = categories;
    ctx.strategy.alpha = config.alpha;
    ctx.strategy.self_downweight = config.self_downweight;
    ctx.strategy.prompt_brackets = config.prompt_brackets;
    ctx.strategy.theta = std::numeric_limits<double>::infinity();  // regenerate-only until resolved
    if (!config.use_affinity_matrix) return ctx;

    auto provider = make_embedding_provider(config.embedder);
    std::vector<std::string> missing;
    const EmbeddingTable table = embed_available(categories, *provider, missing);
    for (const auto& name : missing) {
        std::cerr << "warning: no embedding for category \"" << name
                  << "\"; its objects are excluded from selection\n";
    }
    ctx.matrix = build_affinity_matrix(table);
    if (ctx.matrix->size() >= 2) {
        ctx.strategy.theta = affinity_threshold(*ctx.matrix, config.theta_top_fraction);
    }
    return ctx;
}

struct PlanOutcome {
    std::optional<AugmentationPlan> plan;
    ObjectAnnotation object;  // valid when plan is set
    std::string skip_reason;  // set when plan is not
};

PlanOutcome plan_for_sample(const PipelineConfig& config, const StrategyContext& ctx,
                            const DetectionSample& sample, RandomSource& rng) {
    PlanOutcome outcome;
    if (!config.use_affinity_matrix && !config.use_alignment && !config.use_filter) {
        outcome.skip_reason = "toggles_disabled";
        return outcome;
    }
    if (sample.objects.empty()) {
        outcome.skip_reason = "no_objects";
        return outcome;
    }
    std::vector<ObjectAnnotation> eligible;
    for (const auto& object : sample.objects) {
        if (ctx.eligible(object)) eligible.push_back(object);
    }
    if (eligible.empty()) {
        outcome.skip_reason = "no_eligible_objects";
        return outcome;
    }
    if (config.mix_ratio > 0.0 && rng.uniform() < config.mix_ratio) {
        outcome.skip_reason = "mix_real";
        return outcome;
    }

    const double image_area = static_cast<double>(sample.width) * sample.height;
    std::vector<ObjectScores> scores;
    if (ctx.matrix) {
        scores = selection_probabilities(eligible, *ctx.matrix, ctx.strategy.alpha, image_area);
    } else {
        // No matrix: the category term carries no signal, area decides.
        std::vector<double> c1(eligible.size(), 0.0);
        std::vector<double> c2;
        c2.reserve(eligible.size());
        for (const auto& object : eligible) {
            c2.push_back(area_score(object.bbox.area(), image_area, ctx.strategy.alpha));
        }
        scores = selection_probabilities_from_scores(c1, c2);
    }
    const std::size_t pick = sample_object(scores, rng);
    outcome.object = eligible[pick];

    std::string target;
    if (ctx.matrix) {
        target = choose_target_category(outcome.object.category, *ctx.matrix, ctx.strategy.theta,
                                        ctx.strategy.self_downweight, rng);
    } else {
        target = uniform_target(ctx.categories, rng);
    }
    outcome.plan = make_plan(outcome.object, target, image_seed(config, sample.image_id),
                             ctx.strategy.prompt_brackets);
    return outcome;
}

}  // namespace

std::vector<PlanRecord> plan_dataset(const PipelineConfig& config,
                                     const std::filesystem::path& annotation_file,
                                     const std::filesystem::path& image_root) {
    config.validate();
    LoadOptions options;
    options.load_pixels = false;
    auto reader = load_dataset(annotation_file, image_root, options);
    const StrategyContext ctx = build_strategy_context(config, reader.categories());

    std::vector<PlanRecord> records;
    while (auto sample = reader.next()) {
        RandomSource rng(image_seed(config, sample->image_id));
        auto outcome = plan_for_sample(config, ctx, *sample, rng);
        PlanRecord record;
        record.image_id = sample->image_id;
        record.plan = std::move(outcome.plan);
        record.skip_reason = std::move(outcome.skip_reason);
        records.push_back(std::move(record));
    }
    return records;
}

std::string plans_to_json(const std::vector<PlanRecord>& plans) {
    json entries = json::array();
    for (const auto& record : plans) {
        json entry;
        entry["image_id"] = record.image_id;
        if (record.plan) {
            entry["annotation_id"] = record.plan->annotation_id;
            entry["source_category"] = record.plan->source_category;
            entry["target_category"] = record.plan->target_category;
            entry["prompt"] = record.plan->prompt;
            entry["is_regeneration"] = record.plan->is_regeneration;
            entry["seed"] = record.plan->seed;
        } else {
            entry["skip_reason"] = record.skip_reason;
        }
        entries.push_back(std::move(entry));
    }
    json root;
    root["version"] = "1";
    root["plans"] = std::move(entries);
    return root.dump(2);
}

double diversity_report(const std::vector<Image>& originals,
                        const std::vector<Image>& augmented, ImageEmbedder& embedder) {
    if (originals.size() != augmented.size()) {
        throw ValidationError("diversity_report: paired lists must have equal length");
    }
    if (originals.empty()) {
        throw ValidationError("diversity_report: no image pairs");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < originals.size(); ++i) {
        const auto a = embedder.embed(originals[i]);
        const auto b = embedder.embed(augmented[i]);
        sum += cosine_similarity(a, b);
    }
    return sum / static_cast<double>(originals.size());
}

PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::filesystem::path& annotation_file,
                            const std::filesystem::path& image_root,
                            const std::filesystem::path& out_dir) {
    config.validate();

    LoadOptions load_options;
    load_options.load_pixels = false;
    auto reader = load_dataset(annotation_file, image_root, load_options);
    const CategorySet categories = reader.categories();
    const std::vector<DetectionSample> samples = reader.read_all();

    const StrategyContext ctx = build_strategy_context(config, categories);
    const bool editing = config.use_affinity_matrix || config.use_alignment || config.use_filter;

    std::unique_ptr<Denoiser> denoiser;
    std::unique_ptr<ImageCodec> codec;
    std::unique_ptr<Classifier> classifier;
    std::unique_ptr<ImageEmbedder> image_embedder;
    LabelMap label_map;
    std::optional<NoiseSchedule> schedule;
    if (editing) {
        denoiser = make_denoiser(config.denoiser);
        codec = make_codec(config.codec);
        image_embedder = make_image_embedder(config.image_embedder);
        schedule = make_schedule(config.steps, config.schedule_kind);
        if (config.use_filter) {
            classifier = make_classifier(config.classifier, categories.names());
            if (!config.label_map_path.empty()) {
                label_map = LabelMap::from_file(config.label_map_path);
                label_map.validate_against(categories);
            }
        }
    }

    const std::size_t n = samples.size();
    std::vector<ImageRecord> records(n);
    std::vector<OutputSample> outputs(n);
    std::vector<char> processed(n, 0);
    std::atomic<std::size_t> cursor{0};
    std::atomic<int> consecutive_failures{0};
    std::atomic<bool> abort_run{false};
    std::mutex fatal_mutex;
    std::exception_ptr fatal;

    const EditOptions edit_options{config.use_alignment, inversion_convention(config)};

    auto edit_and_filter = [&](const DetectionSample& sample, PlanOutcome& outcome,
                               RandomSource& rng, ImageRecord& record, OutputSample& out) {
        const Image original = read_image(image_root / sample.file_name);
        if (original.width != sample.width || original.height != sample.height) {
            throw ValidationError("raster dims (" + std::to_string(original.width) + "x" +
                                  std::to_string(original.height) +
                                  ") differ from annotation metadata");
        }
        AugmentationPlan plan = *outcome.plan;
        const ObjectAnnotation& object = outcome.object;

        const EncodedLatent encoded = codec->encode(original);
        RegionMask mask;
        try {
            mask = bbox_to_latent_mask(object.bbox, sample.width, sample.height,
                                       encoded.latent.width, encoded.latent.height);
        } catch (const DegenerateMaskError&) {
            record.status = "passthrough";
            record.plan = plan;
            record.skip_reason = "degenerate_mask";
            return;
        }

        const int attempts =
            1 + (config.use_filter && config.reject_policy == RejectPolicy::Retry
                     ? config.retry_attempts
                     : 0);
        for (int attempt = 0; attempt < attempts; ++attempt) {
            if (attempt > 0) {
                const std::string target =
                    ctx.matrix ? choose_target_category(object.category, *ctx.matrix,
                                                        ctx.strategy.theta,
                                                        ctx.strategy.self_downweight, rng)
                               : uniform_target(ctx.categories, rng);
                plan = make_plan(object, target, rng.next_u64(), ctx.strategy.prompt_brackets);
            }
            const Latent edited = edit_latent(encoded.latent, plan, mask, *denoiser, *schedule,
                                              config.guidance_w, edit_options);
            Image augmented = codec->decode(edited);
            record.plan = plan;

            if (config.use_filter) {
                const Image patch = crop_object(augmented, object.bbox);
                const FilterDecision decision = filter_instance(
                    patch, plan.target_category, *classifier, label_map, config.filter_k);
                record.filter = decision;
                if (!decision.accepted) {
                    if (attempt + 1 < attempts) continue;  // new seed, one more try
                    record.status = "rejected";
                    record.dropped = (config.reject_policy == RejectPolicy::Drop);
                    return;  // keep the original sample unless dropped
                }
            }

            record.status = "augmented";
            record.similarity =
                cosine_similarity(image_embedder->embed(original), image_embedder->embed(augmented));
            out.edit = AppliedEdit{object.annotation_id, plan.target_category};
            out.augmented_image = std::move(augmented);
            return;
        }
    };

    auto process = [&](std::size_t i) {
        const auto start = std::chrono::steady_clock::now();
        const DetectionSample& sample = samples[i];
        ImageRecord record;
        record.image_id = sample.image_id;
        OutputSample out;
        out.sample = sample;

        RandomSource rng(image_seed(config, sample.image_id));
        PlanOutcome outcome = plan_for_sample(config, ctx, sample, rng);
        if (!outcome.plan) {
            record.status = "passthrough";
            record.skip_reason = outcome.skip_reason;
        } else {
            int budget = config.backend_retries;
            for (;;) {
                try {
                    edit_and_filter(sample, outcome, rng, record, out);
                    consecutive_failures.store(0);
                    break;
                } catch (const BackendError& e) {
                    if (budget-- > 0) continue;
                    record.status = "failed";
                    record.skip_reason = e.what();
                    record.filter.reset();
                    out.edit.reset();
                    out.augmented_image.reset();
                    const int failures = consecutive_failures.fetch_add(1) + 1;
                    if (failures >= config.abort_after_backend_failures) {
                        abort_run.store(true);
                    }
                    break;
                }
            }
        }

        record.duration_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        records[i] = std::move(record);
        outputs[i] = std::move(out);
        processed[i] = 1;
    };

    auto worker = [&]() {
        while (!abort_run.load()) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= n) break;
            try {
                process(i);
            } catch (const Error& e) {
                std::lock_guard<std::mutex> lock(fatal_mutex);
                if (!fatal) {
                    fatal = std::make_exception_ptr(
                        Error(e.category(), "image " + std::to_string(samples[i].image_id) +
                                                ": " + e.what()));
                }
                abort_run.store(true);
                break;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fatal_mutex);
                if (!fatal) {
                    fatal = std::make_exception_ptr(
                        IoError("image " + std::to_string(samples[i].image_id) + ": " + e.what()));
                }
                abort_run.store(true);
                break;
            }
        }
    };

    const int worker_count = std::max(1, std::min<int>(config.workers, static_cast<int>(n)));
    if (worker_count <= 1 || n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    if (fatal) std::rethrow_exception(fatal);

    const bool aborted = abort_run.load();
    for (std::size_t i = 0; i < n; ++i) {
        if (processed[i]) continue;
        records[i] = ImageRecord{};
        records[i].image_id = samples[i].image_id;
        records[i].status = "passthrough";
        records[i].skip_reason = "not_processed_run_aborted";
        outputs[i] = OutputSample{};
        outputs[i].sample = samples[i];
    }

    std::vector<OutputSample> emitted;
    emitted.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (records[i].dropped) continue;
        emitted.push_back(std::move(outputs[i]));
    }

    PipelineResult result;
    result.annotations_path = write_dataset(emitted, categories, image_root, out_dir);
    result.report.config_json = config.to_json();
    result.report.per_image = std::move(records);
    result.report.aborted = aborted;
    result.report_path = out_dir / "report.json";
    {
        std::ofstream out(result.report_path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + result.report_path.string());
        out << result.report.to_json(config.emit_timings) << "\n";
    }

    if (aborted) {
        throw BackendError("aborted after " +
                           std::to_string(config.abort_after_backend_failures) +
                           " consecutive backend failures; partial results in " +
                           out_dir.string());
    }
    return result;
}

}  // namespace semaug
