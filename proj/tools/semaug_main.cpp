#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "semaug/backends.hpp"
#include "semaug/config.hpp"
#include "semaug/dataset.hpp"
#include "semaug/errors.hpp"
#include "semaug/image_io.hpp"
#include "semaug/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string dataset;
    std::string images;
    std::string out;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<double> alpha;
    std::optional<double> theta_top_fraction;
    std::optional<double> self_downweight;
    std::optional<double> guidance_w;
    std::optional<int> steps;
    std::optional<int> filter_k;
    std::optional<double> mix_ratio;
    bool no_matrix = false;
    bool no_alignment = false;
    bool no_filter = false;
    bool emit_timings = false;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "Global seed");
    cmd->add_option("--workers", o.workers, "Worker thread count");
    cmd->add_option("--alpha", o.alpha, "Best selection ratio");
    cmd->add_option("--theta-top-fraction", o.theta_top_fraction,
                    "Affinity quantile defining the threshold");
    cmd->add_option("--self-downweight", o.self_downweight,
                    "Weight multiplier on regenerating the source category");
    cmd->add_option("--guidance-w", o.guidance_w, "Guidance weight");
    cmd->add_option("--steps", o.steps, "Scheduler steps");
    cmd->add_option("--filter-k", o.filter_k, "Filter top-k");
    cmd->add_option("--mix-ratio", o.mix_ratio, "Fraction of images kept unaugmented");
    cmd->add_flag("--no-matrix", o.no_matrix, "Disable the affinity matrix (uniform targets)");
    cmd->add_flag("--no-alignment", o.no_alignment, "Disable surrounding region alignment");
    cmd->add_flag("--no-filter", o.no_filter, "Disable the instance-level filter");
    cmd->add_flag("--emit-timings", o.emit_timings, "Include per-image timings in the report");
}

semaug::PipelineConfig resolve_config(const CommonArgs& args, const Overrides& o) {
    semaug::PipelineConfig config;
    if (!args.config_path.empty()) config = semaug::load_config(args.config_path);
    if (o.seed) config.seed = *o.seed;
    if (o.workers) config.workers = *o.workers;
    if (o.alpha) config.alpha = *o.alpha;
    if (o.theta_top_fraction) config.theta_top_fraction = *o.theta_top_fraction;
    if (o.self_downweight) config.self_downweight = *o.self_downweight;
    if (o.guidance_w) config.guidance_w = *o.guidance_w;
    if (o.steps) config.steps = *o.steps;
    if (o.filter_k) config.filter_k = *o.filter_k;
    if (o.mix_ratio) config.mix_ratio = *o.mix_ratio;
    if (o.no_matrix) config.use_affinity_matrix = false;
    if (o.no_alignment) config.use_alignment = false;
    if (o.no_filter) config.use_filter = false;
    if (o.emit_timings) config.emit_timings = true;
    config.validate();
    return config;
}

int cmd_augment(const CommonArgs& args, const Overrides& o) {
    const auto config = resolve_config(args, o);
    const auto result = semaug::run_pipeline(config, args.dataset, args.images, args.out);
    std::cout << result.report.summary();
    std::cout << "annotations: " << result.annotations_path.string() << "\n"
              << "report:      " << result.report_path.string() << "\n";
    return 0;
}

int cmd_plan(const CommonArgs& args, const Overrides& o) {
    const auto config = resolve_config(args, o);
    const auto plans = semaug::plan_dataset(config, args.dataset, args.images);
    const std::string text = semaug::plans_to_json(plans);
    if (args.out.empty() || args.out == "-") {
        std::cout << text << "\n";
    } else {
        std::ofstream out(args.out, std::ios::binary | std::ios::trunc);
        if (!out) throw semaug::IoError("cannot write " + args.out);
        out << text << "\n";
        std::cout << "plans: " << args.out << "\n";
    }
    return 0;
}

int cmd_report(const CommonArgs& args, const Overrides& o) {
    const auto config = resolve_config(args, o);

    std::ifstream in(fs::path(args.out) / "report.json", std::ios::binary);
    if (!in) throw semaug::IoError("cannot open " + args.out + "/report.json");
    json report = json::parse(in);

    semaug::LoadOptions options;
    options.load_pixels = false;
    auto reader = semaug::load_dataset(args.dataset, args.images, options);
    std::unordered_map<std::int64_t, std::string> file_names;
    for (const auto& sample : reader.read_all()) {
        file_names[sample.image_id] = sample.file_name;
    }

    std::vector<semaug::Image> originals, augmented;
    for (const auto& entry : report.at("per_image")) {
        if (entry.value("status", "") != "augmented") continue;
        const auto image_id = entry.at("image_id").get<std::int64_t>();
        auto it = file_names.find(image_id);
        if (it == file_names.end()) {
            throw semaug::ConsistencyError("report references unknown image id " +
                                           std::to_string(image_id));
        }
        originals.push_back(semaug::read_image(fs::path(args.images) / it->second));
        augmented.push_back(semaug::read_image(fs::path(args.out) /
                                               (std::to_string(image_id) + "_aug.png")));
    }

    json out;
    out["pairs"] = originals.size();
    if (originals.empty()) {
        out["mean_similarity"] = nullptr;
    } else {
        auto embedder = semaug::make_image_embedder(config.image_embedder);
        out["mean_similarity"] = semaug::diversity_report(originals, augmented, *embedder);
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_validate(const CommonArgs& args) {
    semaug::LoadOptions options;
    options.load_pixels = false;
    auto reader = semaug::load_dataset(args.dataset, args.images, options);
    std::size_t annotation_count = 0;
    std::size_t image_count = 0;
    std::vector<std::string> missing_files;
    while (auto sample = reader.next()) {
        ++image_count;
        annotation_count += sample->objects.size();
        if (!args.images.empty() && !fs::exists(fs::path(args.images) / sample->file_name)) {
            missing_files.push_back(sample->file_name);
        }
    }
    if (!missing_files.empty()) {
        std::string joined;
        for (const auto& f : missing_files) joined += " " + f;
        throw semaug::ValidationError("missing image files:" + joined);
    }
    std::cout << "ok: " << image_count << " images, " << annotation_count << " annotations, "
              << reader.categories().size() << " categories\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Detection-dataset augmentation via affinity-guided diffusion editing"};
    app.require_subcommand(1);

    CommonArgs args;
    Overrides overrides;

    auto* augment = app.add_subcommand("augment", "Run the full augmentation pipeline");
    augment->add_option("--config", args.config_path, "Config file (YAML or JSON)");
    augment->add_option("--dataset", args.dataset, "COCO annotation file")->required();
    augment->add_option("--images", args.images, "Image root directory")->required();
    augment->add_option("--out", args.out, "Output directory")->required();
    add_override_flags(augment, overrides);

    auto* plan = app.add_subcommand("plan", "Dry-run: emit augmentation plans only");
    plan->add_option("--config", args.config_path, "Config file (YAML or JSON)");
    plan->add_option("--dataset", args.dataset, "COCO annotation file")->required();
    plan->add_option("--images", args.images, "Image root directory")->required();
    plan->add_option("--out", args.out, "Plan file path (default: stdout)");
    add_override_flags(plan, overrides);

    auto* report = app.add_subcommand("report", "Recompute diversity metrics for a finished run");
    report->add_option("--config", args.config_path, "Config file (YAML or JSON)");
    report->add_option("--dataset", args.dataset, "COCO annotation file")->required();
    report->add_option("--images", args.images, "Image root directory")->required();
    report->add_option("--out", args.out, "Run output directory")->required();

    auto* validate = app.add_subcommand("validate", "Lint a COCO annotation file");
    validate->add_option("--dataset", args.dataset, "COCO annotation file")->required();
    validate->add_option("--images", args.images, "Image root directory (checks file existence)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(augment)) return cmd_augment(args, overrides);
        if (app.got_subcommand(plan)) return cmd_plan(args, overrides);
        if (app.got_subcommand(report)) return cmd_report(args, overrides);
        if (app.got_subcommand(validate)) return cmd_validate(args);
    } catch (const semaug::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return semaug::exit_code_for(e.category());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
