#include "semaug/config.hpp"

#include <set>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "semaug/errors.hpp"

using nlohmann::json;

namespace semaug {

std::string to_string(RejectPolicy policy) {
    switch (policy) {
        case RejectPolicy::KeepOriginal: return "keep_original";
        case RejectPolicy::Drop:         return "drop";
        case RejectPolicy::Retry:        return "retry";
    }
    return "keep_original";
}

RejectPolicy reject_policy_from_string(const std::string& text) {
    if (text == "keep_original") return RejectPolicy::KeepOriginal;
    if (text == "drop") return RejectPolicy::Drop;
    if (text == "retry") return RejectPolicy::Retry;
    throw ConfigError("unknown reject_policy \"" + text + "\"");
}

void PipelineConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must be in (0, 1)");
    if (!(theta_top_fraction > 0.0 && theta_top_fraction <= 1.0)) {
        throw ConfigError("theta_top_fraction must be in (0, 1]");
    }
    if (!(self_downweight > 0.0 && self_downweight <= 1.0)) {
        throw ConfigError("self_downweight must be in (0, 1]");
    }
    if (!(mix_ratio >= 0.0 && mix_ratio <= 1.0)) throw ConfigError("mix_ratio must be in [0, 1]");
    if (steps < 1) throw ConfigError("steps must be >= 1");
    if (filter_k < 1) throw ConfigError("filter_k must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (retry_attempts < 0) throw ConfigError("retry_attempts must be >= 0");
    if (backend_retries < 0) throw ConfigError("backend_retries must be >= 0");
    if (abort_after_backend_failures < 1) {
        throw ConfigError("abort_after_backend_failures must be >= 1");
    }
    if (inversion_time_convention != "as_written" && inversion_time_convention != "shifted") {
        throw ConfigError("inversion_time_convention must be as_written or shifted");
    }
    if (schedule_kind != "linear" && schedule_kind != "scaled_linear") {
        throw ConfigError("schedule_kind must be linear or scaled_linear");
    }
}

InversionTimeConvention inversion_convention(const PipelineConfig& config) {
    return config.inversion_time_convention == "shifted" ? InversionTimeConvention::Shifted
                                                         : InversionTimeConvention::AsWritten;
}

namespace {

json backend_to_json(const BackendOptions& b) {
    return json{{"kind", b.kind},     {"url", b.url},   {"timeout_ms", b.timeout_ms},
                {"path", b.path},     {"stub", b.stub}, {"value", b.value},
                {"dimension", b.dimension}};
}

const std::set<std::string> kBackendKeys = {"kind", "url",   "timeout_ms", "path",
                                            "stub", "value", "dimension"};

void backend_from_yaml(const YAML::Node& node, const std::string& name, BackendOptions& out) {
    if (!node.IsMap()) throw ConfigError(name + " must be a map");
    for (const auto& entry : node) {
        const auto key = entry.first.as<std::string>();
        if (!kBackendKeys.count(key)) {
            throw ConfigError("unknown key \"" + name + "." + key + "\"");
        }
    }
    if (node["kind"]) out.kind = node["kind"].as<std::string>();
    if (node["url"]) out.url = node["url"].as<std::string>();
    if (node["timeout_ms"]) out.timeout_ms = node["timeout_ms"].as<int>();
    if (node["path"]) out.path = node["path"].as<std::string>();
    if (node["stub"]) out.stub = node["stub"].as<std::string>();
    if (node["value"]) out.value = node["value"].as<double>();
    if (node["dimension"]) out.dimension = node["dimension"].as<int>();
}

}  // namespace

std::string PipelineConfig::to_json() const {
    json root;
    root["alpha"] = alpha;
    root["theta_top_fraction"] = theta_top_fraction;
    root["self_downweight"] = self_downweight;
    root["guidance_w"] = guidance_w;
    root["steps"] = steps;
    root["filter_k"] = filter_k;
    root["seed"] = seed;
    root["mix_ratio"] = mix_ratio;
    root["use_affinity_matrix"] = use_affinity_matrix;
    root["use_alignment"] = use_alignment;
    root["use_filter"] = use_filter;
    root["prompt_brackets"] = prompt_brackets;
    root["inversion_time_convention"] = inversion_time_convention;
    root["schedule_kind"] = schedule_kind;
    root["reject_policy"] = to_string(reject_policy);
    root["retry_attempts"] = retry_attempts;
    root["backend_retries"] = backend_retries;
    root["abort_after_backend_failures"] = abort_after_backend_failures;
    // workers never changes results and stays out of the echo
    root["emit_timings"] = emit_timings;
    root["label_map"] = label_map_path;
    root["embedder"] = backend_to_json(embedder);
    root["image_embedder"] = backend_to_json(image_embedder);
    root["denoiser"] = backend_to_json(denoiser);
    root["codec"] = backend_to_json(codec);
    root["classifier"] = backend_to_json(classifier);
    return root.dump(2);
}

PipelineConfig load_config(const std::filesystem::path& file) {
    YAML::Node root;
    try {
        root = YAML::LoadFile(file.string());
    } catch (const YAML::BadFile&) {
        throw IoError("cannot open config " + file.string());
    } catch (const YAML::Exception& e) {
        throw ConfigError("cannot parse config " + file.string() + ": " + e.what());
    }
    if (!root.IsMap()) throw ConfigError("config root must be a mapping");

    static const std::set<std::string> known = {
        "alpha",        "theta_top_fraction", "self_downweight",
        "guidance_w",   "steps",              "filter_k",
        "seed",         "mix_ratio",          "use_affinity_matrix",
        "use_alignment", "use_filter",        "prompt_brackets",
        "inversion_time_convention",          "schedule_kind",
        "reject_policy", "retry_attempts",    "backend_retries",
        "abort_after_backend_failures",       "workers",
        "emit_timings", "label_map",          "embedder",
        "image_embedder", "denoiser",         "codec",
        "classifier"};

    PipelineConfig config;
    try {
        for (const auto& entry : root) {
            const auto key = entry.first.as<std::string>();
            if (!known.count(key)) throw ConfigError("unknown config key \"" + key + "\"");
        }
        if (root["alpha"]) config.alpha = root["alpha"].as<double>();
        if (root["theta_top_fraction"]) {
            config.theta_top_fraction = root["theta_top_fraction"].as<double>();
        }
        if (root["self_downweight"]) config.self_downweight = root["self_downweight"].as<double>();
        if (root["guidance_w"]) config.guidance_w = root["guidance_w"].as<double>();
        if (root["steps"]) config.steps = root["steps"].as<int>();
        if (root["filter_k"]) config.filter_k = root["filter_k"].as<int>();
        if (root["seed"]) config.seed = root["seed"].as<std::uint64_t>();
        if (root["mix_ratio"]) config.mix_ratio = root["mix_ratio"].as<double>();
        if (root["use_affinity_matrix"]) {
            config.use_affinity_matrix = root["use_affinity_matrix"].as<bool>();
        }
        if (root["use_alignment"]) config.use_alignment = root["use_alignment"].as<bool>();
        if (root["use_filter"]) config.use_filter = root["use_filter"].as<bool>();
        if (root["prompt_brackets"]) config.prompt_brackets = root["prompt_brackets"].as<bool>();
        if (root["inversion_time_convention"]) {
            config.inversion_time_convention = root["inversion_time_convention"].as<std::string>();
        }
        if (root["schedule_kind"]) config.schedule_kind = root["schedule_kind"].as<std::string>();
        if (root["reject_policy"]) {
            config.reject_policy = reject_policy_from_string(root["reject_policy"].as<std::string>());
        }
        if (root["retry_attempts"]) config.retry_attempts = root["retry_attempts"].as<int>();
        if (root["backend_retries"]) config.backend_retries = root["backend_retries"].as<int>();
        if (root["abort_after_backend_failures"]) {
            config.abort_after_backend_failures = root["abort_after_backend_failures"].as<int>();
        }
        if (root["workers"]) config.workers = root["workers"].as<int>();
        if (root["emit_timings"]) config.emit_timings = root["emit_timings"].as<bool>();
        if (root["label_map"]) config.label_map_path = root["label_map"].as<std::string>();
        if (root["embedder"]) backend_from_yaml(root["embedder"], "embedder", config.embedder);
        if (root["image_embedder"]) {
            backend_from_yaml(root["image_embedder"], "image_embedder", config.image_embedder);
        }
        if (root["denoiser"]) backend_from_yaml(root["denoiser"], "denoiser", config.denoiser);
        if (root["codec"]) backend_from_yaml(root["codec"], "codec", config.codec);
        if (root["classifier"]) {
            backend_from_yaml(root["classifier"], "classifier", config.classifier);
        }
    } catch (const YAML::Exception& e) {
        throw ConfigError("invalid config value in " + file.string() + ": " + e.what());
    }

    config.validate();
    return config;
}

}  // namespace semaug
