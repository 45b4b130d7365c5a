#include "semaug/backends.hpp"

#include <algorithm>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "semaug/errors.hpp"
#include "semaug/rng.hpp"
#include "wire_detail.hpp"

using nlohmann::json;

namespace semaug {

std::vector<double> BlockMeanImageEmbedder::embed(const Image& image) {
    if (image.empty()) throw ValidationError("image embedder: empty image");
    constexpr int kGrid = 4;
    std::vector<double> out(kGrid * kGrid * 3, 0.0);
    for (int by = 0; by < kGrid; ++by) {
        const int y0 = image.height * by / kGrid;
        const int y1 = std::max(image.height * (by + 1) / kGrid, y0 + 1);
        for (int bx = 0; bx < kGrid; ++bx) {
            const int x0 = image.width * bx / kGrid;
            const int x1 = std::max(image.width * (bx + 1) / kGrid, x0 + 1);
            double sum[3] = {0, 0, 0};
            int count = 0;
            for (int y = y0; y < y1 && y < image.height; ++y) {
                for (int x = x0; x < x1 && x < image.width; ++x) {
                    for (int c = 0; c < 3; ++c) sum[c] += image.at(y, x, c);
                    ++count;
                }
            }
            for (int c = 0; c < 3; ++c) {
                out[(by * kGrid + bx) * 3 + c] = count ? sum[c] / count : 0.0;
            }
        }
    }
    return out;
}

HashClassifier::HashClassifier(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw ValidationError("stub classifier needs a label vocabulary");
}

std::vector<Prediction> HashClassifier::classify(const Image& patch) {
    const std::uint64_t patch_hash = fnv1a64(std::string_view(
        reinterpret_cast<const char*>(patch.pixels.data()), patch.pixels.size()));
    std::vector<Prediction> out;
    out.reserve(labels_.size());
    for (const auto& label : labels_) {
        const std::uint64_t h = patch_hash ^ fnv1a64(label);
        out.push_back({label, static_cast<double>(h >> 11) * 0x1.0p-53});
    }
    std::sort(out.begin(), out.end(), [](const Prediction& a, const Prediction& b) {
        return a.score != b.score ? a.score > b.score : a.label < b.label;
    });
    return out;
}

FixedClassifier::FixedClassifier(std::vector<Prediction> predictions)
    : predictions_(std::move(predictions)) {}

FixedClassifier FixedClassifier::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open classifier table " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("malformed classifier table " + path + ": " + e.what(), e.byte);
    }
    if (!root.is_array()) {
        throw ValidationError("classifier table must be a JSON array of [label, score] pairs");
    }
    std::vector<Prediction> predictions;
    for (const auto& entry : root) {
        predictions.push_back({entry.at(0).get<std::string>(), entry.at(1).get<double>()});
    }
    return FixedClassifier(std::move(predictions));
}

std::vector<Prediction> FixedClassifier::classify(const Image&) { return predictions_; }

// --------------------------------------------------------------------------
// Remote clients
// --------------------------------------------------------------------------

struct RemoteClient::Impl {
    explicit Impl(const std::string& url) : cli(url) {}
    httplib::Client cli;
};

RemoteClient::RemoteClient(std::string url, int timeout_ms) {
    if (url.empty()) throw ConfigError("remote backend needs a url");
    impl_ = std::make_unique<Impl>(url);
    impl_->cli.set_connection_timeout(0, timeout_ms * 1000LL);
    impl_->cli.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    impl_->cli.set_write_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
}

RemoteClient::~RemoteClient() = default;

std::string RemoteClient::post_json(const std::string& route, const std::string& body) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto res = impl_->cli.Post(route, body, "application/json");
    if (!res) {
        throw BackendError("POST " + route + ": transport failure (" +
                           httplib::to_string(res.error()) + ")");
    }
    if (res->status < 200 || res->status >= 300) {
        throw BackendError("POST " + route + ": HTTP " + std::to_string(res->status) + " " +
                           res->body);
    }
    return res->body;
}

RemoteEmbedder::RemoteEmbedder(const std::string& url, int timeout_ms)
    : client_(url, timeout_ms) {}

std::vector<std::vector<double>> RemoteEmbedder::embed(const std::vector<std::string>& names) {
    const json request = {{"categories", names}};
    json response;
    try {
        response = json::parse(client_.post_json("/embed_text", request.dump()));
    } catch (const json::parse_error& e) {
        throw BackendError(std::string("embedder returned malformed JSON: ") + e.what());
    }
    auto vectors = response.at("vectors").get<std::vector<std::vector<double>>>();
    if (vectors.size() != names.size()) {
        throw BackendError("embedder returned " + std::to_string(vectors.size()) +
                           " vectors for " + std::to_string(names.size()) + " categories");
    }
    return vectors;
}

RemoteImageEmbedder::RemoteImageEmbedder(const std::string& url, int timeout_ms)
    : client_(url, timeout_ms) {}

std::vector<double> RemoteImageEmbedder::embed(const Image& image) {
    const json request = {{"image", wire::detail::image_to_json_obj(image)}};
    json response;
    try {
        response = json::parse(client_.post_json("/embed_image", request.dump()));
    } catch (const json::parse_error& e) {
        throw BackendError(std::string("image embedder returned malformed JSON: ") + e.what());
    }
    return response.at("vector").get<std::vector<double>>();
}

RemoteDenoiser::RemoteDenoiser(const std::string& url, int timeout_ms)
    : client_(url, timeout_ms) {}

Latent RemoteDenoiser::predict_noise(const Latent& z, int timestep,
                                     const std::string& condition) {
    json request = {{"latent", wire::detail::latent_to_json_obj(z)}, {"timestep", timestep}};
    if (condition.empty()) {
        request["condition"] = nullptr;  // the unconditional branch
    } else {
        request["condition"] = condition;
    }
    json response;
    try {
        response = json::parse(client_.post_json("/denoise", request.dump()));
    } catch (const json::parse_error& e) {
        throw BackendError(std::string("denoiser returned malformed JSON: ") + e.what());
    }
    return wire::detail::latent_from_json_obj(response.at("epsilon"));
}

RemoteCodec::RemoteCodec(const std::string& url, int timeout_ms) : client_(url, timeout_ms) {}

EncodedLatent RemoteCodec::encode(const Image& image) {
    const json request = {{"image", wire::detail::image_to_json_obj(image)}};
    json response;
    try {
        response = json::parse(client_.post_json("/encode", request.dump()));
    } catch (const json::parse_error& e) {
        throw BackendError(std::string("codec returned malformed JSON: ") + e.what());
    }
    EncodedLatent out;
    out.latent = wire::detail::latent_from_json_obj(response.at("latent"));
    out.downscale = response.at("downscale").get<int>();
    return out;
}

Image RemoteCodec::decode(const Latent& latent) {
    const json request = {{"latent", wire::detail::latent_to_json_obj(latent)}};
    json response;
    try {
        response = json::parse(client_.post_json("/decode", request.dump()));
    } catch (const json::parse_error& e) {
        throw BackendError(std::string("codec returned malformed JSON: ") + e.what());
    }
    return wire::detail::image_from_json_obj(response.at("image"));
}

RemoteClassifier::RemoteClassifier(const std::string& url, int timeout_ms)
    : client_(url, timeout_ms) {}

std::vector<Prediction> RemoteClassifier::classify(const Image& patch) {
    const json request = {{"image", wire::detail::image_to_json_obj(patch)}};
    json response;
    try {
        response = json::parse(client_.post_json("/classify", request.dump()));
    } catch (const json::parse_error& e) {
        throw BackendError(std::string("classifier returned malformed JSON: ") + e.what());
    }
    std::vector<Prediction> out;
    for (const auto& p : response.at("predictions")) {
        out.push_back({p.at("label").get<std::string>(), p.at("score").get<double>()});
    }
    return out;
}

// --------------------------------------------------------------------------
// Factories
// --------------------------------------------------------------------------

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const BackendOptions& options) {
    if (options.kind == "stub") {
        return std::make_unique<HashEmbeddingProvider>(options.dimension);
    }
    if (options.kind == "file") {
        if (options.path.empty()) throw ConfigError("file embedder needs a path");
        return std::make_unique<FileEmbeddingProvider>(options.path);
    }
    if (options.kind == "remote") {
        return std::make_unique<RemoteEmbedder>(options.url, options.timeout_ms);
    }
    throw ConfigError("unsupported embedder kind \"" + options.kind + "\"");
}

std::unique_ptr<ImageEmbedder> make_image_embedder(const BackendOptions& options) {
    if (options.kind == "stub") return std::make_unique<BlockMeanImageEmbedder>();
    if (options.kind == "remote") {
        return std::make_unique<RemoteImageEmbedder>(options.url, options.timeout_ms);
    }
    throw ConfigError("unsupported image embedder kind \"" + options.kind + "\"");
}

std::unique_ptr<Denoiser> make_denoiser(const BackendOptions& options) {
    if (options.kind == "stub") {
        if (options.stub == "constant") return std::make_unique<ConstantDenoiser>(options.value);
        if (options.stub == "zero") return std::make_unique<ConstantDenoiser>(0.0);
        if (options.stub == "conditioned") return std::make_unique<ConditionSeededDenoiser>();
        if (options.stub == "affine") {
            const double scale = options.value;
            return std::make_unique<AffineDenoiser>([scale](int) { return scale; },
                                                    [](int) { return 0.05; });
        }
        throw ConfigError("unsupported denoiser stub \"" + options.stub + "\"");
    }
    if (options.kind == "remote") {
        return std::make_unique<RemoteDenoiser>(options.url, options.timeout_ms);
    }
    throw ConfigError("unsupported denoiser kind \"" + options.kind + "\"");
}

std::unique_ptr<ImageCodec> make_codec(const BackendOptions& options) {
    if (options.kind == "identity" || options.kind == "stub") {
        return std::make_unique<IdentityCodec>();
    }
    if (options.kind == "remote") {
        return std::make_unique<RemoteCodec>(options.url, options.timeout_ms);
    }
    throw ConfigError("unsupported codec kind \"" + options.kind + "\"");
}

std::unique_ptr<Classifier> make_classifier(const BackendOptions& options,
                                            const std::vector<std::string>& vocabulary) {
    if (options.kind == "stub") return std::make_unique<HashClassifier>(vocabulary);
    if (options.kind == "file") {
        if (options.path.empty()) throw ConfigError("file classifier needs a path");
        return std::make_unique<FixedClassifier>(FixedClassifier::from_file(options.path));
    }
    if (options.kind == "remote") {
        return std::make_unique<RemoteClassifier>(options.url, options.timeout_ms);
    }
    throw ConfigError("unsupported classifier kind \"" + options.kind + "\"");
}

}  // namespace semaug
